#ifndef RB_DIFF_NN_HPP_
#define RB_DIFF_NN_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "rb/diff/param_store.hpp"
#include "rb/diff/tape.hpp"

namespace rb::diff {

enum class Activation { kIdentity, kRelu, kSigmoid, kTanh };

inline Var activate(Tape& t, Var x, Activation act) {
  switch (act) {
    case Activation::kIdentity: return x;
    case Activation::kRelu: return t.relu(x);
    case Activation::kSigmoid: return t.sigmoid(x);
    case Activation::kTanh: return t.tanh(x);
  }
  return x;
}

// Affine map y = Wx + b. Holds references into a ParamStore.
struct Linear {
  ParamStore::Entry* w = nullptr;  // out x in, row-major
  ParamStore::Entry* b = nullptr;  // out
  int in = 0, out = 0;

  Var operator()(Tape& t, Var x) const {
    Var y = t.matvec(t.param(*w), x, out, in);
    return t.add(y, t.param(*b));
  }
};

inline Linear make_linear(ParamStore& params, const std::string& name, int in,
                          int out, Rng& rng) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  Linear l;
  l.in = in;
  l.out = out;
  l.w = &params.ensure(name + ".w", {out, in}, scale, rng);
  l.b = &params.ensure(name + ".b", {out, 1}, scale, rng);
  return l;
}

Var dense_forward(Tape& t, const Linear& layer, Var x, Activation act);

// Relu MLP: hidden layers are relu, last layer uses `final_act`.
struct Mlp {
  std::vector<Linear> layers;

  Var operator()(Tape& t, Var x,
                 Activation final_act = Activation::kIdentity) const {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      x = layers[i](t, x);
      x = activate(t, x,
                   i + 1 < layers.size() ? Activation::kRelu : final_act);
    }
    return x;
  }
};

Mlp make_mlp(ParamStore& params, const std::string& name, int in,
             const std::vector<int>& sizes, Rng& rng);

// Gated recurrent unit. Gate convention: update == 0 keeps the hidden state,
// update == 1 replaces it with the candidate.
struct GruCell {
  Linear wr, ur, wu, uu, wn, un;
  int hidden = 0;
};

GruCell make_gru(ParamStore& params, const std::string& name, int input,
                 int hidden, Rng& rng);

Var gru_step(Tape& t, const GruCell& cell, Var hidden, Var x);

}  // namespace rb::diff

#endif  // RB_DIFF_NN_HPP_
