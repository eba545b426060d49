#include "rb/diff/nn.hpp"

#include <stdexcept>

namespace rb::diff {

Var dense_forward(Tape& t, const Linear& layer, Var x, Activation act) {
  if (x.size() != layer.in)
    throw std::invalid_argument("dense_forward: input size mismatch");
  return activate(t, layer(t, x), act);
}

Mlp make_mlp(ParamStore& params, const std::string& name, int in,
             const std::vector<int>& sizes, Rng& rng) {
  Mlp mlp;
  int cur = in;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    mlp.layers.push_back(make_linear(
        params, name + ".l" + std::to_string(i), cur, sizes[i], rng));
    cur = sizes[i];
  }
  return mlp;
}

GruCell make_gru(ParamStore& params, const std::string& name, int input,
                 int hidden, Rng& rng) {
  GruCell c;
  c.hidden = hidden;
  c.wr = make_linear(params, name + ".wr", input, hidden, rng);
  c.ur = make_linear(params, name + ".ur", hidden, hidden, rng);
  c.wu = make_linear(params, name + ".wu", input, hidden, rng);
  c.uu = make_linear(params, name + ".uu", hidden, hidden, rng);
  c.wn = make_linear(params, name + ".wn", input, hidden, rng);
  c.un = make_linear(params, name + ".un", hidden, hidden, rng);
  return c;
}

Var gru_step(Tape& t, const GruCell& cell, Var hidden, Var x) {
  if (hidden.size() != cell.hidden)
    throw std::invalid_argument("gru_step: hidden size mismatch");
  if (x.size() != cell.wr.in)
    throw std::invalid_argument("gru_step: input size mismatch");
  Var r = t.sigmoid(cell.wr(t, x) + cell.ur(t, hidden));
  Var u = t.sigmoid(cell.wu(t, x) + cell.uu(t, hidden));
  Var n = t.tanh(cell.wn(t, x) + r * cell.un(t, hidden));
  // h' = h + u * (n - h)
  return hidden + u * (n - hidden);
}

}  // namespace rb::diff
