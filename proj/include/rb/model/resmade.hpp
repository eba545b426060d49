#ifndef RB_MODEL_RESMADE_HPP_
#define RB_MODEL_RESMADE_HPP_

#include <string>
#include <vector>

#include "rb/diff/nn.hpp"
#include "rb/model/state_codec.hpp"
#include "rb/rng.hpp"

namespace rb::model {

// Linear layer with a fixed binary connectivity mask. The masked weight node
// is memoized per tape so repeated evaluations share it.
struct MaskedLinear {
  diff::ParamStore::Entry* w = nullptr;
  diff::ParamStore::Entry* b = nullptr;
  std::vector<double> mask;  // out x in, row-major
  int in = 0, out = 0;

  diff::Var operator()(diff::Tape& t, diff::Var x) const;
};

// Residual masked autoregressive categorical model over a StateSpec, with a
// conditioning vector injected into every residual block as h' = h + u*p + p,
// p = W_c * cond. Degrees are assigned so that the logits of dimension d
// depend only on dimensions < d plus the conditioning.
class ResMade {
 public:
  ResMade() = default;
  ResMade(diff::ParamStore& params, const std::string& name, StateSpec spec,
          int cond_dim, int width, int n_blocks, Rng& rng);

  const StateSpec& spec() const { return spec_; }
  int cond_dim() const { return cond_dim_; }

  // Concatenated per-dimension logits. Only the first `filled` dimensions of
  // x are encoded; the rest are masked out of every logit they could affect.
  diff::Var logits(diff::Tape& t, diff::Var cond, const std::vector<int>& x,
                   int filled) const;

  // Sum over dimensions of categorical log-probabilities.
  diff::Var log_prob(diff::Tape& t, diff::Var cond,
                     const std::vector<int>& x) const;

  // Ancestral sample, dimension by dimension. Forward-only.
  std::vector<int> sample(diff::Tape& t, diff::Var cond, Rng& rng) const;

  // `count` i.i.d. samples; single-dimension specs share one logits pass.
  std::vector<std::vector<int>> sample_many(diff::Tape& t, diff::Var cond,
                                            int count, Rng& rng) const;

  int logits_offset(int d) const;

 private:
  StateSpec spec_;
  int cond_dim_ = 0, width_ = 0;
  MaskedLinear input_;
  struct Block {
    MaskedLinear a, b;
    diff::ParamStore::Entry* cond_w = nullptr;
  };
  std::vector<Block> blocks_;
  MaskedLinear output_;
};

}  // namespace rb::model

#endif  // RB_MODEL_RESMADE_HPP_
