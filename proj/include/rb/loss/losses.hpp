#ifndef RB_LOSS_LOSSES_HPP_
#define RB_LOSS_LOSSES_HPP_

#include <optional>
#include <vector>

#include "rb/model/belief_model.hpp"

namespace rb::loss {

// Closed-form KL(N(muq, sigq) || N(mup, sigp)) summed over dimensions.
diff::Var kl_diag_gauss(diff::Tape& t, diff::Var muq, diff::Var sigq,
                        diff::Var mup, diff::Var sigp);

// Mean negative log-likelihood of the order-0 state model over a batch.
diff::Var loss_b0(diff::Tape& t, const model::GenerativeBeliefModel& m,
                  std::span<const diff::Var> codes,
                  const std::vector<std::vector<int>>& states);

// Reparameterization noise: either a live rng or a frozen stream (used by
// gradient checks, which must rebuild the same graph every call).
class NoiseSource {
 public:
  explicit NoiseSource(Rng& rng) : rng_(&rng) {}
  explicit NoiseSource(const std::vector<double>& frozen) : frozen_(&frozen) {}

  double next() {
    if (rng_ != nullptr) return rng_->normal();
    if (pos_ >= frozen_->size())
      throw std::out_of_range("NoiseSource: frozen noise exhausted");
    return (*frozen_)[pos_++];
  }
  void rewind() { pos_ = 0; }

 private:
  Rng* rng_ = nullptr;
  const std::vector<double>* frozen_ = nullptr;
  std::size_t pos_ = 0;
};

struct ElboOptions {
  bool normalize_by_k = true;  // 1/K on the summation terms
  int num_posterior_samples = 1;
};

struct ElboResult {
  diff::Var neg_elbo;     // Monte Carlo estimate of the negative ELBO
  diff::Var recon_error;  // negative reconstruction log-likelihood term
  std::vector<diff::Var> kl_levels;  // index level-1, bottom-up
};

// Single-sample (by default) estimate of the negative recursive ELBO for an
// order-l model against a target tree of order l-1. The posterior is built
// bottom-up: leaf collections are encoded first, their sampled latents feed
// the next level's order-invariant encoder.
ElboResult elbo_recursive(diff::Tape& t, const model::GenerativeBeliefModel& m,
                          int l, const model::NestedBelief& target,
                          diff::Var code, NoiseSource& noise,
                          const ElboOptions& options = {});

// --- GECO ---

struct GecoConstraint {
  double lambda = 1.0;
  double target = 0.0;
  bool upper = true;  // true: drive value <= target; false: value >= target
  double moving_avg = 0.0;
  bool initialized = false;

  double residual() const {
    return upper ? moving_avg - target : target - moving_avg;
  }
};

struct GecoState {
  GecoConstraint recon;                 // reconstruction error <= kappa
  std::optional<GecoConstraint> kl_lo;  // order-2 band: mean KL >= low
  std::optional<GecoConstraint> kl_hi;  // order-2 band: mean KL <= high
  double eta = 0.01;
  double ma_decay = 0.99;
  double lambda_min = 0.1;
  double lambda_max = 40.0;
};

GecoState make_geco(double kappa, std::optional<std::pair<double, double>>
                                      kl_band = std::nullopt);

// Updates moving averages and multipliers (clamped to [0.1, 40]) and returns
// the combined scalar loss value KL + lambda * (recon - kappa) plus any band
// terms, evaluated at the new multipliers.
double geco_step(GecoState& state, double batch_recon_error, double batch_kl,
                 std::optional<double> batch_kl_top = std::nullopt);

// The same combination as a tape expression, weighting with the current
// multipliers (treated as constants).
diff::Var geco_loss(diff::Tape& t, const GecoState& state, diff::Var recon_error,
                    diff::Var kl, std::optional<diff::Var> kl_top = std::nullopt);

// --- total loss ---

struct LossWeights {
  double b0 = 10.0;
  double b1 = 1.0;
  double b2 = 0.0;
  double entropy = 0.015;
};

// Weighted sum of the RL loss and the per-order belief losses. The
// stop-gradient routing lives in the graphs the inputs were built from.
diff::Var total_loss(diff::Tape& t, const LossWeights& w, diff::Var rl_loss,
                     std::optional<diff::Var> l0 = std::nullopt,
                     std::optional<diff::Var> l1 = std::nullopt,
                     std::optional<diff::Var> l2 = std::nullopt);

}  // namespace rb::loss

#endif  // RB_LOSS_LOSSES_HPP_
