#include "rb/loss/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace rb::loss {

using diff::Tape;
using diff::Var;
using model::GenerativeBeliefModel;
using model::NestedBelief;

Var kl_diag_gauss(Tape& t, Var muq, Var sigq, Var mup, Var sigp) {
  if (muq.size() != sigq.size() || muq.size() != mup.size() ||
      muq.size() != sigp.size())
    throw std::invalid_argument("kl_diag_gauss: size mismatch");
  for (double s : sigq.value())
    if (!(s > 0.0)) throw std::runtime_error("kl_diag_gauss: sigq must be > 0");
  for (double s : sigp.value())
    if (!(s > 0.0)) throw std::runtime_error("kl_diag_gauss: sigp must be > 0");
  // log(sigp/sigq) + (sigq^2 + (muq-mup)^2) / (2 sigp^2) - 1/2, summed
  Var log_ratio = t.sub(t.log(sigp), t.log(sigq));
  Var diff_sq = t.mul(t.sub(muq, mup), t.sub(muq, mup));
  Var var_q = t.mul(sigq, sigq);
  Var var_p = t.mul(sigp, sigp);
  Var quad = t.div(t.add(var_q, diff_sq), t.mul_scalar(var_p, 2.0));
  Var per_dim = t.add_scalar(t.add(log_ratio, quad), -0.5);
  return t.sum(per_dim);
}

Var loss_b0(Tape& t, const GenerativeBeliefModel& m,
            std::span<const Var> codes,
            const std::vector<std::vector<int>>& states) {
  if (codes.size() != states.size() || codes.empty())
    throw std::invalid_argument("loss_b0: batch mismatch");
  Var total = t.input_scalar(0.0);
  for (std::size_t i = 0; i < codes.size(); ++i)
    total = t.add(total, m.b0_log_prob(t, codes[i], states[i]));
  return t.mul_scalar(total, -1.0 / static_cast<double>(codes.size()));
}

namespace {

Var draw(Tape& t, const model::GaussianParams& q, NoiseSource& noise) {
  std::vector<double> eps(static_cast<std::size_t>(q.mu.size()));
  for (double& e : eps) e = noise.next();
  return model::reparam(t, q.mu, q.sigma, t.input(eps));
}

ElboResult elbo_once(Tape& t, const GenerativeBeliefModel& m, int l,
                     const NestedBelief& target, Var code, NoiseSource& noise,
                     const ElboOptions& opt) {
  const int k = target.branching;
  const double child_w = opt.normalize_by_k ? 1.0 / k : 1.0;
  if (l == 1) {
    // Target is one order-0 collection.
    std::vector<Var> onehots;
    for (const auto& s : target.leaves)
      onehots.push_back(m.onehot_var(t, model::belief_target(s, m.config().target_player)));
    model::GaussianParams q = m.posterior_leaf(t, l, onehots, code);
    Var z1 = draw(t, q, noise);
    model::GaussianParams p = m.prior(t, l, 1, 0, {}, std::nullopt, code);
    Var kl = kl_diag_gauss(t, q.mu, q.sigma, p.mu, p.sigma);
    std::vector<std::vector<int>> cats;
    for (const auto& s : target.leaves)
      cats.push_back(model::belief_target(s, m.config().target_player));
    Var recon_ll = t.mul_scalar(
        m.leaf_collection_log_prob(t, l, z1, code, cats), child_w);
    ElboResult r;
    r.recon_error = t.mul_scalar(recon_ll, -1.0);
    r.kl_levels = {kl};
    r.neg_elbo = t.add(kl, r.recon_error);
    return r;
  }
  if (l == 2) {
    // Bottom-up: encode every leaf collection, sample its z1, then encode the
    // sampled z1 set for the top latent.
    std::vector<model::GaussianParams> q1s;
    std::vector<Var> z1s;
    for (const auto& child : target.children) {
      std::vector<Var> onehots;
      for (const auto& s : child.leaves)
        onehots.push_back(m.onehot_var(t, model::belief_target(s, m.config().target_player)));
      model::GaussianParams q1 = m.posterior_leaf(t, l, onehots, code);
      z1s.push_back(draw(t, q1, noise));
      q1s.push_back(q1);
    }
    model::GaussianParams q2 = m.posterior_latent(t, l, 2, z1s, code);
    Var z2 = draw(t, q2, noise);
    model::GaussianParams p2 = m.prior(t, l, 2, 0, {}, std::nullopt, code);
    Var kl2 = kl_diag_gauss(t, q2.mu, q2.sigma, p2.mu, p2.sigma);

    Var kl1_sum = t.input_scalar(0.0);
    Var recon_ll = t.input_scalar(0.0);
    for (std::size_t c = 0; c < target.children.size(); ++c) {
      model::GaussianParams p1 = m.prior(t, l, 1, 0, {}, z2, code);
      kl1_sum = t.add(kl1_sum, kl_diag_gauss(t, q1s[c].mu, q1s[c].sigma,
                                             p1.mu, p1.sigma));
      std::vector<std::vector<int>> cats;
      for (const auto& s : target.children[c].leaves)
        cats.push_back(model::belief_target(s, m.config().target_player));
      recon_ll = t.add(recon_ll,
                       t.mul_scalar(m.leaf_collection_log_prob(t, l, z1s[c],
                                                               code, cats),
                                    child_w));
    }
    kl1_sum = t.mul_scalar(kl1_sum, child_w);
    recon_ll = t.mul_scalar(recon_ll, child_w);
    ElboResult r;
    r.recon_error = t.mul_scalar(recon_ll, -1.0);
    r.kl_levels = {kl1_sum, kl2};
    r.neg_elbo = t.add(t.add(kl2, kl1_sum), r.recon_error);
    return r;
  }
  throw std::invalid_argument("elbo_recursive: order must be 1 or 2");
}

}  // namespace

ElboResult elbo_recursive(Tape& t, const GenerativeBeliefModel& m, int l,
                          const NestedBelief& target, Var code,
                          NoiseSource& noise, const ElboOptions& options) {
  if (target.order != l - 1)
    throw std::invalid_argument("elbo_recursive: target order must be l-1");
  if (!target.shape_valid())
    throw std::invalid_argument("elbo_recursive: malformed target tree");
  if (m.config().num_co_players != 1 || target.num_co_players != 1)
    throw std::invalid_argument(
        "elbo_recursive: only single-co-player chains are supported");
  if (options.num_posterior_samples < 1)
    throw std::invalid_argument("elbo_recursive: need at least one sample");

  ElboResult acc = elbo_once(t, m, l, target, code, noise, options);
  for (int s = 1; s < options.num_posterior_samples; ++s) {
    ElboResult r = elbo_once(t, m, l, target, code, noise, options);
    acc.neg_elbo = t.add(acc.neg_elbo, r.neg_elbo);
    acc.recon_error = t.add(acc.recon_error, r.recon_error);
    for (std::size_t i = 0; i < acc.kl_levels.size(); ++i)
      acc.kl_levels[i] = t.add(acc.kl_levels[i], r.kl_levels[i]);
  }
  const double inv = 1.0 / options.num_posterior_samples;
  if (options.num_posterior_samples > 1) {
    acc.neg_elbo = t.mul_scalar(acc.neg_elbo, inv);
    acc.recon_error = t.mul_scalar(acc.recon_error, inv);
    for (auto& klv : acc.kl_levels) klv = t.mul_scalar(klv, inv);
  }
  return acc;
}

GecoState make_geco(double kappa,
                    std::optional<std::pair<double, double>> kl_band) {
  GecoState s;
  s.recon.lambda = 1.0;
  s.recon.target = kappa;
  s.recon.upper = true;
  if (kl_band.has_value()) {
    GecoConstraint lo;
    lo.lambda = 1.0;
    lo.target = kl_band->first;
    lo.upper = false;
    GecoConstraint hi;
    hi.lambda = 1.0;
    hi.target = kl_band->second;
    hi.upper = true;
    s.kl_lo = lo;
    s.kl_hi = hi;
  }
  return s;
}

namespace {

void update_constraint(GecoConstraint& c, double value, const GecoState& s) {
  if (!std::isfinite(value))
    throw std::runtime_error("geco_step: non-finite constraint value");
  c.moving_avg = c.initialized
                     ? s.ma_decay * c.moving_avg + (1.0 - s.ma_decay) * value
                     : value;
  c.initialized = true;
  c.lambda = std::min(
      s.lambda_max,
      std::max(s.lambda_min, c.lambda * std::exp(s.eta * c.residual())));
}

}  // namespace

double geco_step(GecoState& state, double batch_recon_error, double batch_kl,
                 std::optional<double> batch_kl_top) {
  update_constraint(state.recon, batch_recon_error, state);
  if (state.kl_lo.has_value()) {
    if (!batch_kl_top.has_value())
      throw std::invalid_argument("geco_step: band constraints need the top KL");
    update_constraint(*state.kl_lo, *batch_kl_top, state);
    update_constraint(*state.kl_hi, *batch_kl_top, state);
  }
  double loss = batch_kl +
                state.recon.lambda * (batch_recon_error - state.recon.target);
  if (state.kl_lo.has_value()) {
    loss += state.kl_hi->lambda * (*batch_kl_top - state.kl_hi->target);
    loss += state.kl_lo->lambda * (state.kl_lo->target - *batch_kl_top);
  }
  return loss;
}

Var geco_loss(Tape& t, const GecoState& state, Var recon_error, Var kl,
              std::optional<Var> kl_top) {
  Var loss = t.add(kl, t.mul_scalar(t.add_scalar(recon_error, -state.recon.target),
                                    state.recon.lambda));
  if (state.kl_lo.has_value()) {
    if (!kl_top.has_value())
      throw std::invalid_argument("geco_loss: band constraints need the top KL");
    loss = t.add(loss, t.mul_scalar(t.add_scalar(*kl_top, -state.kl_hi->target),
                                    state.kl_hi->lambda));
    loss = t.add(loss, t.mul_scalar(t.add_scalar(t.mul_scalar(*kl_top, -1.0),
                                                 state.kl_lo->target),
                                    state.kl_lo->lambda));
  }
  return loss;
}

Var total_loss(Tape& t, const LossWeights& w, Var rl_loss,
               std::optional<Var> l0, std::optional<Var> l1,
               std::optional<Var> l2) {
  if (w.b0 < 0 || w.b1 < 0 || w.b2 < 0 || w.entropy < 0)
    throw std::invalid_argument("total_loss: weights must be non-negative");
  Var total = rl_loss;
  if (l0.has_value()) total = t.add(total, t.mul_scalar(*l0, w.b0));
  if (l1.has_value()) total = t.add(total, t.mul_scalar(*l1, w.b1));
  if (l2.has_value()) total = t.add(total, t.mul_scalar(*l2, w.b2));
  return total;
}

}  // namespace rb::loss
