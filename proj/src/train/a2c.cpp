#include "rb/train/a2c.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rb::train {

using diff::Tape;
using diff::Var;

namespace {

Var zeros_like(Tape& t, int n) { return t.fill(n, 0.0); }

}  // namespace

UpdateMetrics a2c_update(Agent& agent, const TrajectoryChunk& chunk, Rng& rng,
                         diff::GradMap* grads_out) {
  const AgentConfig& cfg = agent.config();
  const int T = static_cast<int>(chunk.steps.size());
  if (T == 0) throw std::invalid_argument("a2c_update: empty chunk");

  Tape t;
  Var f = t.input(chunk.start_code.f_mf);
  Var b = t.input(chunk.start_code.b_hat);
  const bool has_cross = !chunk.steps.front().cross_obs_enc.empty();
  Var fc, bc;
  if (has_cross) {
    fc = t.input(chunk.cross_start_code.f_mf);
    bc = t.input(chunk.cross_start_code.b_hat);
  }

  std::vector<Var> logp_actions, values, entropies;
  std::vector<Var> l0_codes;
  std::vector<std::vector<int>> l0_targets;
  std::vector<Var> elbo_neg, elbo_recon, elbo_kl_bottom, elbo_kl_top;
  std::vector<Var> traj_nll;
  const int order = belief_order(cfg.type);
  const bool trains_belief_rnn =
      cfg.type != AgentType::kModelFree;  // stop-grad routing

  loss::NoiseSource noise(rng);
  for (const ChunkStep& step : chunk.steps) {
    auto [f2, b2] = agent.net().encode_step(t, f, b, t.input(step.obs_enc));
    f = f2;
    b = b2;
    std::optional<Var> extra;
    if (!step.policy_extra.empty()) extra = t.input(step.policy_extra);
    Var head_in = agent.head_input(t, f, b, extra);
    Var logits = agent.policy_logits(t, head_in);
    Var logp = t.log_softmax(logits);
    logp_actions.push_back(t.pick(logp, step.action));
    values.push_back(agent.value_estimate(t, head_in));
    entropies.push_back(t.mul_scalar(t.sum(t.mul(t.exp(logp), logp)), -1.0));

    Var cond = trains_belief_rnn ? b : t.stop_gradient(b);
    if (!step.b0_target.empty() && cfg.type != AgentType::kTrajPred) {
      l0_codes.push_back(cond);
      l0_targets.push_back(step.b0_target);
    }
    if (has_cross && !step.cross_obs_enc.empty()) {
      auto [fc2, bc2] =
          agent.net().encode_step(t, fc, bc, t.input(step.cross_obs_enc));
      fc = fc2;
      bc = bc2;
      if (!step.b0_cross_target.empty() && cfg.type != AgentType::kTrajPred) {
        l0_codes.push_back(trains_belief_rnn ? bc : t.stop_gradient(bc));
        l0_targets.push_back(step.b0_cross_target);
      }
    }
    if (step.bl_target.has_value() && order >= 1) {
      loss::ElboOptions opt;
      opt.normalize_by_k = cfg.normalize_elbo_by_k;
      loss::ElboResult r = loss::elbo_recursive(t, agent.belief(), order,
                                                *step.bl_target, cond, noise,
                                                opt);
      elbo_neg.push_back(r.neg_elbo);
      elbo_recon.push_back(r.recon_error);
      elbo_kl_bottom.push_back(r.kl_levels.front());
      if (order == 2) elbo_kl_top.push_back(r.kl_levels.back());
    }
    if (cfg.type == AgentType::kTrajPred && step.opp_obs.has_value())
      traj_nll.push_back(t.mul_scalar(
          agent.traj_pred()->log_prob(t, cond, *step.opp_obs, step.opp_action),
          -1.0));

    if (step.done) {
      f = zeros_like(t, cfg.net.mf_dim);
      b = zeros_like(t, cfg.net.code_dim);
      if (has_cross) {
        fc = zeros_like(t, cfg.net.mf_dim);
        bc = zeros_like(t, cfg.net.code_dim);
      }
    }
  }

  // n-step bootstrapped returns and advantages (constants for the policy).
  std::vector<double> returns(static_cast<std::size_t>(T));
  double g = chunk.bootstrap_value;
  for (int i = T - 1; i >= 0; --i) {
    const ChunkStep& step = chunk.steps[static_cast<std::size_t>(i)];
    if (step.done) g = 0.0;
    g = step.reward + cfg.gamma * g;
    returns[static_cast<std::size_t>(i)] = g;
  }

  Var policy_loss = t.input_scalar(0.0);
  Var value_loss = t.input_scalar(0.0);
  Var entropy_sum = t.input_scalar(0.0);
  for (int i = 0; i < T; ++i) {
    const double adv =
        returns[static_cast<std::size_t>(i)] -
        values[static_cast<std::size_t>(i)].scalar();
    policy_loss = t.add(policy_loss,
                        t.mul_scalar(logp_actions[static_cast<std::size_t>(i)],
                                     -adv));
    Var err = t.add_scalar(values[static_cast<std::size_t>(i)],
                           -returns[static_cast<std::size_t>(i)]);
    value_loss = t.add(value_loss, t.sum(t.mul(err, err)));
    entropy_sum = t.add(entropy_sum, entropies[static_cast<std::size_t>(i)]);
  }
  const double invT = 1.0 / T;
  policy_loss = t.mul_scalar(policy_loss, invT);
  value_loss = t.mul_scalar(value_loss, invT);
  Var entropy_mean = t.mul_scalar(entropy_sum, invT);
  Var rl = t.add(policy_loss, t.mul_scalar(value_loss, cfg.value_coef));
  rl = t.add(rl, t.mul_scalar(entropy_mean, -cfg.weights.entropy));

  UpdateMetrics m;
  m.steps = T;

  auto mean_of = [&](const std::vector<Var>& parts) {
    Var s = t.input_scalar(0.0);
    for (Var v : parts) s = t.add(s, v);
    return t.mul_scalar(s, 1.0 / static_cast<double>(parts.size()));
  };

  std::optional<Var> l0_var, l1_var, l2_var;
  if (!l0_codes.empty()) {
    l0_var = loss::loss_b0(t, agent.belief(), l0_codes, l0_targets);
    m.has_l0 = true;
    m.l0 = l0_var->scalar();
  }
  if (!traj_nll.empty()) {
    // The trajectory-prediction aux loss rides on the order-0 weight slot.
    l0_var = mean_of(traj_nll);
    m.has_l0 = true;
    m.l0 = l0_var->scalar();
  }
  if (!elbo_neg.empty()) {
    Var recon = mean_of(elbo_recon);
    Var kl_bottom = mean_of(elbo_kl_bottom);
    if (order == 1) {
      loss::GecoState& geco = agent.geco(1);
      if (cfg.use_geco) {
        loss::geco_step(geco, recon.scalar(), kl_bottom.scalar());
        l1_var = loss::geco_loss(t, geco, recon, kl_bottom);
      } else {
        l1_var = mean_of(elbo_neg);
      }
      m.has_l1 = true;
      m.l1 = l1_var->scalar();
      m.l1_recon = recon.scalar();
      m.l1_kl = kl_bottom.scalar();
      m.lambda1 = geco.recon.lambda;
    } else {
      Var kl_top = mean_of(elbo_kl_top);
      Var kl_total = t.add(kl_bottom, kl_top);
      loss::GecoState& geco = agent.geco(2);
      if (cfg.use_geco) {
        loss::geco_step(geco, recon.scalar(), kl_total.scalar(),
                        kl_top.scalar());
        l2_var = loss::geco_loss(t, geco, recon, kl_total, kl_top);
      } else {
        l2_var = mean_of(elbo_neg);
      }
      m.has_l2 = true;
      m.l2 = l2_var->scalar();
      m.l2_recon = recon.scalar();
      m.l2_kl1 = kl_bottom.scalar();
      m.l2_kl2 = kl_top.scalar();
      m.lambda2_recon = geco.recon.lambda;
      m.lambda2_lo = geco.kl_lo->lambda;
      m.lambda2_hi = geco.kl_hi->lambda;
    }
  }

  Var total = loss::total_loss(t, cfg.weights, rl, l0_var, l1_var, l2_var);
  m.policy_loss = policy_loss.scalar();
  m.value_loss = value_loss.scalar();
  m.entropy = entropy_mean.scalar();
  m.entropy_term = cfg.weights.entropy * m.entropy;
  m.rl_loss = rl.scalar();
  m.total = total.scalar();
  if (!std::isfinite(m.total)) {
    std::ostringstream os;
    os << "a2c_update: non-finite loss (rl=" << m.rl_loss << " l0=" << m.l0
       << " l1=" << m.l1 << " l2=" << m.l2 << ")";
    throw std::runtime_error(os.str());
  }

  t.backward(total);
  diff::GradMap grads;
  t.export_param_grads(grads);
  if (grads_out != nullptr) *grads_out = grads;
  diff::rmsprop_update(agent.params(), grads, cfg.optimizer);
  return m;
}

std::vector<model::BeliefCodeValue> replay_codes(const Agent& agent,
                                                 const TrajectoryChunk& chunk) {
  std::vector<model::BeliefCodeValue> codes;
  model::BeliefCodeValue code = chunk.start_code;
  for (const ChunkStep& step : chunk.steps) {
    Tape t;
    auto [f, b] = agent.net().encode_step(t, t.input(code.f_mf),
                                          t.input(code.b_hat),
                                          t.input(step.obs_enc));
    code.f_mf.assign(f.value().begin(), f.value().end());
    code.b_hat.assign(b.value().begin(), b.value().end());
    codes.push_back(code);
    if (step.done)
      code = model::BeliefCodeValue::zeros(agent.config().net.mf_dim,
                                           agent.config().net.code_dim);
  }
  return codes;
}

}  // namespace rb::train
