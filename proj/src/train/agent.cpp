#include "rb/train/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rb::train {

using diff::Tape;
using diff::Var;

int belief_order(AgentType type) {
  switch (type) {
    case AgentType::kModelFree: return 1;  // carries models, gradients cut
    case AgentType::kB0: return 0;
    case AgentType::kB1: return 1;
    case AgentType::kB2: return 2;
    case AgentType::kTrajPred: return 0;
  }
  return 0;
}

int nested_feature_dim(int k, int order) {
  int n = k;
  for (int i = 1; i < order; ++i) n *= k;
  return n;
}

namespace {

double leaf_value(const env::HandcraftedState& s) {
  if (s.game == env::GameId::kRws)
    throw std::invalid_argument("nested_features: tiger trees only");
  return s.tiger_door == env::TigerDoor::kLeft ? 1.0 : 0.0;
}

}  // namespace

std::vector<double> nested_features(const model::NestedBelief& tree) {
  if (tree.order == 1) {
    std::vector<double> means;
    for (const auto& c : tree.children) {
      double m = 0.0;
      for (const auto& s : c.leaves) m += leaf_value(s);
      means.push_back(m / static_cast<double>(c.leaves.size()));
    }
    std::sort(means.begin(), means.end(), std::greater<>());
    return means;
  }
  if (tree.order == 2) {
    std::vector<std::vector<double>> groups;
    for (const auto& child : tree.children) {
      std::vector<double> means = nested_features(child);
      groups.push_back(std::move(means));
    }
    std::sort(groups.begin(), groups.end(), std::greater<>());
    std::vector<double> flat;
    for (const auto& g : groups) flat.insert(flat.end(), g.begin(), g.end());
    return flat;
  }
  throw std::invalid_argument("nested_features: order must be 1 or 2");
}

Agent::Agent(AgentConfig cfg, std::uint64_t seed, const std::string& name)
    : cfg_(std::move(cfg)), name_(name), init_rng_(seed) {
  net_ = model::AgentNet(params_, name_ + ".net", cfg_.net, init_rng_);
  cfg_.belief.game = cfg_.game;
  cfg_.belief.code_dim = cfg_.net.code_dim;
  cfg_.belief.max_order = std::max(belief_order(cfg_.type), 1);
  belief_ = model::GenerativeBeliefModel(params_, name_ + ".belief", cfg_.belief,
                                         init_rng_);
  if (cfg_.type == AgentType::kTrajPred)
    traj_ = model::TrajPredModel(params_, name_ + ".tp", cfg_.game,
                                 cfg_.net.code_dim, cfg_.belief.made_width,
                                 cfg_.belief.made_blocks, init_rng_);
  int head_in = cfg_.net.mf_dim + cfg_.net.code_dim;
  if (cfg_.policy_input == PolicyInput::kSamplesOnly)
    head_in = nested_feature_dim(cfg_.k, std::max(belief_order(cfg_.type), 1));
  policy_head_ = make_mlp(params_, name_ + ".pi", head_in, cfg_.policy_sizes,
                          init_rng_);
  const int ph_out = cfg_.policy_sizes.empty() ? head_in : cfg_.policy_sizes.back();
  policy_out_ = make_linear(params_, name_ + ".pi_out", ph_out,
                            cfg_.num_actions, init_rng_);
  value_head_ = make_mlp(params_, name_ + ".v", head_in, cfg_.policy_sizes,
                         init_rng_);
  value_out_ = make_linear(params_, name_ + ".v_out", ph_out, 1, init_rng_);
  geco1_ = loss::make_geco(cfg_.geco_kappa);
  geco1_.eta = cfg_.geco_eta;
  geco1_.ma_decay = cfg_.geco_ma_decay;
  geco2_ = loss::make_geco(cfg_.geco_kappa, cfg_.geco_kl2_band);
  geco2_.eta = cfg_.geco_eta;
  geco2_.ma_decay = cfg_.geco_ma_decay;
}

loss::GecoState& Agent::geco(int order) {
  if (order == 1) return geco1_;
  if (order == 2) return geco2_;
  throw std::invalid_argument("Agent::geco: order must be 1 or 2");
}

Var Agent::head_input(Tape& t, Var f_mf, Var b_hat,
                      std::optional<Var> sample_features) const {
  if (cfg_.policy_input == PolicyInput::kSamplesOnly) {
    if (!sample_features.has_value())
      throw std::invalid_argument("head_input: sample features required");
    return *sample_features;
  }
  // Model-free agents train both recurrent cores with RL; belief agents keep
  // the RL gradient out of the belief core.
  Var b_in = cfg_.type == AgentType::kModelFree ? b_hat : t.stop_gradient(b_hat);
  return t.concat(f_mf, b_in);
}

Var Agent::policy_logits(Tape& t, Var head_in) const {
  return policy_out_(t, policy_head_(t, head_in, diff::Activation::kRelu));
}

Var Agent::value_estimate(Tape& t, Var head_in) const {
  return value_out_(t, value_head_(t, head_in, diff::Activation::kRelu));
}

std::vector<double> Agent::sample_features(const model::BeliefCodeValue& code,
                                           Rng& rng) const {
  Tape t;
  const int l = std::max(belief_order(cfg_.type), 1);
  model::NestedBelief tree =
      belief_.generate_nested(t, t.input(code.b_hat), cfg_.k, l, rng);
  return nested_features(tree);
}

ActResult Agent::act(model::BeliefCodeValue& code, const env::Observation& obs,
                     Rng& rng, bool greedy) {
  code = net_.encode_step_value(code, model::encode_observation(obs));
  ActResult r;
  if (cfg_.policy_input == PolicyInput::kSamplesOnly)
    r.policy_extra = sample_features(code, rng);
  Tape t;
  Var f = t.input(code.f_mf);
  Var b = t.input(code.b_hat);
  std::optional<Var> extra;
  if (!r.policy_extra.empty()) extra = t.input(r.policy_extra);
  Var head_in = head_input(t, f, b, extra);
  Var logits = policy_logits(t, head_in);
  Var value = value_estimate(t, head_in);
  Var logp = t.log_softmax(logits);
  r.logits.assign(logits.value().begin(), logits.value().end());
  r.value = value.scalar();
  if (greedy) {
    int best = 0;
    for (int a = 1; a < cfg_.num_actions; ++a)
      if (r.logits[static_cast<std::size_t>(a)] >
          r.logits[static_cast<std::size_t>(best)])
        best = a;
    r.action = best;
  } else {
    const double u = rng.uniform01();
    double acc = 0.0;
    r.action = cfg_.num_actions - 1;
    for (int a = 0; a < cfg_.num_actions; ++a) {
      acc += std::exp(logp.value()[static_cast<std::size_t>(a)]);
      if (u < acc) {
        r.action = a;
        break;
      }
    }
  }
  return r;
}

}  // namespace rb::train
