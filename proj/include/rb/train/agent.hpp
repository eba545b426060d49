#ifndef RB_TRAIN_AGENT_HPP_
#define RB_TRAIN_AGENT_HPP_

#include <memory>
#include <optional>
#include <string>

#include "rb/diff/optim.hpp"
#include "rb/loss/losses.hpp"
#include "rb/model/agent_net.hpp"
#include "rb/model/belief_model.hpp"
#include "rb/model/traj_pred.hpp"

namespace rb::train {

enum class AgentType { kModelFree, kB0, kB1, kB2, kTrajPred };

// What the policy and value heads read. The Tiger experiments condition them
// on the agent's own nested belief samples; everywhere else they read the two
// recurrent states.
enum class PolicyInput { kRecurrent, kSamplesOnly };

int belief_order(AgentType type);

struct AgentConfig {
  AgentType type = AgentType::kB0;
  env::GameId game = env::GameId::kRws;
  int num_actions = 0;
  int k = 10;  // nested branching
  model::AgentNetConfig net;
  model::BeliefModelConfig belief;
  std::vector<int> policy_sizes = {64, 64};
  PolicyInput policy_input = PolicyInput::kRecurrent;
  int specialist = -1;  // rws resource index 0..2, -1 = none
  double specialist_bonus = 5.0;
  loss::LossWeights weights;
  double gamma = 0.99;
  double value_coef = 0.5;
  diff::RmsPropOptions optimizer;
  bool use_geco = true;
  double geco_kappa = 1.0;
  double geco_eta = 0.01;
  double geco_ma_decay = 0.99;
  std::pair<double, double> geco_kl2_band = {1.0, 5.0};
  bool normalize_elbo_by_k = true;
  // Tiger experiments: belief targets come from the exact oracles instead of
  // the agent's own lower-order models.
  bool oracle_targets = false;
};

// Deterministic featurization of a nested sample tree for samples-only policy
// input: per-collection leaf means, sorted for exchangeability.
std::vector<double> nested_features(const model::NestedBelief& tree);
int nested_feature_dim(int k, int order);

struct ActResult {
  int action = 0;
  std::vector<double> logits;
  double value = 0.0;
  std::vector<double> policy_extra;  // sample features fed to the heads
};

class Agent {
 public:
  Agent(AgentConfig cfg, std::uint64_t seed, const std::string& name = "agent");

  const AgentConfig& config() const { return cfg_; }
  const std::string& name() const { return name_; }

  diff::ParamStore& params() { return params_; }
  const model::AgentNet& net() const { return net_; }
  const model::GenerativeBeliefModel& belief() const { return belief_; }
  const model::TrajPredModel* traj_pred() const {
    return traj_ ? &*traj_ : nullptr;
  }

  loss::GecoState& geco(int order);

  // Policy/value head input given the two recurrent states (or the sample
  // features in samples-only mode). Applies the per-type stop-gradient
  // routing: belief agents cut the RL gradient into the belief core.
  diff::Var head_input(diff::Tape& t, diff::Var f_mf, diff::Var b_hat,
                       std::optional<diff::Var> sample_features) const;
  diff::Var policy_logits(diff::Tape& t, diff::Var head_in) const;
  diff::Var value_estimate(diff::Tape& t, diff::Var head_in) const;

  // Advances the recurrent code with the observation and samples an action.
  ActResult act(model::BeliefCodeValue& code, const env::Observation& obs,
                Rng& rng, bool greedy = false);

  // Sample features for the current code (samples-only agents).
  std::vector<double> sample_features(const model::BeliefCodeValue& code,
                                      Rng& rng) const;

 private:
  AgentConfig cfg_;
  std::string name_;
  diff::ParamStore params_;
  Rng init_rng_;
  model::AgentNet net_;
  model::GenerativeBeliefModel belief_;
  std::optional<model::TrajPredModel> traj_;
  diff::Mlp policy_head_;
  diff::Linear policy_out_;
  diff::Mlp value_head_;
  diff::Linear value_out_;
  loss::GecoState geco1_;
  loss::GecoState geco2_;
};

}  // namespace rb::train

#endif  // RB_TRAIN_AGENT_HPP_
