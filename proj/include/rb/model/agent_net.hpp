#ifndef RB_MODEL_AGENT_NET_HPP_
#define RB_MODEL_AGENT_NET_HPP_

#include <string>
#include <vector>

#include "rb/diff/nn.hpp"
#include "rb/env/pomg.hpp"

namespace rb::model {

// Flat symbolic featurization of per-game observations.
int observation_dim(env::GameId game, int player);
std::vector<double> encode_observation(const env::Observation& obs);

// Recurrent state carried between environment steps.
struct BeliefCodeValue {
  std::vector<double> f_mf;
  std::vector<double> b_hat;

  static BeliefCodeValue zeros(int mf_dim, int code_dim) {
    BeliefCodeValue c;
    c.f_mf.assign(static_cast<std::size_t>(mf_dim), 0.0);
    c.b_hat.assign(static_cast<std::size_t>(code_dim), 0.0);
    return c;
  }
};

struct AgentNetConfig {
  int obs_dim = 0;
  std::vector<int> encoder_sizes = {64};
  int mf_dim = 128;
  int code_dim = 128;
};

// The dual-recurrent history encoder: a model-free path and a belief path,
// each with its own observation encoder and GRU. Because the op takes raw
// observations, an agent can run any player's history through its own
// parameters (cross-agent encoding never touches foreign stores).
class AgentNet {
 public:
  AgentNet() = default;
  AgentNet(diff::ParamStore& params, const std::string& prefix,
           AgentNetConfig cfg, Rng& rng);

  const AgentNetConfig& config() const { return cfg_; }

  // Advances both recurrent states through their own encoders.
  std::pair<diff::Var, diff::Var> encode_step(diff::Tape& t, diff::Var f_mf,
                                              diff::Var b_hat,
                                              diff::Var obs) const;

  // Value-level convenience: one step outside any training graph.
  BeliefCodeValue encode_step_value(const BeliefCodeValue& code,
                                    const std::vector<double>& obs) const;

 private:
  AgentNetConfig cfg_;
  diff::Mlp mf_encoder_, belief_encoder_;
  diff::GruCell mf_gru_, belief_gru_;
};

}  // namespace rb::model

#endif  // RB_MODEL_AGENT_NET_HPP_
