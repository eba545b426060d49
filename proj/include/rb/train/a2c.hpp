#ifndef RB_TRAIN_A2C_HPP_
#define RB_TRAIN_A2C_HPP_

#include <optional>
#include <vector>

#include "rb/train/agent.hpp"

namespace rb::train {

inline constexpr int kChunkLength = 100;

// One environment step as seen by a learning agent.
struct ChunkStep {
  std::vector<double> obs_enc;  // observation consumed at this step
  int action = 0;
  double reward = 0.0;  // shaped reward used for learning
  bool done = false;
  std::vector<double> policy_extra;  // sample features in samples-only mode
  // Hindsight belief targets.
  std::vector<int> b0_target;  // empty = none
  std::optional<model::NestedBelief> bl_target;
  // Cross-agent stream (co-player history encoded with the learner's own
  // parameters) used to train lower-order models on other agents' experience.
  std::vector<double> cross_obs_enc;  // empty = no cross stream
  std::vector<int> b0_cross_target;
  // Trajectory-prediction baseline target.
  std::optional<env::Observation> opp_obs;
  int opp_action = -1;
};

struct TrajectoryChunk {
  model::BeliefCodeValue start_code;
  model::BeliefCodeValue cross_start_code;
  std::vector<ChunkStep> steps;
  double bootstrap_value = 0.0;  // V(s_T), zero when the chunk ends an episode
};

struct UpdateMetrics {
  int steps = 0;
  double rl_loss = 0.0, policy_loss = 0.0, value_loss = 0.0;
  double entropy = 0.0, entropy_term = 0.0;
  double l0 = 0.0;
  double l1 = 0.0, l1_recon = 0.0, l1_kl = 0.0;
  double l2 = 0.0, l2_recon = 0.0, l2_kl1 = 0.0, l2_kl2 = 0.0;
  double lambda1 = 0.0, lambda2_recon = 0.0, lambda2_lo = 0.0, lambda2_hi = 0.0;
  double total = 0.0;
  bool has_l0 = false, has_l1 = false, has_l2 = false;
};

// Synchronous advantage actor-critic update over one chunk: n-step
// bootstrapped advantages, value loss, entropy bonus, belief losses composed
// via total_loss, one RMSProp step. Throws on non-finite losses.
// `grads_out`, when given, receives the raw gradients (for probe tests).
UpdateMetrics a2c_update(Agent& agent, const TrajectoryChunk& chunk, Rng& rng,
                         diff::GradMap* grads_out = nullptr);

// Forward-only replay of the chunk's recurrent states (for continuity tests
// and bootstrap values).
std::vector<model::BeliefCodeValue> replay_codes(const Agent& agent,
                                                 const TrajectoryChunk& chunk);

}  // namespace rb::train

#endif  // RB_TRAIN_A2C_HPP_
