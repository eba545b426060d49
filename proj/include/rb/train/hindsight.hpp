#ifndef RB_TRAIN_HINDSIGHT_HPP_
#define RB_TRAIN_HINDSIGHT_HPP_

#include <optional>
#include <vector>

#include "rb/train/agent.hpp"

namespace rb::train {

// Everything a learner may look back on after play: true states before each
// step and every player's observation stream. Never any foreign parameters.
struct EpisodeHistory {
  env::GameId game = env::GameId::kTiger1;
  std::vector<env::HandcraftedState> states;  // S_t, t = 0..T-1
  // observations[t][p]: what player p consumed at step t (t=0 is the reset
  // observation).
  std::vector<std::vector<env::Observation>> observations;
  std::vector<std::vector<int>> actions;  // actions[t][p]
};

struct BeliefTargets {
  std::vector<std::vector<int>> b0;                         // per step
  std::vector<std::optional<model::NestedBelief>> bl;       // per step
  std::vector<std::vector<int>> b0_cross;                   // per step
  // Pre-step states of the cross-agent recurrent stream, for in-graph replay.
  std::vector<model::BeliefCodeValue> cross_pre_codes;
  int co_player = -1;  // whose history feeds the cross stream
};

// Builds the belief-training records for one learner over one episode:
// order-0 pairs from the true states; order-l targets either from the exact
// Tiger oracles (oracle_targets) or by encoding the co-player's history with
// the learner's own networks and sampling its lower-order model.
BeliefTargets hindsight_targets(const EpisodeHistory& episode, Agent& learner,
                                int learner_seat, Rng& rng);

}  // namespace rb::train

#endif  // RB_TRAIN_HINDSIGHT_HPP_
