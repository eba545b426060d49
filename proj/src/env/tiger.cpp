#include <stdexcept>

#include "rb/env/pomg.hpp"

namespace rb::env::detail {

namespace {

Observation tiger_observation(const EnvState& state, int player,
                              bool growl_occurred) {
  Observation o;
  o.game = state.game;
  o.player = player;
  o.growl = 0;
  if (player == 0) {
    if (growl_occurred)
      o.growl = state.tiger_door == TigerDoor::kLeft ? 1 : 2;
  } else if (player == 1) {
    const bool hears = state.game == GameId::kTiger1 ||
                       state.p2_proximity == Proximity::kClose;
    if (hears && growl_occurred) o.growl = 1;
    if (state.game == GameId::kTiger2)
      o.proximity = state.p2_proximity == Proximity::kClose ? 0 : 1;
  } else {
    // P3 never hears; it only sees where P2 stands.
    o.proximity = state.p2_proximity == Proximity::kClose ? 0 : 1;
  }
  return o;
}

}  // namespace

EnvState reset_tiger(const GameConfig& config, std::uint64_t seed,
                     std::vector<Observation>* observations) {
  EnvState s;
  s.game = config.game;
  s.config = config;
  s.round = 0;
  s.terminated = false;
  s.rng = Rng(seed);
  s.tiger_door = s.rng.bernoulli(0.5) ? TigerDoor::kLeft : TigerDoor::kRight;
  if (config.game == GameId::kTiger2)
    s.p2_proximity = s.rng.bernoulli(0.5) ? Proximity::kClose : Proximity::kFar;
  if (observations != nullptr) {
    observations->clear();
    for (int p = 0; p < num_players(config.game); ++p)
      observations->push_back(tiger_observation(s, p, false));
  }
  return s;
}

StepResult step_tiger(EnvState& state, std::span<const int> joint_action) {
  const int a1 = joint_action[0];
  const bool opens = a1 == tiger::kOpenLeft || a1 == tiger::kOpenRight;

  StepResult result;
  result.rewards.assign(static_cast<std::size_t>(num_players(state.game)), 0.0);

  // P1: opening the prize door pays 1, opening the tiger's door pays -5.
  if (opens) {
    const bool hit_tiger =
        (a1 == tiger::kOpenLeft) == (state.tiger_door == TigerDoor::kLeft);
    result.rewards[0] = hit_tiger ? -5.0 : 1.0;
  }

  // Predictions start after P1's first action: round 0 is never scored.
  const bool scored = state.round >= 1;
  if (state.game == GameId::kTiger1) {
    const int a2 = joint_action[1];
    const bool predicted_open = a2 == tiger::kPredictOpen;
    if (scored) result.rewards[1] = predicted_open == opens ? 1.0 : 0.0;
  } else {
    const int a2 = joint_action[1];
    if (scored && a2 != tiger::kWait) {
      const bool correct = (a2 == tiger::kCommitDoor) == opens;
      result.rewards[1] = correct ? 1.0 : state.config.wrong_commit_penalty;
    }
    const int a3 = joint_action[2];
    const bool p2_committed = a2 != tiger::kWait;
    if (scored)
      result.rewards[2] = (a3 == tiger::kPredictCommit) == p2_committed ? 1.0 : 0.0;
  }

  bool growl_occurred = false;
  if (!opens) growl_occurred = state.rng.bernoulli(0.5);

  state.round += 1;
  state.terminated = opens || state.round >= state.config.tiger_horizon;
  result.done = state.terminated;

  for (int p = 0; p < num_players(state.game); ++p)
    result.observations.push_back(tiger_observation(state, p, growl_occurred));
  return result;
}

}  // namespace rb::env::detail
