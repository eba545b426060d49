#include "rb/env/pomg.hpp"

#include <stdexcept>

namespace rb::env {

int num_players(GameId game) {
  switch (game) {
    case GameId::kTiger1: return 2;
    case GameId::kTiger2: return 3;
    case GameId::kRws: return 2;
  }
  return 0;
}

int num_actions(GameId game, int player) {
  switch (game) {
    case GameId::kTiger1: return player == 0 ? 3 : 2;
    case GameId::kTiger2: return player == 0 ? 3 : (player == 1 ? 3 : 2);
    case GameId::kRws: return 8;
  }
  return 0;
}

std::string action_name(GameId game, int player, int action) {
  static const char* kTigerP1[] = {"open-left", "open-right", "listen"};
  static const char* kTiger1P2[] = {"predict-open", "predict-listen"};
  static const char* kTiger2P2[] = {"predict-door", "predict-listen", "wait"};
  static const char* kTiger2P3[] = {"predict-wait", "predict-commit"};
  static const char* kRws[] = {"up",        "down",       "left", "right",
                               "turn-left", "turn-right", "tag",  "noop"};
  if (action < 0 || action >= num_actions(game, player))
    throw std::invalid_argument("action_name: out of range");
  switch (game) {
    case GameId::kTiger1: return player == 0 ? kTigerP1[action] : kTiger1P2[action];
    case GameId::kTiger2:
      if (player == 0) return kTigerP1[action];
      return player == 1 ? kTiger2P2[action] : kTiger2P3[action];
    case GameId::kRws: return kRws[action];
  }
  return "";
}

bool states_equal(const EnvState& a, const EnvState& b) {
  return a.game == b.game && a.round == b.round &&
         a.terminated == b.terminated && a.tiger_door == b.tiger_door &&
         a.p2_proximity == b.p2_proximity && a.grid == b.grid &&
         a.poses == b.poses && a.inventories == b.inventories &&
         a.rng == b.rng;
}

HandcraftedState handcrafted_state(const EnvState& state) {
  HandcraftedState h;
  h.game = state.game;
  h.tiger_door = state.tiger_door;
  h.inventories = state.inventories;
  return h;
}

std::pair<double, double> rws_payoff(const Inventory& v0, const Inventory& v1,
                                     const PayoffMatrix& m) {
  for (int i = 0; i < 3; ++i)
    if (v0[static_cast<std::size_t>(i)] < 0 || v1[static_cast<std::size_t>(i)] < 0)
      throw std::invalid_argument("rws_payoff: negative inventory");
  double r0 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r0 += v0[static_cast<std::size_t>(i)] * m.at(i, j) *
            v1[static_cast<std::size_t>(j)];
  return {r0, -r0};
}

namespace detail {
EnvState reset_tiger(const GameConfig& config, std::uint64_t seed,
                     std::vector<Observation>* observations);
StepResult step_tiger(EnvState& state, std::span<const int> joint_action);
EnvState reset_rws(const GameConfig& config, std::uint64_t seed,
                   std::vector<Observation>* observations);
StepResult step_rws(EnvState& state, std::span<const int> joint_action);
}  // namespace detail

EnvState reset(const GameConfig& config, std::uint64_t seed,
               std::vector<Observation>* observations) {
  switch (config.game) {
    case GameId::kTiger1:
    case GameId::kTiger2:
      if (config.tiger_horizon <= 0)
        throw std::invalid_argument("reset: tiger horizon must be positive");
      return detail::reset_tiger(config, seed, observations);
    case GameId::kRws:
      if (config.rws_rows < 9 || config.rws_cols < 13)
        throw std::invalid_argument("reset: rws grid too small for pile layout");
      return detail::reset_rws(config, seed, observations);
  }
  throw std::invalid_argument("reset: unknown game");
}

StepResult step(EnvState& state, std::span<const int> joint_action) {
  if (state.terminated) throw std::logic_error("step: episode already terminated");
  const int n = num_players(state.game);
  if (static_cast<int>(joint_action.size()) != n)
    throw std::invalid_argument("step: joint action arity mismatch");
  for (int i = 0; i < n; ++i)
    if (joint_action[static_cast<std::size_t>(i)] < 0 ||
        joint_action[static_cast<std::size_t>(i)] >= num_actions(state.game, i))
      throw std::invalid_argument("step: action out of range for player " +
                                  std::to_string(i));
  switch (state.game) {
    case GameId::kTiger1:
    case GameId::kTiger2:
      return detail::step_tiger(state, joint_action);
    case GameId::kRws:
      return detail::step_rws(state, joint_action);
  }
  throw std::invalid_argument("step: unknown game");
}

}  // namespace rb::env
