#ifndef RB_ENV_POMG_HPP_
#define RB_ENV_POMG_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rb/rng.hpp"

namespace rb::env {

enum class GameId { kTiger1, kTiger2, kRws };

enum class TigerDoor : std::uint8_t { kLeft = 0, kRight = 1 };
enum class Proximity : std::uint8_t { kClose = 0, kFar = 1 };

// Tiger action ids.
namespace tiger {
inline constexpr int kOpenLeft = 0;
inline constexpr int kOpenRight = 1;
inline constexpr int kListen = 2;
// v1 P2
inline constexpr int kPredictOpen = 0;
inline constexpr int kPredictListen = 1;
// v2 P2
inline constexpr int kCommitDoor = 0;
inline constexpr int kCommitListen = 1;
inline constexpr int kWait = 2;
// v2 P3
inline constexpr int kPredictWait = 0;
inline constexpr int kPredictCommit = 1;
}  // namespace tiger

// RWS action ids (shared by both players).
namespace rws {
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;
inline constexpr int kLeft = 2;
inline constexpr int kRight = 3;
inline constexpr int kTurnLeft = 4;
inline constexpr int kTurnRight = 5;
inline constexpr int kTag = 6;
inline constexpr int kNoop = 7;

// Grid cell contents.
inline constexpr std::int8_t kEmpty = 0;
inline constexpr std::int8_t kWall = 1;
inline constexpr std::int8_t kRock = 2;
inline constexpr std::int8_t kPaper = 3;
inline constexpr std::int8_t kScissors = 4;
// Window-only symbols.
inline constexpr std::int8_t kOpponent = 5;
inline constexpr std::int8_t kSelf = 6;
inline constexpr int kNumCellSymbols = 7;
inline constexpr int kWindow = 4;
}  // namespace rws

// 3x3 antisymmetric payoff in (rock, paper, scissors) order.
struct PayoffMatrix {
  std::array<double, 9> m;
  double at(int r, int c) const { return m[static_cast<std::size_t>(r * 3 + c)]; }
};

inline constexpr PayoffMatrix kDefaultPayoff{
    {0, -1, 1, 1, 0, -1, -1, 1, 0}};

struct GameConfig {
  GameId game = GameId::kTiger1;
  // Tiger
  int tiger_horizon = 10;
  double wrong_commit_penalty = -1.0;
  // RWS
  int rws_rows = 9;
  int rws_cols = 13;
  int rws_max_steps = 300;
  PayoffMatrix payoff = kDefaultPayoff;
  bool normalize_payoff = true;
};

struct PlayerPose {
  int row = 0;
  int col = 0;
  int dir = 0;  // 0 N, 1 E, 2 S, 3 W
  bool operator==(const PlayerPose&) const = default;
};

using Inventory = std::array<int, 3>;  // (rock, paper, scissors), >= 0

struct EnvState {
  GameId game = GameId::kTiger1;
  GameConfig config;
  int round = 0;
  bool terminated = false;
  // Tiger
  TigerDoor tiger_door = TigerDoor::kLeft;
  Proximity p2_proximity = Proximity::kClose;
  // RWS
  std::vector<std::int8_t> grid;  // rows * cols, row-major
  std::array<PlayerPose, 2> poses{};
  std::array<Inventory, 2> inventories{};
  Rng rng;

  std::int8_t cell(int r, int c) const {
    return grid[static_cast<std::size_t>(r * config.rws_cols + c)];
  }
  std::int8_t& cell(int r, int c) {
    return grid[static_cast<std::size_t>(r * config.rws_cols + c)];
  }
};

bool states_equal(const EnvState& a, const EnvState& b);

// Per-agent symbolic observation. Which fields are populated depends on the
// game and the receiving player.
struct Observation {
  GameId game = GameId::kTiger1;
  int player = 0;
  // Tiger: P1 growl in {0 none, 1 growl-left, 2 growl-right};
  //        P2 growl in {0 none, 1 growl}; P3 always 0.
  int growl = 0;
  int proximity = -1;  // tiger2 P2/P3: 0 close, 1 far; -1 when not observed
  // RWS: 4x4 window of cell symbols plus the observer's own inventory.
  std::array<std::int8_t, 16> window{};
  Inventory inventory{};
};

struct StepResult {
  std::vector<Observation> observations;
  std::vector<double> rewards;
  bool done = false;
  // RWS pickup events this step: resource cell code or -1. Used for
  // specialist pseudorewards.
  std::array<std::int8_t, 2> pickups{-1, -1};
};

// Task-salient projection of the full state used as the belief target.
struct HandcraftedState {
  GameId game = GameId::kTiger1;
  TigerDoor tiger_door = TigerDoor::kLeft;
  std::array<Inventory, 2> inventories{};
};

int num_players(GameId game);
int num_actions(GameId game, int player);
std::string action_name(GameId game, int player, int action);

// Deterministic for a given (config, seed).
EnvState reset(const GameConfig& config, std::uint64_t seed,
               std::vector<Observation>* observations = nullptr);

// Advances the state in place. Throws std::logic_error after termination and
// std::invalid_argument on out-of-range actions.
StepResult step(EnvState& state, std::span<const int> joint_action);

HandcraftedState handcrafted_state(const EnvState& state);

// Raw antisymmetric bilinear payoff r0 = v0 M v1^T, r1 = -r0. The environment
// applies inventory-sum normalization on top of this at episode end.
std::pair<double, double> rws_payoff(const Inventory& v0, const Inventory& v1,
                                     const PayoffMatrix& m);

}  // namespace rb::env

#endif  // RB_ENV_POMG_HPP_
