#include <algorithm>
#include <stdexcept>

#include "rb/env/pomg.hpp"

namespace rb::env::detail {

namespace {

constexpr int kDr[4] = {-1, 0, 1, 0};
constexpr int kDc[4] = {0, 1, 0, -1};

bool in_bounds(const EnvState& s, int r, int c) {
  return r >= 0 && r < s.config.rws_rows && c >= 0 && c < s.config.rws_cols;
}

Observation rws_observation(const EnvState& s, int player) {
  Observation o;
  o.game = GameId::kRws;
  o.player = player;
  const PlayerPose& me = s.poses[static_cast<std::size_t>(player)];
  const PlayerPose& other = s.poses[static_cast<std::size_t>(1 - player)];
  // 4x4 window shifted one cell toward the facing direction.
  const int fr = kDr[me.dir];
  const int fc = kDc[me.dir];
  int idx = 0;
  for (int dr = -2; dr <= 1; ++dr) {
    for (int dc = -2; dc <= 1; ++dc) {
      const int r = me.row + fr + dr;
      const int c = me.col + fc + dc;
      std::int8_t sym = rws::kWall;
      if (in_bounds(s, r, c)) {
        sym = s.cell(r, c);
        if (r == other.row && c == other.col) sym = rws::kOpponent;
        if (r == me.row && c == me.col) sym = rws::kSelf;
      }
      o.window[static_cast<std::size_t>(idx++)] = sym;
    }
  }
  o.inventory = s.inventories[static_cast<std::size_t>(player)];
  return o;
}

void fill_pile(EnvState& s, int r0, int c0, std::int8_t code) {
  for (int r = r0; r < r0 + 3; ++r)
    for (int c = c0; c < c0 + 3; ++c) s.cell(r, c) = code;
}

void terminal_payoff(EnvState& s, StepResult& result) {
  auto [r0, r1] = rws_payoff(s.inventories[0], s.inventories[1], s.config.payoff);
  if (s.config.normalize_payoff) {
    auto total = [](const Inventory& v) {
      return std::max(1, v[0] + v[1] + v[2]);
    };
    const double norm = static_cast<double>(total(s.inventories[0])) *
                        static_cast<double>(total(s.inventories[1]));
    r0 /= norm;
    r1 /= norm;
  }
  result.rewards[0] += r0;
  result.rewards[1] += r1;
}

}  // namespace

EnvState reset_rws(const GameConfig& config, std::uint64_t seed,
                   std::vector<Observation>* observations) {
  EnvState s;
  s.game = GameId::kRws;
  s.config = config;
  s.round = 0;
  s.terminated = false;
  s.rng = Rng(seed);
  const int rows = config.rws_rows;
  const int cols = config.rws_cols;
  s.grid.assign(static_cast<std::size_t>(rows * cols), rws::kEmpty);
  for (int r = 0; r < rows; ++r) {
    s.cell(r, 0) = rws::kWall;
    s.cell(r, cols - 1) = rws::kWall;
  }
  for (int c = 0; c < cols; ++c) {
    s.cell(0, c) = rws::kWall;
    s.cell(rows - 1, c) = rws::kWall;
  }
  // Three fixed piles in the corners plus one pile of nine random resources.
  fill_pile(s, 1, 1, rws::kRock);
  fill_pile(s, 1, cols - 4, rws::kPaper);
  fill_pile(s, rows - 4, 1, rws::kScissors);
  for (int r = rows - 4; r < rows - 1; ++r)
    for (int c = cols - 4; c < cols - 1; ++c)
      s.cell(r, c) = static_cast<std::int8_t>(rws::kRock + s.rng.uniform_int(3));

  s.poses[0] = PlayerPose{rows / 2, cols / 2 - 1, 0};
  s.poses[1] = PlayerPose{rows / 2, cols / 2 + 1, 2};
  s.inventories[0] = {1, 1, 1};
  s.inventories[1] = {1, 1, 1};

  if (observations != nullptr) {
    observations->clear();
    observations->push_back(rws_observation(s, 0));
    observations->push_back(rws_observation(s, 1));
  }
  return s;
}

StepResult step_rws(EnvState& state, std::span<const int> joint_action) {
  StepResult result;
  result.rewards.assign(2, 0.0);
  bool tagged = false;

  // Fixed resolution order; the second mover sees the first mover's new cell.
  for (int p = 0; p < 2; ++p) {
    const int a = joint_action[static_cast<std::size_t>(p)];
    PlayerPose& me = state.poses[static_cast<std::size_t>(p)];
    const PlayerPose& other = state.poses[static_cast<std::size_t>(1 - p)];
    switch (a) {
      case rws::kUp:
      case rws::kDown:
      case rws::kLeft:
      case rws::kRight: {
        const int dir = a == rws::kUp ? 0 : a == rws::kRight ? 1 : a == rws::kDown ? 2 : 3;
        const int nr = me.row + kDr[dir];
        const int nc = me.col + kDc[dir];
        if (in_bounds(state, nr, nc) && state.cell(nr, nc) != rws::kWall &&
            !(other.row == nr && other.col == nc)) {
          me.row = nr;
          me.col = nc;
          const std::int8_t here = state.cell(nr, nc);
          if (here == rws::kRock || here == rws::kPaper || here == rws::kScissors) {
            state.inventories[static_cast<std::size_t>(p)]
                             [static_cast<std::size_t>(here - rws::kRock)] += 1;
            state.cell(nr, nc) = rws::kEmpty;
            result.pickups[static_cast<std::size_t>(p)] = here;
          }
        }
        break;
      }
      case rws::kTurnLeft:
        me.dir = (me.dir + 3) % 4;
        break;
      case rws::kTurnRight:
        me.dir = (me.dir + 1) % 4;
        break;
      case rws::kTag: {
        // 1x2 zone: the two cells directly ahead.
        for (int d = 1; d <= 2; ++d) {
          const int tr = me.row + d * kDr[me.dir];
          const int tc = me.col + d * kDc[me.dir];
          if (other.row == tr && other.col == tc) tagged = true;
        }
        break;
      }
      case rws::kNoop:
        break;
      default:
        throw std::invalid_argument("step_rws: bad action");
    }
  }

  state.round += 1;
  state.terminated = tagged || state.round >= state.config.rws_max_steps;
  result.done = state.terminated;
  if (state.terminated) terminal_payoff(state, result);

  result.observations.push_back(rws_observation(state, 0));
  result.observations.push_back(rws_observation(state, 1));
  return result;
}

}  // namespace rb::env::detail
