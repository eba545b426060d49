#ifndef RB_ENV_EPISODE_LOG_HPP_
#define RB_ENV_EPISODE_LOG_HPP_

#include <iosfwd>
#include <vector>

#include "rb/env/pomg.hpp"

namespace rb::env {

// One line per environment step: round, per-agent action ids, per-agent
// rewards, and the handcrafted state after the step.
struct EpisodeRecord {
  int round = 0;
  std::vector<int> actions;
  std::vector<double> rewards;
  HandcraftedState state;
};

void write_episode_log(std::ostream& out,
                       const std::vector<EpisodeRecord>& records);
std::vector<EpisodeRecord> read_episode_log(std::istream& in, GameId game);

}  // namespace rb::env

#endif  // RB_ENV_EPISODE_LOG_HPP_
