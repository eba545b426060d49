#include "rb/train/population.hpp"

#include <stdexcept>

namespace rb::train {

std::vector<Agent*> population_sample(std::span<Agent* const> pool,
                                      env::GameId game, Rng& rng) {
  const int need = env::num_players(game);
  if (static_cast<int>(pool.size()) < need)
    throw std::invalid_argument("population_sample: pool smaller than lineup");
  std::vector<Agent*> candidates(pool.begin(), pool.end());
  std::vector<Agent*> lineup;
  for (int i = 0; i < need; ++i) {
    const std::size_t pick = rng.uniform_int(candidates.size());
    lineup.push_back(candidates[pick]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return lineup;
}

double specialist_reward(const Agent& agent, double env_reward,
                         int pickup_code) {
  if (agent.config().game != env::GameId::kRws)
    throw std::invalid_argument("specialist_reward: rws only");
  if (agent.config().specialist < 0 || pickup_code < 0) return env_reward;
  const int resource = pickup_code - env::rws::kRock;
  if (resource == agent.config().specialist)
    return env_reward + agent.config().specialist_bonus;
  return env_reward;
}

}  // namespace rb::train
