#ifndef RB_TRAIN_POPULATION_HPP_
#define RB_TRAIN_POPULATION_HPP_

#include <memory>
#include <span>
#include <vector>

#include "rb/train/agent.hpp"

namespace rb::train {

// Sub-population lists with per-agent independent parameters.
struct Population {
  std::vector<std::unique_ptr<Agent>> specialists;
  std::vector<std::unique_ptr<Agent>> non_specialists;
  std::vector<std::unique_ptr<Agent>> mains;

  std::vector<Agent*> pool() const {
    std::vector<Agent*> all;
    for (const auto& a : specialists) all.push_back(a.get());
    for (const auto& a : non_specialists) all.push_back(a.get());
    for (const auto& a : mains) all.push_back(a.get());
    return all;
  }
};

// Uniform lineup without replacement from the whole pool.
std::vector<Agent*> population_sample(std::span<Agent* const> pool,
                                      env::GameId game, Rng& rng);

// Adds the +5 pseudoreward when a specialist picks up its preferred resource.
// pickup_code is the grid cell code of the picked resource, or -1.
double specialist_reward(const Agent& agent, double env_reward,
                         int pickup_code);

}  // namespace rb::train

#endif  // RB_TRAIN_POPULATION_HPP_
