#ifndef RB_MODEL_STATE_CODEC_HPP_
#define RB_MODEL_STATE_CODEC_HPP_

#include <numeric>
#include <vector>

#include "rb/env/pomg.hpp"

namespace rb::model {

// Discretization of the belief target: D_env categorical dimensions.
struct StateSpec {
  std::vector<int> categories;
  int dims() const { return static_cast<int>(categories.size()); }
  int onehot_size() const {
    return std::accumulate(categories.begin(), categories.end(), 0);
  }
};

inline constexpr int kRwsInventoryCap = 30;

// Tiger: one binary dimension (the door). RWS: the modeled player's three
// inventory counts, clamped to [0, 30].
StateSpec belief_state_spec(env::GameId game);

// Category indices for the modeled slice of the handcrafted state.
// `target_player` selects whose private inventory is modeled in RWS; the
// Tiger door ignores it.
std::vector<int> belief_target(const env::HandcraftedState& state,
                               int target_player);

env::HandcraftedState target_to_state(env::GameId game,
                                      const std::vector<int>& categories,
                                      int target_player);

// One-hot encoding of a (possibly partial) category vector; dimensions with
// index >= filled get all-zero blocks.
std::vector<double> onehot_encode(const StateSpec& spec,
                                  const std::vector<int>& categories,
                                  int filled);

}  // namespace rb::model

#endif  // RB_MODEL_STATE_CODEC_HPP_
