#include "rb/model/state_codec.hpp"

#include <algorithm>
#include <stdexcept>

namespace rb::model {

StateSpec belief_state_spec(env::GameId game) {
  if (game == env::GameId::kRws)
    return {{kRwsInventoryCap + 1, kRwsInventoryCap + 1, kRwsInventoryCap + 1}};
  return {{2}};
}

std::vector<int> belief_target(const env::HandcraftedState& state,
                               int target_player) {
  if (state.game == env::GameId::kRws) {
    const auto& inv = state.inventories.at(static_cast<std::size_t>(target_player));
    std::vector<int> out(3);
    for (int i = 0; i < 3; ++i)
      out[static_cast<std::size_t>(i)] =
          std::clamp(inv[static_cast<std::size_t>(i)], 0, kRwsInventoryCap);
    return out;
  }
  return {state.tiger_door == env::TigerDoor::kLeft ? 0 : 1};
}

env::HandcraftedState target_to_state(env::GameId game,
                                      const std::vector<int>& categories,
                                      int target_player) {
  env::HandcraftedState s;
  s.game = game;
  if (game == env::GameId::kRws) {
    if (categories.size() != 3)
      throw std::invalid_argument("target_to_state: rws expects 3 dims");
    for (int i = 0; i < 3; ++i)
      s.inventories.at(static_cast<std::size_t>(target_player))
          [static_cast<std::size_t>(i)] = categories[static_cast<std::size_t>(i)];
  } else {
    if (categories.size() != 1)
      throw std::invalid_argument("target_to_state: tiger expects 1 dim");
    s.tiger_door = categories[0] == 0 ? env::TigerDoor::kLeft
                                      : env::TigerDoor::kRight;
  }
  return s;
}

std::vector<double> onehot_encode(const StateSpec& spec,
                                  const std::vector<int>& categories,
                                  int filled) {
  std::vector<double> out(static_cast<std::size_t>(spec.onehot_size()), 0.0);
  int off = 0;
  for (int d = 0; d < spec.dims(); ++d) {
    const int c = spec.categories[static_cast<std::size_t>(d)];
    if (d < filled) {
      const int v = categories.at(static_cast<std::size_t>(d));
      if (v < 0 || v >= c)
        throw std::invalid_argument("onehot_encode: category out of range");
      out[static_cast<std::size_t>(off + v)] = 1.0;
    }
    off += c;
  }
  return out;
}

}  // namespace rb::model
