#ifndef RB_DIFF_CHECKPOINT_HPP_
#define RB_DIFF_CHECKPOINT_HPP_

#include <string>

#include "rb/diff/param_store.hpp"
#include "rb/rng.hpp"

namespace rb::diff {

// Versioned named-array container: shapes, values, optimizer slots, rng state.
inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const ParamStore& params, const Rng& rng,
                     const std::string& path);

// Replaces the store contents and the rng state.
void load_checkpoint(ParamStore& params, Rng& rng, const std::string& path);

}  // namespace rb::diff

#endif  // RB_DIFF_CHECKPOINT_HPP_
