#ifndef RB_MODEL_TRAJ_PRED_HPP_
#define RB_MODEL_TRAJ_PRED_HPP_

#include <string>
#include <vector>

#include "rb/model/resmade.hpp"

namespace rb::model {

// Baseline belief representation: instead of the handcrafted state, predict
// the opponent's observation cells and action with the same masked
// autoregressive architecture.
class TrajPredModel {
 public:
  TrajPredModel() = default;
  TrajPredModel(diff::ParamStore& params, const std::string& prefix,
                env::GameId game, int code_dim, int width, int n_blocks,
                Rng& rng);

  // log p(opponent observation, opponent action | code)
  diff::Var log_prob(diff::Tape& t, diff::Var code,
                     const env::Observation& opponent_obs,
                     int opponent_action) const;

  const ResMade& decoder() const { return made_; }
  std::vector<int> discretize(const env::Observation& obs,
                              int opponent_action) const;

 private:
  env::GameId game_ = env::GameId::kRws;
  ResMade made_;
};

}  // namespace rb::model

#endif  // RB_MODEL_TRAJ_PRED_HPP_
