#include "rb/model/traj_pred.hpp"

#include <stdexcept>

namespace rb::model {

namespace {

StateSpec traj_spec(env::GameId game) {
  StateSpec spec;
  if (game == env::GameId::kRws) {
    // 16 window cells then the action.
    spec.categories.assign(16, env::rws::kNumCellSymbols);
    spec.categories.push_back(env::num_actions(game, 0));
  } else {
    // Tiger observations are a single growl symbol; the opponent is P1.
    spec.categories = {3, env::num_actions(game, 0)};
  }
  return spec;
}

}  // namespace

TrajPredModel::TrajPredModel(diff::ParamStore& params, const std::string& prefix,
                             env::GameId game, int code_dim, int width,
                             int n_blocks, Rng& rng)
    : game_(game), made_(params, prefix + ".traj", traj_spec(game), code_dim,
                         width, n_blocks, rng) {}

std::vector<int> TrajPredModel::discretize(const env::Observation& obs,
                                           int opponent_action) const {
  std::vector<int> x;
  if (game_ == env::GameId::kRws) {
    for (int i = 0; i < 16; ++i)
      x.push_back(obs.window[static_cast<std::size_t>(i)]);
  } else {
    x.push_back(obs.growl);
  }
  x.push_back(opponent_action);
  return x;
}

diff::Var TrajPredModel::log_prob(diff::Tape& t, diff::Var code,
                                  const env::Observation& opponent_obs,
                                  int opponent_action) const {
  const std::vector<int> x = discretize(opponent_obs, opponent_action);
  if (static_cast<int>(x.size()) != made_.spec().dims())
    throw std::invalid_argument("traj_pred: schema mismatch");
  return made_.log_prob(t, code, x);
}

}  // namespace rb::model
