#include "rb/model/agent_net.hpp"

#include <algorithm>
#include <stdexcept>

namespace rb::model {

using diff::Tape;
using diff::Var;

int observation_dim(env::GameId game, int player) {
  switch (game) {
    case env::GameId::kTiger1:
      return player == 0 ? 3 : 2;
    case env::GameId::kTiger2:
      if (player == 0) return 3;
      return player == 1 ? 4 : 2;  // P2: growl + proximity, P3: proximity
    case env::GameId::kRws:
      return 16 * env::rws::kNumCellSymbols + 3;
  }
  return 0;
}

std::vector<double> encode_observation(const env::Observation& obs) {
  std::vector<double> v(static_cast<std::size_t>(observation_dim(obs.game, obs.player)), 0.0);
  switch (obs.game) {
    case env::GameId::kTiger1:
      v[static_cast<std::size_t>(obs.growl)] = 1.0;  // P2 growl is 0/1
      break;
    case env::GameId::kTiger2:
      if (obs.player == 0) {
        v[static_cast<std::size_t>(obs.growl)] = 1.0;
      } else if (obs.player == 1) {
        v[static_cast<std::size_t>(obs.growl)] = 1.0;
        v[static_cast<std::size_t>(2 + obs.proximity)] = 1.0;
      } else {
        v[static_cast<std::size_t>(obs.proximity)] = 1.0;
      }
      break;
    case env::GameId::kRws: {
      for (int i = 0; i < 16; ++i)
        v[static_cast<std::size_t>(i * env::rws::kNumCellSymbols +
                                   obs.window[static_cast<std::size_t>(i)])] = 1.0;
      const int off = 16 * env::rws::kNumCellSymbols;
      for (int i = 0; i < 3; ++i)
        v[static_cast<std::size_t>(off + i)] =
            std::min(obs.inventory[static_cast<std::size_t>(i)], 30) / 30.0;
      break;
    }
  }
  return v;
}

AgentNet::AgentNet(diff::ParamStore& params, const std::string& prefix,
                   AgentNetConfig cfg, Rng& rng)
    : cfg_(std::move(cfg)) {
  mf_encoder_ = make_mlp(params, prefix + ".mf_enc", cfg_.obs_dim,
                         cfg_.encoder_sizes, rng);
  belief_encoder_ = make_mlp(params, prefix + ".b_enc", cfg_.obs_dim,
                             cfg_.encoder_sizes, rng);
  const int enc_out = cfg_.encoder_sizes.empty() ? cfg_.obs_dim
                                                 : cfg_.encoder_sizes.back();
  mf_gru_ = make_gru(params, prefix + ".mf_gru", enc_out, cfg_.mf_dim, rng);
  belief_gru_ = make_gru(params, prefix + ".b_gru", enc_out, cfg_.code_dim, rng);
}

std::pair<Var, Var> AgentNet::encode_step(Tape& t, Var f_mf, Var b_hat,
                                          Var obs) const {
  if (obs.size() != cfg_.obs_dim)
    throw std::invalid_argument("encode_step: observation size mismatch");
  Var mf_in = mf_encoder_(t, obs, diff::Activation::kRelu);
  Var b_in = belief_encoder_(t, obs, diff::Activation::kRelu);
  Var mf_next = gru_step(t, mf_gru_, f_mf, mf_in);
  Var b_next = gru_step(t, belief_gru_, b_hat, b_in);
  return {mf_next, b_next};
}

BeliefCodeValue AgentNet::encode_step_value(const BeliefCodeValue& code,
                                            const std::vector<double>& obs) const {
  Tape t;
  auto [mf, bh] = encode_step(t, t.input(code.f_mf), t.input(code.b_hat),
                              t.input(obs));
  BeliefCodeValue out;
  out.f_mf.assign(mf.value().begin(), mf.value().end());
  out.b_hat.assign(bh.value().begin(), bh.value().end());
  return out;
}

}  // namespace rb::model
