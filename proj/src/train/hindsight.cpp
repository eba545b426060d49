#include "rb/train/hindsight.hpp"

#include <stdexcept>

#include "rb/oracle/tiger_beliefs.hpp"

namespace rb::train {

namespace {

int modeled_co_player(env::GameId game, int learner_seat) {
  switch (game) {
    case env::GameId::kTiger1:
      return 0;  // P2 models P1
    case env::GameId::kTiger2:
      return 1;  // P3 models P2 (who in turn models P1)
    case env::GameId::kRws:
      return 1 - learner_seat;
  }
  return 0;
}

}  // namespace

BeliefTargets hindsight_targets(const EpisodeHistory& episode, Agent& learner,
                                int learner_seat, Rng& rng) {
  const AgentConfig& cfg = learner.config();
  const int T = static_cast<int>(episode.states.size());
  if (static_cast<int>(episode.observations.size()) != T)
    throw std::invalid_argument("hindsight_targets: state/observation mismatch");
  const int order = belief_order(cfg.type);
  const int j = modeled_co_player(episode.game, learner_seat);

  BeliefTargets out;
  out.co_player = j;
  const int opponent = episode.game == env::GameId::kRws ? 1 - learner_seat : j;

  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(episode.observations[static_cast<std::size_t>(t)].size()) <=
        std::max(learner_seat, j))
      throw std::invalid_argument("hindsight_targets: missing co-player history");
    out.b0.push_back(model::belief_target(
        episode.states[static_cast<std::size_t>(t)], opponent));
  }

  if (order < 1 || cfg.type == AgentType::kModelFree ||
      cfg.type == AgentType::kTrajPred) {
    out.bl.assign(static_cast<std::size_t>(T), std::nullopt);
    return out;
  }

  if (cfg.oracle_targets) {
    if (episode.game == env::GameId::kRws)
      throw std::invalid_argument("hindsight_targets: no oracle for rws");
    if (order == 1) {
      // b0(P1) sampled from P1's exact posterior over the door. The oracle
      // collapses to the true door once P1 has heard a growl.
      oracle::P1History h;
      for (int t = 0; t < T; ++t) {
        h.growls.push_back(
            episode.observations[static_cast<std::size_t>(t)][0].growl);
        out.bl.push_back(oracle::nested_oracle_sample(
            oracle::tiger_b0_filter(h), cfg.k, 1, rng));
      }
    } else if (order == 2) {
      // b1(P2) sampled from P2's exact first-order belief.
      oracle::P2History h;
      h.three_player = episode.game == env::GameId::kTiger2;
      const int prox = episode.observations[0][1].proximity;
      h.proximity = prox == 1 ? env::Proximity::kFar : env::Proximity::kClose;
      for (int t = 0; t < T; ++t) {
        // At step t the channel has seen the outcomes of rounds 1..t.
        if (t > 0)
          h.heard.push_back(
              episode.observations[static_cast<std::size_t>(t)][1].growl != 0);
        out.bl.push_back(oracle::nested_oracle_sample(
            oracle::tiger_b1_exact(h), cfg.k, 2, rng));
      }
    } else {
      throw std::invalid_argument("hindsight_targets: oracle order > 2");
    }
    return out;
  }

  if (order != 1)
    throw std::invalid_argument(
        "hindsight_targets: model-generated targets support order 1 only");

  // Order 1 from the learner's own models: run the co-player's history
  // through the learner's networks, then sample its order-0 model. The
  // cross pairs also train the order-0 model on that stream.
  model::BeliefCodeValue cross =
      model::BeliefCodeValue::zeros(cfg.net.mf_dim, cfg.net.code_dim);
  for (int t = 0; t < T; ++t) {
    out.cross_pre_codes.push_back(cross);
    const env::Observation& obs_j =
        episode.observations[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
    cross = learner.net().encode_step_value(cross,
                                            model::encode_observation(obs_j));
    diff::Tape tape;
    out.bl.push_back(learner.belief().b0_sample_collection(
        tape, tape.input(cross.b_hat), cfg.k, rng));
    out.b0_cross.push_back(model::belief_target(
        episode.states[static_cast<std::size_t>(t)], learner_seat));
  }
  return out;
}

}  // namespace rb::train
