#include "rb/oracle/tiger_beliefs.hpp"

#include <stdexcept>

namespace rb::oracle {

namespace {

env::HandcraftedState door_state(env::TigerDoor door) {
  env::HandcraftedState s;
  s.game = env::GameId::kTiger1;
  s.tiger_door = door;
  return s;
}

}  // namespace

TigerB0 tiger_b0_filter(const P1History& history) {
  bool saw_left = false, saw_right = false;
  for (int g : history.growls) {
    if (g < 0 || g > 2)
      throw std::invalid_argument("tiger_b0_filter: bad growl token");
    saw_left = saw_left || g == 1;
    saw_right = saw_right || g == 2;
  }
  if (saw_left && saw_right)
    throw std::invalid_argument("tiger_b0_filter: contradictory growls");
  if (saw_left) return {Dyadic(1)};
  if (saw_right) return {Dyadic(0)};
  // Silence has equal likelihood under both doors, so the prior survives.
  return {Dyadic(1, 1)};
}

TigerB1 tiger_b1_exact(const P2History& history) {
  const bool far =
      history.three_player && history.proximity == env::Proximity::kFar;
  bool heard = false;
  for (bool h : history.heard) {
    if (h && far)
      throw std::invalid_argument("tiger_b1_exact: far P2 cannot hear");
    heard = heard || h;
  }
  if (heard) {
    // P1 certainly knows; the door itself stays symmetric for P2.
    return {Dyadic(1, 1), Dyadic(1, 1), Dyadic(0)};
  }
  if (!far) {
    // A close P2 hears every growl, so silence means P1 heard nothing.
    return {Dyadic(0), Dyadic(0), Dyadic(1)};
  }
  // Far P2 enumerates the growl outcomes it could not hear: after r listen
  // rounds P1 is still unsure with probability 0.5^r, otherwise it knows the
  // door, split evenly.
  const int r = static_cast<int>(history.heard.size());
  const Dyadic unsure = Dyadic::half_pow(r);
  const Dyadic known_half = (Dyadic(1) - unsure) * Dyadic(1, 1);
  return {known_half, known_half, unsure};
}

TigerB2 tiger_b2_exact(env::Proximity p3_observed_proximity, int round) {
  if (round < 0 || round > 10)
    throw std::invalid_argument("tiger_b2_exact: round out of range");
  if (p3_observed_proximity == env::Proximity::kFar)
    return {Dyadic(1), Dyadic(0)};
  return {Dyadic(0), Dyadic(1)};
}

model::NestedBelief nested_oracle_sample(const TigerB0& belief, int k, int l,
                                         Rng& rng) {
  if (k < 1) throw std::invalid_argument("nested_oracle_sample: K must be >= 1");
  if (l != 1)
    throw std::invalid_argument(
        "nested_oracle_sample: order-0 beliefs are targets for l == 1");
  model::NestedBelief b;
  b.order = 0;
  b.branching = k;
  b.num_co_players = 1;
  const double p = belief.p_tl.to_double();
  for (int i = 0; i < k; ++i)
    b.leaves.push_back(door_state(rng.bernoulli(p) ? env::TigerDoor::kLeft
                                                   : env::TigerDoor::kRight));
  return b;
}

model::NestedBelief nested_oracle_sample(const TigerB1& belief, int k, int l,
                                         Rng& rng) {
  if (k < 1) throw std::invalid_argument("nested_oracle_sample: K must be >= 1");
  if (l != 2)
    throw std::invalid_argument(
        "nested_oracle_sample: order-1 beliefs are targets for l == 2");
  model::NestedBelief b;
  b.order = 1;
  b.branching = k;
  b.num_co_players = 1;
  const double p_btl = belief.p_btl.to_double();
  const double p_btr = belief.p_btr.to_double();
  for (int i = 0; i < k; ++i) {
    // Sample a P1-belief category, then a collection of doors from it.
    const double u = rng.uniform01();
    TigerB0 category;
    if (u < p_btl)
      category.p_tl = Dyadic(1);
    else if (u < p_btl + p_btr)
      category.p_tl = Dyadic(0);
    else
      category.p_tl = Dyadic(1, 1);
    b.children.push_back(nested_oracle_sample(category, k, 1, rng));
  }
  return b;
}

Dyadic joint_event_prob(GrowlCondition condition, int k) {
  if (k < 1) throw std::invalid_argument("joint_event_prob: K must be >= 1");
  if (condition == GrowlCondition::kGrowl) return Dyadic(1, 1);
  return Dyadic::half_pow(k);
}

}  // namespace rb::oracle
