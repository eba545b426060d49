#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rb/oracle/tiger_beliefs.hpp"

using namespace rb;
using namespace rb::oracle;
using rb::env::Proximity;
using rb::env::TigerDoor;

TEST_CASE("dyadic arithmetic is exact") {
  Dyadic half(1, 1);
  CHECK((half + half) == Dyadic(1));
  CHECK((half * half) == Dyadic(1, 2));
  CHECK((Dyadic(1) - Dyadic::half_pow(3)) == Dyadic(7, 3));
  CHECK(Dyadic(4, 2) == Dyadic(1));  // normalization
  CHECK(Dyadic::half_pow(10).to_double() == 0.0009765625);
}

TEST_CASE("tiger_b0_filter") {
  SUBCASE("empty history keeps the uniform prior") {
    CHECK(tiger_b0_filter({}).p_tl == Dyadic(1, 1));
  }
  SUBCASE("growl-left reveals the door") {
    P1History h;
    h.growls = {0, 1};
    CHECK(tiger_b0_filter(h).p_tl == Dyadic(1));
    h.growls = {2};
    CHECK(tiger_b0_filter(h).p_tl == Dyadic(0));
  }
  SUBCASE("silent listens cancel in the likelihood") {
    for (int r = 1; r <= 10; ++r) {
      P1History h;
      h.growls.assign(static_cast<std::size_t>(r), 0);
      CHECK(tiger_b0_filter(h).p_tl == Dyadic(1, 1));
    }
  }
  SUBCASE("contradictory growls are rejected") {
    P1History h;
    h.growls = {1, 2};
    CHECK_THROWS_AS(tiger_b0_filter(h), std::invalid_argument);
    h.growls = {5};
    CHECK_THROWS_AS(tiger_b0_filter(h), std::invalid_argument);
  }
}

namespace {

// Enumeration oracle for the far-P2 first-order belief: walk every growl
// sequence of length r with its exact weight and aggregate P1's category.
TigerB1 enumerate_far_b1(int r) {
  Dyadic p_btl(0), p_btr(0), p_bu(0);
  const int sequences = 1 << r;
  for (int door = 0; door < 2; ++door) {
    for (int seq = 0; seq < sequences; ++seq) {
      const Dyadic w = Dyadic::half_pow(r + 1);  // door prior times growls
      if (seq == 0)
        p_bu = p_bu + w;
      else if (door == 0)
        p_btl = p_btl + w;
      else
        p_btr = p_btr + w;
    }
  }
  return {p_btl, p_btr, p_bu};
}

}  // namespace

TEST_CASE("tiger_b1_exact") {
  SUBCASE("v1: a heard growl splits evenly over known doors") {
    P2History h;
    h.heard = {false, true};
    TigerB1 b = tiger_b1_exact(h);
    CHECK(b.p_btl == Dyadic(1, 1));
    CHECK(b.p_btr == Dyadic(1, 1));
    CHECK(b.p_bu == Dyadic(0));
  }
  SUBCASE("v1: silence so far means P1 is certainly unsure") {
    P2History h;
    h.heard = {false, false, false};
    TigerB1 b = tiger_b1_exact(h);
    CHECK(b.p_btl == Dyadic(0));
    CHECK(b.p_bu == Dyadic(1));
  }
  SUBCASE("v2 far after one round matches the stated value") {
    P2History h;
    h.three_player = true;
    h.proximity = Proximity::kFar;
    h.heard = {false};
    TigerB1 b = tiger_b1_exact(h);
    CHECK(b.p_btl.to_double() == 0.25);
    CHECK(b.p_btr.to_double() == 0.25);
    CHECK(b.p_bu.to_double() == 0.5);
  }
  SUBCASE("v2 far matches the enumeration oracle exactly for r = 0..10") {
    for (int r = 0; r <= 10; ++r) {
      P2History h;
      h.three_player = true;
      h.proximity = Proximity::kFar;
      h.heard.assign(static_cast<std::size_t>(r), false);
      TigerB1 got = tiger_b1_exact(h);
      TigerB1 expect = enumerate_far_b1(r);
      CHECK(got.p_btl == expect.p_btl);
      CHECK(got.p_btr == expect.p_btr);
      CHECK(got.p_bu == expect.p_bu);
    }
  }
  SUBCASE("far P2 with a heard growl is malformed") {
    P2History h;
    h.three_player = true;
    h.proximity = Proximity::kFar;
    h.heard = {true};
    CHECK_THROWS_AS(tiger_b1_exact(h), std::invalid_argument);
  }
  SUBCASE("distributions sum to one exactly") {
    for (int r = 0; r <= 10; ++r) {
      for (bool far : {false, true}) {
        P2History h;
        h.three_player = true;
        h.proximity = far ? Proximity::kFar : Proximity::kClose;
        h.heard.assign(static_cast<std::size_t>(r), false);
        TigerB1 b = tiger_b1_exact(h);
        CHECK((b.p_btl + b.p_btr + b.p_bu) == Dyadic(1));
      }
    }
  }
}

TEST_CASE("marginal collapse identity p_btl + 0.5 p_bu == 0.5 exactly") {
  Rng rng(13);
  const Dyadic half(1, 1);
  for (int i = 0; i < 10000; ++i) {
    P2History h;
    h.three_player = rng.bernoulli(0.5);
    h.proximity = h.three_player && rng.bernoulli(0.5) ? Proximity::kFar
                                                       : Proximity::kClose;
    const int r = static_cast<int>(rng.uniform_int(11));
    const bool can_hear =
        !h.three_player || h.proximity == Proximity::kClose;
    bool heard_any = false;
    for (int t = 0; t < r; ++t) {
      const bool growl = rng.bernoulli(0.5);
      const bool hears = can_hear && growl && !heard_any;
      // A close P2 that heard a growl once has a fixed posterior afterwards;
      // feeding a single heard flag is equivalent and keeps histories valid.
      h.heard.push_back(hears);
      heard_any = heard_any || hears;
    }
    TigerB1 b = tiger_b1_exact(h);
    CHECK((b.p_btl + half * b.p_bu) == half);
  }
}

namespace {

// The scripted players: P1 listens until it hears a growl and then opens the
// safe door; a close P2 mirrors P1's known action class; a far P2 waits.
// Enumerate the scripted P2's class for every growl prefix of a round.
TigerB2 enumerate_scripted_p2(Proximity proximity, int round) {
  if (proximity == Proximity::kFar) return {Dyadic(1), Dyadic(0)};
  // Close P2 knows P1's class at every round (commit to listen before any
  // growl, commit to door afterwards), so it always commits.
  (void)round;
  return {Dyadic(0), Dyadic(1)};
}

}  // namespace

TEST_CASE("tiger_b2_exact") {
  SUBCASE("far P2 always waits") {
    for (int r = 0; r <= 10; ++r) {
      TigerB2 b = tiger_b2_exact(Proximity::kFar, r);
      CHECK(b.p_wait == Dyadic(1));
    }
  }
  SUBCASE("close P2 commits from the first round") {
    CHECK(tiger_b2_exact(Proximity::kClose, 1).p_commit == Dyadic(1));
  }
  SUBCASE("close and far differ at every round") {
    for (int r = 0; r <= 10; ++r) {
      TigerB2 close = tiger_b2_exact(Proximity::kClose, r);
      TigerB2 far = tiger_b2_exact(Proximity::kFar, r);
      CHECK(!(close.p_wait == far.p_wait));
      TigerB2 expect_close = enumerate_scripted_p2(Proximity::kClose, r);
      TigerB2 expect_far = enumerate_scripted_p2(Proximity::kFar, r);
      CHECK(close.p_commit == expect_close.p_commit);
      CHECK(far.p_wait == expect_far.p_wait);
    }
  }
  SUBCASE("round range is checked") {
    CHECK_THROWS_AS(tiger_b2_exact(Proximity::kClose, 11), std::invalid_argument);
    CHECK_THROWS_AS(tiger_b2_exact(Proximity::kClose, -1), std::invalid_argument);
  }
}

TEST_CASE("joint_event_prob") {
  CHECK(joint_event_prob(GrowlCondition::kSilence, 1) == Dyadic(1, 1));
  CHECK(joint_event_prob(GrowlCondition::kGrowl, 10) == Dyadic(1, 1));
  CHECK(joint_event_prob(GrowlCondition::kSilence, 10).to_double() ==
        0.0009765625);
  SUBCASE("silence probability is the K-th power of the K=1 case, exactly") {
    for (int k = 1; k <= 10; ++k) {
      Dyadic p = joint_event_prob(GrowlCondition::kSilence, 1);
      Dyadic pk(1);
      for (int i = 0; i < k; ++i) pk = pk * p;
      CHECK(joint_event_prob(GrowlCondition::kSilence, k) == pk);
    }
  }
  CHECK_THROWS_AS(joint_event_prob(GrowlCondition::kGrowl, 0),
                  std::invalid_argument);
}

TEST_CASE("nested_oracle_sample order 0") {
  Rng rng(31);
  SUBCASE("degenerate belief yields a constant collection") {
    TigerB0 b{Dyadic(1)};
    model::NestedBelief n = nested_oracle_sample(b, 4, 1, rng);
    REQUIRE(n.leaves.size() == 4);
    for (const auto& s : n.leaves) CHECK(s.tiger_door == TigerDoor::kLeft);
    CHECK(n.shape_valid());
  }
  SUBCASE("empirical leaf frequency matches the oracle within 3 sigma") {
    TigerB0 b{Dyadic(1, 1)};
    const int n_draws = 100000;
    int tl = 0;
    for (int i = 0; i < n_draws; ++i) {
      model::NestedBelief n = nested_oracle_sample(b, 1, 1, rng);
      tl += n.leaves[0].tiger_door == TigerDoor::kLeft ? 1 : 0;
    }
    const double sigma = std::sqrt(0.25 / n_draws);
    CHECK(std::abs(tl / double(n_draws) - 0.5) < 3 * sigma + 1e-9);
  }
  SUBCASE("l must be the belief order plus one") {
    TigerB0 b{Dyadic(1, 1)};
    CHECK_THROWS(nested_oracle_sample(b, 4, 2, rng));
    CHECK_THROWS(nested_oracle_sample(b, 0, 1, rng));
  }
}

TEST_CASE("nested_oracle_sample order 1") {
  Rng rng(37);
  SUBCASE("all-unsure belief produces mixed collections") {
    TigerB1 b{Dyadic(0), Dyadic(0), Dyadic(1)};
    // Aggregate across draws: every collection should be near p_tl = 0.5.
    const int draws = 2000;
    std::array<int, 4> tl_count{};
    for (int d = 0; d < draws; ++d) {
      model::NestedBelief n = nested_oracle_sample(b, 4, 2, rng);
      REQUIRE(n.children.size() == 4);
      CHECK(n.shape_valid());
      for (int c = 0; c < 4; ++c)
        for (const auto& s : n.children[static_cast<std::size_t>(c)].leaves)
          tl_count[static_cast<std::size_t>(c)] +=
              s.tiger_door == TigerDoor::kLeft ? 1 : 0;
    }
    for (int c = 0; c < 4; ++c) {
      const double f = tl_count[static_cast<std::size_t>(c)] / double(draws * 4);
      CHECK(std::abs(f - 0.5) < 0.03);
    }
  }
  SUBCASE("leaf count follows the tree shape") {
    TigerB1 b{Dyadic(1, 1), Dyadic(1, 1), Dyadic(0)};
    model::NestedBelief n = nested_oracle_sample(b, 3, 2, rng);
    CHECK(n.leaf_count() == 9);
    CHECK(model::NestedBelief::expected_leaf_count(1, 3, 1) == 9);
  }
}

TEST_CASE("nested belief serialization round-trips") {
  Rng rng(41);
  TigerB1 b{Dyadic(1, 2), Dyadic(1, 2), Dyadic(1, 1)};
  model::NestedBelief n = nested_oracle_sample(b, 3, 2, rng);
  std::stringstream ss;
  model::serialize_nested(ss, n);
  model::NestedBelief back = model::deserialize_nested(ss, env::GameId::kTiger1);
  CHECK(back.order == n.order);
  CHECK(back.branching == n.branching);
  REQUIRE(back.children.size() == n.children.size());
  for (std::size_t c = 0; c < n.children.size(); ++c)
    for (std::size_t k = 0; k < n.children[c].leaves.size(); ++k)
      CHECK(back.children[c].leaves[k].tiger_door ==
            n.children[c].leaves[k].tiger_door);
}
