#ifndef RB_ORACLE_TIGER_BELIEFS_HPP_
#define RB_ORACLE_TIGER_BELIEFS_HPP_

#include <vector>

#include "rb/env/pomg.hpp"
#include "rb/model/nested_belief.hpp"
#include "rb/oracle/dyadic.hpp"
#include "rb/rng.hpp"

namespace rb::oracle {

// P1's growl observations, one entry per completed listen round:
// 0 none, 1 growl-left, 2 growl-right.
struct P1History {
  std::vector<int> growls;
};

// P2's per-round growl channel. For the three-player game the proximity is
// part of the history; far players can never have heard anything.
struct P2History {
  bool three_player = false;
  env::Proximity proximity = env::Proximity::kClose;
  std::vector<bool> heard;
};

// P1's belief over the tiger door.
struct TigerB0 {
  Dyadic p_tl;  // in {0, 1/2, 1} for reachable histories
};

// Distribution over P1-belief categories {knows-left, knows-right, unsure}.
struct TigerB1 {
  Dyadic p_btl;
  Dyadic p_btr;
  Dyadic p_bu;
};

// Distribution over the scripted P2's action classes {wait, commit}.
struct TigerB2 {
  Dyadic p_wait;
  Dyadic p_commit;
};

// Exact Bayesian filter over P1's growl history.
TigerB0 tiger_b0_filter(const P1History& history);

// Exact distribution over P1-belief categories given P2's channel. Growl
// outcomes P2 cannot hear are enumerated: after r silent-for-P2 listen rounds
// a far P2 assigns 0.5^r to "P1 is still unsure".
TigerB1 tiger_b1_exact(const P2History& history);

// Distribution of the scripted-optimal P2's wait/commit class as seen by P3.
// Scripted play: close P2 always commits (mirroring P1's known class), far P2
// always waits.
TigerB2 tiger_b2_exact(env::Proximity p3_observed_proximity, int round);

// Draws the nested-sample target for an order-l model. l must be the belief's
// order plus one: order-0 beliefs yield a K-leaf collection, order-1 beliefs
// a K-way tree of collections.
model::NestedBelief nested_oracle_sample(const TigerB0& belief, int k, int l,
                                         Rng& rng);
model::NestedBelief nested_oracle_sample(const TigerB1& belief, int k, int l,
                                         Rng& rng);

enum class GrowlCondition { kGrowl, kSilence };

// p(all K order-0 samples equal TL | condition): 0.5 given growl, 0.5^K given
// silence. The K-sample collection separates the two conditions; one sample
// cannot.
Dyadic joint_event_prob(GrowlCondition condition, int k);

}  // namespace rb::oracle

#endif  // RB_ORACLE_TIGER_BELIEFS_HPP_
