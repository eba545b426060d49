#ifndef RB_MODEL_NESTED_BELIEF_HPP_
#define RB_MODEL_NESTED_BELIEF_HPP_

#include <iosfwd>
#include <vector>

#include "rb/env/pomg.hpp"

namespace rb::model {

// Recursive K-way sample representation of a belief. A node of order m >= 1
// fans out into (n-1)*K children of order m-1 (co-player major); a node of
// order 0 holds a collection of K handcrafted states. Sibling collections are
// exchangeable: nothing may depend on their order.
struct NestedBelief {
  int order = 0;
  int branching = 1;      // K
  int num_co_players = 1; // n-1
  std::vector<env::HandcraftedState> leaves;  // order == 0 only
  std::vector<NestedBelief> children;         // order >= 1 only

  int leaf_count() const;
  bool shape_valid() const;

  // ((n-1) * K)^l * K
  static long long expected_leaf_count(int num_co_players, int branching,
                                       int order);
};

// Depth-first text serialization with (level, player, collection-index)
// headers. Used for training targets and test fixtures.
void serialize_nested(std::ostream& out, const NestedBelief& belief);
NestedBelief deserialize_nested(std::istream& in, env::GameId game);

}  // namespace rb::model

#endif  // RB_MODEL_NESTED_BELIEF_HPP_
