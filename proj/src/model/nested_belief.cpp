#include "rb/model/nested_belief.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rb::model {

int NestedBelief::leaf_count() const {
  if (order == 0) return static_cast<int>(leaves.size());
  int n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

bool NestedBelief::shape_valid() const {
  if (order == 0)
    return children.empty() && static_cast<int>(leaves.size()) == branching;
  if (!leaves.empty()) return false;
  if (static_cast<int>(children.size()) != num_co_players * branching)
    return false;
  for (const auto& c : children) {
    if (c.order != order - 1 || c.branching != branching ||
        c.num_co_players != num_co_players || !c.shape_valid())
      return false;
  }
  return true;
}

long long NestedBelief::expected_leaf_count(int num_co_players, int branching,
                                            int order) {
  long long n = branching;
  for (int i = 0; i < order; ++i) n *= static_cast<long long>(num_co_players) * branching;
  return n;
}

namespace {

void write_state(std::ostream& out, const env::HandcraftedState& s) {
  if (s.game == env::GameId::kRws) {
    out << "rws";
    for (const auto& inv : s.inventories)
      for (int v : inv) out << ' ' << v;
  } else {
    out << (s.tiger_door == env::TigerDoor::kLeft ? "TL" : "TR");
  }
}

env::HandcraftedState read_state(std::istream& in, env::GameId game) {
  env::HandcraftedState s;
  s.game = game;
  std::string tok;
  in >> tok;
  if (game == env::GameId::kRws) {
    if (tok != "rws") throw std::runtime_error("nested: bad rws state token");
    for (auto& inv : s.inventories)
      for (int& v : inv) in >> v;
  } else {
    if (tok == "TL")
      s.tiger_door = env::TigerDoor::kLeft;
    else if (tok == "TR")
      s.tiger_door = env::TigerDoor::kRight;
    else
      throw std::runtime_error("nested: bad tiger state token " + tok);
  }
  return s;
}

void serialize_rec(std::ostream& out, const NestedBelief& b, int player,
                   int index) {
  out << "node " << b.order << ' ' << player << ' ' << index << ' '
      << b.branching << ' ' << b.num_co_players << '\n';
  if (b.order == 0) {
    for (const auto& s : b.leaves) {
      out << "leaf ";
      write_state(out, s);
      out << '\n';
    }
    return;
  }
  for (int p = 0; p < b.num_co_players; ++p)
    for (int k = 0; k < b.branching; ++k)
      serialize_rec(out, b.children[static_cast<std::size_t>(p * b.branching + k)],
                    p, k);
}

NestedBelief deserialize_rec(std::istream& in, env::GameId game) {
  std::string tok;
  if (!(in >> tok) || tok != "node")
    throw std::runtime_error("nested: expected node header");
  NestedBelief b;
  int player = 0, index = 0;
  in >> b.order >> player >> index >> b.branching >> b.num_co_players;
  if (!in) throw std::runtime_error("nested: truncated node header");
  if (b.order == 0) {
    for (int k = 0; k < b.branching; ++k) {
      if (!(in >> tok) || tok != "leaf")
        throw std::runtime_error("nested: expected leaf");
      b.leaves.push_back(read_state(in, game));
    }
    return b;
  }
  for (int i = 0; i < b.num_co_players * b.branching; ++i)
    b.children.push_back(deserialize_rec(in, game));
  return b;
}

}  // namespace

void serialize_nested(std::ostream& out, const NestedBelief& belief) {
  serialize_rec(out, belief, 0, 0);
}

NestedBelief deserialize_nested(std::istream& in, env::GameId game) {
  NestedBelief b = deserialize_rec(in, game);
  if (!b.shape_valid()) throw std::runtime_error("nested: invalid tree shape");
  return b;
}

}  // namespace rb::model
