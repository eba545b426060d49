#ifndef RB_DIFF_TAPE_HPP_
#define RB_DIFF_TAPE_HPP_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "rb/diff/param_store.hpp"

namespace rb::diff {

class Tape;

// Handle to a node on a tape. Cheap to copy; only valid until Tape::clear().
struct Var {
  Tape* tape = nullptr;
  int idx = -1;
  bool valid() const { return tape != nullptr && idx >= 0; }
  int size() const;
  double scalar() const;           // value of a 1-element node
  std::span<const double> value() const;
};

// Reverse-mode tape. Forward values are computed eagerly at node creation;
// backward() sweeps the nodes once in reverse order. Value and gradient
// storage live in flat arenas so clear() keeps capacity across reuses.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  void clear();

  // --- leaves ---
  Var input(std::span<const double> data);
  Var input_scalar(double x);
  Var fill(int n, double x);
  // Trainable leaf; memoized per tape so repeated use accumulates gradient.
  Var param(ParamStore::Entry& entry);

  // --- elementwise ---
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var div(Var a, Var b);
  Var add_scalar(Var a, double s);
  Var mul_scalar(Var a, double s);
  Var neg(Var a) { return mul_scalar(a, -1.0); }
  Var relu(Var a);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var softplus(Var a);
  Var exp(Var a);
  Var log(Var a);

  // --- linear algebra / shaping ---
  // m is rows*cols row-major, v has length cols; result has length rows.
  Var matvec(Var m, Var v, int rows, int cols);
  Var concat(Var a, Var b);
  Var concat(std::span<const Var> parts);
  Var slice(Var a, int lo, int len);

  // --- reductions ---
  Var sum(Var a);   // fixed left-to-right accumulation
  Var mean(Var a);
  Var dot(Var a, Var b);
  Var pick(Var a, int j);
  // Correctly rounded multiset sum of same-length vectors: bit-exact under
  // permutation of the parts.
  Var sum_set(std::span<const Var> parts);

  // --- distributions ---
  Var log_softmax(Var a);

  // --- control ---
  Var stop_gradient(Var a);

  // Per-tape node memoization keyed by caller-owned addresses. Used to reuse
  // derived constants (e.g. masked weights) across many calls on one tape.
  bool lookup(const void* key, Var* out) const {
    auto it = memo_.find(key);
    if (it == memo_.end()) return false;
    *out = Var{const_cast<Tape*>(this), it->second};
    return true;
  }
  void store(const void* key, Var v) { memo_[key] = v.idx; }

  // Seeds d(out)=1 and back-propagates. out must be scalar and finite.
  void backward(Var out);

  std::span<const double> value(Var v) const;
  std::span<const double> grad(Var v) const;

  // Adds this tape's parameter gradients into `grads` (creating zero-filled
  // entries as needed). Only meaningful after backward().
  void export_param_grads(GradMap& grads) const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    kInput, kParam, kFill,
    kAdd, kSub, kMul, kDiv, kAddScalar, kMulScalar,
    kRelu, kSigmoid, kTanh, kSoftplus, kExp, kLog,
    kMatVec, kConcat2, kSlice,
    kSum, kMean, kDot, kPick, kSumSet,
    kLogSoftmax, kStopGrad,
  };

  struct Node {
    Op op;
    int a = -1, b = -1;   // parent indices
    int off = 0, len = 0; // span in the value/grad arenas
    int i0 = 0, i1 = 0;   // op-specific (rows/cols, slice lo, pick index, ...)
    double s = 0.0;       // op-specific scalar
  };

  int alloc_node(Op op, int len, int a, int b);
  double* data(int idx) { return values_.data() + nodes_[idx].off; }
  const double* data(int idx) const { return values_.data() + nodes_[idx].off; }
  double* gdata(int idx) { return grads_.data() + nodes_[idx].off; }
  void backward_node(int idx);

  std::vector<Node> nodes_;
  std::vector<double> values_;
  std::vector<double> grads_;
  std::vector<int> extra_;  // parent lists for kSumSet / kConcat chains
  std::unordered_map<const ParamStore::Entry*, int> param_nodes_;
  std::vector<std::pair<const ParamStore::Entry*, int>> param_list_;
  std::unordered_map<const void*, int> memo_;
};

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);  // elementwise

}  // namespace rb::diff

#endif  // RB_DIFF_TAPE_HPP_
