#ifndef RB_EXACT_SUM_HPP_
#define RB_EXACT_SUM_HPP_

#include <vector>

namespace rb {

// Correctly rounded sum of a set of doubles (Shewchuk expansion arithmetic).
// The result depends only on the multiset of addends, never on their order,
// which makes set-style aggregations bit-exact under permutation.
class ExactAccumulator {
 public:
  void add(double x) {
    // grow-expansion: keep partials non-overlapping.
    std::size_t out = 0;
    for (std::size_t i = 0; i < partials_.size(); ++i) {
      double y = partials_[i];
      double hi = x + y;
      const double bv = hi - x;
      const double err = (x - (hi - bv)) + (y - bv);
      if (err != 0.0) partials_[out++] = err;
      x = hi;
    }
    partials_.resize(out);
    partials_.push_back(x);
  }

  // Non-overlapping partials are ordered by increasing magnitude; summing in
  // that order rounds the exact total once.
  double round() const {
    double s = 0.0;
    for (double p : partials_) s += p;
    return s;
  }

  void reset() { partials_.clear(); }

 private:
  std::vector<double> partials_;
};

}  // namespace rb

#endif  // RB_EXACT_SUM_HPP_
