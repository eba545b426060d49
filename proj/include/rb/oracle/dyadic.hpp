#ifndef RB_ORACLE_DYADIC_HPP_
#define RB_ORACLE_DYADIC_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rb::oracle {

// Exact dyadic rational num / 2^exp. All reachable Tiger probabilities are
// dyadic, so the oracles stay exact and convert to double at the boundary.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr explicit Dyadic(std::int64_t integer) : num_(integer), exp_(0) {}
  constexpr Dyadic(std::int64_t num, int exp) : num_(num), exp_(exp) {
    normalize();
  }

  static constexpr Dyadic half_pow(int k) {  // (1/2)^k
    return Dyadic(1, k);
  }

  constexpr std::int64_t numerator() const { return num_; }
  constexpr int exponent() const { return exp_; }

  constexpr Dyadic operator+(Dyadic o) const {
    const int e = exp_ > o.exp_ ? exp_ : o.exp_;
    return Dyadic((num_ << (e - exp_)) + (o.num_ << (e - o.exp_)), e);
  }
  constexpr Dyadic operator-(Dyadic o) const {
    const int e = exp_ > o.exp_ ? exp_ : o.exp_;
    return Dyadic((num_ << (e - exp_)) - (o.num_ << (e - o.exp_)), e);
  }
  constexpr Dyadic operator*(Dyadic o) const {
    return Dyadic(num_ * o.num_, exp_ + o.exp_);
  }
  constexpr bool operator==(const Dyadic&) const = default;

  double to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

 private:
  constexpr void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    while (exp_ > 0 && (num_ & 1) == 0) {
      num_ >>= 1;
      --exp_;
    }
  }

  std::int64_t num_ = 0;
  int exp_ = 0;
};

}  // namespace rb::oracle

#endif  // RB_ORACLE_DYADIC_HPP_
