#ifndef RB_TESTS_QUADRATURE_ORACLE_HPP_
#define RB_TESTS_QUADRATURE_ORACLE_HPP_

// Test-only oracles, independent of the implementation paths they check.

#include <cmath>
#include <vector>

namespace rb::testing {

// Gauss-Hermite nodes/weights for integral of exp(-x^2) f(x) dx (physicists'
// convention), via Newton iteration on the Hermite recurrence.
inline void gauss_hermite(int n, std::vector<double>& x,
                          std::vector<double>& w) {
  const double kEps = 1e-14;
  const double kPim4 = 0.7511255444649425;
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0, pp = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    for (int its = 0; its < 200; ++its) {
      double p1 = kPim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= kEps) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
}

// E_{z ~ N(mu, sigma)}[ f(z) ] with an n-point rule.
template <typename F>
double gauss_expectation(int n, double mu, double sigma, F&& f) {
  std::vector<double> x, w;
  gauss_hermite(n, x, w);
  const double kInvSqrtPi = 0.5641895835477563;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    acc += w[static_cast<std::size_t>(i)] *
           f(mu + sigma * std::sqrt(2.0) * x[static_cast<std::size_t>(i)]);
  return kInvSqrtPi * acc;
}

}  // namespace rb::testing

#endif  // RB_TESTS_QUADRATURE_ORACLE_HPP_
