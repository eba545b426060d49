#include "rb/diff/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rb::diff {

void rmsprop_update(ParamStore& params, const GradMap& grads,
                    const RmsPropOptions& opts) {
  for (const auto& [name, g] : grads) {
    for (double v : g)
      if (!std::isfinite(v))
        throw std::runtime_error("rmsprop_update: non-finite gradient in " +
                                 name);
  }
  for (auto& [name, e] : params) {
    auto it = grads.find(name);
    const std::vector<double>* g = it == grads.end() ? nullptr : &it->second;
    if (g != nullptr && g->size() != e.value.size())
      throw std::invalid_argument("rmsprop_update: gradient size mismatch for " +
                                  name);
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      const double gi = g == nullptr ? 0.0 : (*g)[i];
      e.second_moment[i] =
          opts.decay * e.second_moment[i] + (1.0 - opts.decay) * gi * gi;
      const double step =
          opts.lr * gi / std::sqrt(e.second_moment[i] + opts.epsilon);
      e.momentum[i] = opts.momentum * e.momentum[i] + step;
      e.value[i] -= e.momentum[i];
    }
  }
}

double grad_check(ParamStore& params,
                  const std::function<Var(Tape&)>& build_scalar,
                  double epsilon) {
  GradMap analytic;
  {
    Tape t;
    Var out = build_scalar(t);
    t.backward(out);
    t.export_param_grads(analytic);
  }
  double max_rel = 0.0;
  for (auto& [name, e] : params) {
    const auto it = analytic.find(name);
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      const double orig = e.value[i];
      e.value[i] = orig + epsilon;
      double fp;
      {
        Tape t;
        fp = build_scalar(t).scalar();
      }
      e.value[i] = orig - epsilon;
      double fm;
      {
        Tape t;
        fm = build_scalar(t).scalar();
      }
      e.value[i] = orig;
      const double numeric = (fp - fm) / (2.0 * epsilon);
      const double ana = it == analytic.end() ? 0.0 : it->second[i];
      const double rel = std::abs(ana - numeric) /
                         std::max({std::abs(ana), std::abs(numeric), 1e-8});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace rb::diff
