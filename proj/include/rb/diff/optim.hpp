#ifndef RB_DIFF_OPTIM_HPP_
#define RB_DIFF_OPTIM_HPP_

#include <functional>

#include "rb/diff/param_store.hpp"
#include "rb/diff/tape.hpp"

namespace rb::diff {

struct RmsPropOptions {
  double lr = 1e-3;
  double decay = 0.99;
  double momentum = 0.0;
  double epsilon = 1e-8;
};

// In-place RMSProp step. Entries absent from `grads` keep their values but
// still decay their second-moment slot (a zero gradient is a gradient).
void rmsprop_update(ParamStore& params, const GradMap& grads,
                    const RmsPropOptions& opts);

// Max relative error between reverse-mode and central-difference gradients of
// a scalar function of the parameters. The builder must be deterministic.
double grad_check(ParamStore& params,
                  const std::function<Var(Tape&)>& build_scalar,
                  double epsilon = 1e-4);

}  // namespace rb::diff

#endif  // RB_DIFF_OPTIM_HPP_
