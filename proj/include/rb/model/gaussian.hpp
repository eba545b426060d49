#ifndef RB_MODEL_GAUSSIAN_HPP_
#define RB_MODEL_GAUSSIAN_HPP_

#include <string>
#include <vector>

#include "rb/diff/nn.hpp"
#include "rb/rng.hpp"

namespace rb::model {

struct GaussianParams {
  diff::Var mu;
  diff::Var sigma;
};

// Relu trunk with diagonal Gaussian heads; sigma = softplus(raw) + floor.
struct GaussianNet {
  diff::Mlp trunk;
  diff::Linear mu_head;
  diff::Linear sigma_head;
  double sigma_floor = 1e-4;

  GaussianParams operator()(diff::Tape& t, diff::Var in) const {
    diff::Var h = trunk(t, in, diff::Activation::kRelu);
    return {mu_head(t, h),
            t.add_scalar(t.softplus(sigma_head(t, h)), sigma_floor)};
  }
};

GaussianNet make_gaussian_net(diff::ParamStore& params, const std::string& name,
                              int in, const std::vector<int>& trunk_sizes,
                              int out, double sigma_floor, Rng& rng);

// z = mu + sigma * eps. With check_sigma the op rejects sigma <= 0; tests may
// bypass the check to probe the identity at sigma == 0.
diff::Var reparam(diff::Tape& t, diff::Var mu, diff::Var sigma, diff::Var eps,
                  bool check_sigma = true);

// Draws eps ~ N(0, I) and returns the reparameterized sample.
diff::Var sample_gaussian(diff::Tape& t, const GaussianParams& p, Rng& rng);

}  // namespace rb::model

#endif  // RB_MODEL_GAUSSIAN_HPP_
