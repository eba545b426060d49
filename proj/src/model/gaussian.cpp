#include "rb/model/gaussian.hpp"

#include <stdexcept>

namespace rb::model {

GaussianNet make_gaussian_net(diff::ParamStore& params, const std::string& name,
                              int in, const std::vector<int>& trunk_sizes,
                              int out, double sigma_floor, Rng& rng) {
  GaussianNet net;
  net.trunk = make_mlp(params, name + ".trunk", in, trunk_sizes, rng);
  const int trunk_out = trunk_sizes.empty() ? in : trunk_sizes.back();
  net.mu_head = make_linear(params, name + ".mu", trunk_out, out, rng);
  net.sigma_head = make_linear(params, name + ".sigma", trunk_out, out, rng);
  net.sigma_floor = sigma_floor;
  return net;
}

diff::Var reparam(diff::Tape& t, diff::Var mu, diff::Var sigma, diff::Var eps,
                  bool check_sigma) {
  if (mu.size() != sigma.size() || mu.size() != eps.size())
    throw std::invalid_argument("reparam: size mismatch");
  if (check_sigma) {
    for (double s : sigma.value())
      if (!(s > 0.0)) throw std::runtime_error("reparam: sigma must be > 0");
  }
  return t.add(mu, t.mul(sigma, eps));
}

diff::Var sample_gaussian(diff::Tape& t, const GaussianParams& p, Rng& rng) {
  std::vector<double> eps(static_cast<std::size_t>(p.mu.size()));
  for (double& e : eps) e = rng.normal();
  return reparam(t, p.mu, p.sigma, t.input(eps));
}

}  // namespace rb::model
