#include "rb/model/posterior.hpp"

#include <cmath>
#include <stdexcept>

namespace rb::model {

using diff::Tape;
using diff::Var;

PosteriorEncoder::PosteriorEncoder(diff::ParamStore& params,
                                   const std::string& name, int sample_dim,
                                   int cond_dim, int embed_dim,
                                   const std::vector<int>& embed_sizes,
                                   const std::vector<int>& head_sizes,
                                   int latent_dim, double sigma_floor, Rng& rng)
    : sample_dim_(sample_dim), cond_dim_(cond_dim), embed_dim_(embed_dim),
      sigma_floor_(sigma_floor) {
  std::vector<int> es = embed_sizes;
  es.push_back(embed_dim);
  embed_ = make_mlp(params, name + ".embed", sample_dim, es, rng);
  const double cscale = 1.0 / std::sqrt(static_cast<double>(cond_dim));
  cond_w_ = &params.ensure(name + ".cond.w", {embed_dim, cond_dim}, cscale, rng);
  head_ = make_mlp(params, name + ".head", 2 * embed_dim, head_sizes, rng);
  const int head_out = head_sizes.empty() ? 2 * embed_dim : head_sizes.back();
  mu_head_ = make_linear(params, name + ".mu", head_out, latent_dim, rng);
  sigma_head_ = make_linear(params, name + ".sigma", head_out, latent_dim, rng);
}

GaussianParams PosteriorEncoder::encode(Tape& t,
                                        std::span<const Var> samples,
                                        Var cond) const {
  if (samples.empty())
    throw std::invalid_argument("posterior_encode: empty collection");
  if (cond.size() != cond_dim_)
    throw std::invalid_argument("posterior_encode: conditioning size mismatch");
  std::vector<Var> embeddings;
  embeddings.reserve(samples.size());
  for (Var s : samples) {
    if (s.size() != sample_dim_)
      throw std::invalid_argument("posterior_encode: sample size mismatch");
    embeddings.push_back(embed_(t, s, diff::Activation::kRelu));
  }
  Var m = t.sum_set(embeddings);
  Var p = t.matvec(t.param(*cond_w_), cond, embed_dim_, cond_dim_);
  Var gated = t.mul(m, t.sigmoid(p));
  Var h = head_(t, t.concat(gated, p), diff::Activation::kRelu);
  return {mu_head_(t, h),
          t.add_scalar(t.softplus(sigma_head_(t, h)), sigma_floor_)};
}

}  // namespace rb::model
