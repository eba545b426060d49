#ifndef RB_MODEL_POSTERIOR_HPP_
#define RB_MODEL_POSTERIOR_HPP_

#include <span>
#include <string>
#include <vector>

#include "rb/model/gaussian.hpp"

namespace rb::model {

// Order-invariant set encoder for posterior parameters: per-sample MLP
// embeddings are summed exactly (so any permutation of the samples gives a
// bit-identical result), gated by a sigmoid projection of the conditioning
// code, concatenated with the projection and mapped to (mu, sigma).
class PosteriorEncoder {
 public:
  PosteriorEncoder() = default;
  PosteriorEncoder(diff::ParamStore& params, const std::string& name,
                   int sample_dim, int cond_dim, int embed_dim,
                   const std::vector<int>& embed_sizes,
                   const std::vector<int>& head_sizes, int latent_dim,
                   double sigma_floor, Rng& rng);

  GaussianParams encode(diff::Tape& t, std::span<const diff::Var> samples,
                        diff::Var cond) const;

  int sample_dim() const { return sample_dim_; }

 private:
  int sample_dim_ = 0, cond_dim_ = 0, embed_dim_ = 0;
  diff::Mlp embed_;
  diff::ParamStore::Entry* cond_w_ = nullptr;
  diff::Mlp head_;
  diff::Linear mu_head_;
  diff::Linear sigma_head_;
  double sigma_floor_ = 1e-4;
};

}  // namespace rb::model

#endif  // RB_MODEL_POSTERIOR_HPP_
