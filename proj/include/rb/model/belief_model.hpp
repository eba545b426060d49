#ifndef RB_MODEL_BELIEF_MODEL_HPP_
#define RB_MODEL_BELIEF_MODEL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "rb/model/nested_belief.hpp"
#include "rb/model/posterior.hpp"
#include "rb/model/resmade.hpp"

namespace rb::model {

struct BeliefModelConfig {
  env::GameId game = env::GameId::kTiger1;
  int code_dim = 128;
  int max_order = 1;       // highest modeled order (0 = state model only)
  int latent_dim = 8;      // 8 for Tiger, 64 for RWS
  int num_co_players = 1;  // n - 1
  int made_width = 128;
  int made_blocks = 4;
  int embed_dim = 64;
  std::vector<int> embed_sizes = {64, 64};
  std::vector<int> head_sizes = {64, 64};
  std::vector<int> prior_sizes = {64, 64};
  double sigma_floor = 1e-4;
  int target_player = 1;  // whose private slice the state model predicts
};

// The neural recursive belief models of one agent: the order-0 autoregressive
// state model plus, per order l >= 1, a hierarchy of per-co-player latent
// priors, a leaf decoder and bottom-up posterior encoders. All components
// condition on the agent's belief code.
class GenerativeBeliefModel {
 public:
  GenerativeBeliefModel() = default;
  GenerativeBeliefModel(diff::ParamStore& params, const std::string& prefix,
                        BeliefModelConfig cfg, Rng& rng);

  const BeliefModelConfig& config() const { return cfg_; }
  const StateSpec& state_spec() const { return spec_; }

  // --- order 0 ---
  diff::Var b0_log_prob(diff::Tape& t, diff::Var code,
                        const std::vector<int>& state) const;
  std::vector<int> b0_sample(diff::Tape& t, diff::Var code, Rng& rng) const;
  // K independent draws as an order-0 collection.
  NestedBelief b0_sample_collection(diff::Tape& t, diff::Var code, int k,
                                    Rng& rng) const;

  // --- order l >= 1 ---
  // Prior over Z^level for one co-player in the player chain. `parent` is the
  // sampled z^{level+1} (empty at the top level); `prev_players` are the
  // already-sampled same-level latents of earlier players.
  GaussianParams prior(diff::Tape& t, int order, int level, int player,
                       std::span<const diff::Var> prev_players,
                       std::optional<diff::Var> parent, diff::Var code) const;

  // q(Z^1 | leaf collection, code): samples are one-hot state encodings.
  GaussianParams posterior_leaf(diff::Tape& t, int order,
                                std::span<const diff::Var> state_onehots,
                                diff::Var code) const;
  // Convenience entry matching the spec operation: encodes the collection of
  // handcrafted-state category vectors directly.
  GaussianParams posterior_encode(diff::Tape& t, int order,
                                  const std::vector<std::vector<int>>& states,
                                  diff::Var code) const;

  // q(Z^level | child z^{level-1} samples, code) for level >= 2.
  GaussianParams posterior_latent(diff::Tape& t, int order, int level,
                                  std::span<const diff::Var> child_latents,
                                  diff::Var code) const;

  // log p(state | z1, code) under the order-l leaf decoder.
  diff::Var leaf_log_prob(diff::Tape& t, int order, diff::Var z1,
                          diff::Var code, const std::vector<int>& state) const;
  // Sum of leaf log-probs for one collection; single-dimension decoders share
  // one logits pass across the K leaves.
  diff::Var leaf_collection_log_prob(
      diff::Tape& t, int order, diff::Var z1, diff::Var code,
      const std::vector<std::vector<int>>& states) const;
  std::vector<int> leaf_sample(diff::Tape& t, int order, diff::Var z1,
                               diff::Var code, Rng& rng) const;
  std::vector<std::vector<int>> leaf_sample_many(diff::Tape& t, int order,
                                                 diff::Var z1, diff::Var code,
                                                 int count, Rng& rng) const;

  // Recursive ancestral sampling of the order-l nested representation:
  // K per-co-player latent draws per node, K state draws per z^1.
  NestedBelief generate_nested(diff::Tape& t, diff::Var code, int k, int l,
                               Rng& rng) const;

  diff::Var onehot_var(diff::Tape& t, const std::vector<int>& state) const;

 private:
  struct Hierarchy {
    ResMade leaf_decoder;  // cond = [z1, code]
    // player-chain priors indexed [level-1][player]
    std::vector<std::vector<GaussianNet>> priors;
    PosteriorEncoder leaf_posterior;
    std::vector<PosteriorEncoder> latent_posteriors;  // level 2.. -> index l-2
  };

  const Hierarchy& hierarchy(int order) const;

  BeliefModelConfig cfg_;
  StateSpec spec_;
  ResMade order0_;
  std::vector<Hierarchy> hierarchies_;  // index order-1
};

}  // namespace rb::model

#endif  // RB_MODEL_BELIEF_MODEL_HPP_
