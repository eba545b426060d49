#include "rb/model/belief_model.hpp"

#include <stdexcept>

namespace rb::model {

using diff::Tape;
using diff::Var;

GenerativeBeliefModel::GenerativeBeliefModel(diff::ParamStore& params,
                                             const std::string& prefix,
                                             BeliefModelConfig cfg, Rng& rng)
    : cfg_(std::move(cfg)), spec_(belief_state_spec(cfg_.game)) {
  order0_ = ResMade(params, prefix + ".b0", spec_, cfg_.code_dim,
                    cfg_.made_width, cfg_.made_blocks, rng);
  for (int l = 1; l <= cfg_.max_order; ++l) {
    Hierarchy h;
    const std::string hp = prefix + ".l" + std::to_string(l);
    h.leaf_decoder = ResMade(params, hp + ".dec", spec_,
                             cfg_.latent_dim + cfg_.code_dim, cfg_.made_width,
                             cfg_.made_blocks, rng);
    for (int level = 1; level <= l; ++level) {
      std::vector<GaussianNet> chain;
      for (int q = 0; q < cfg_.num_co_players; ++q) {
        const int in = q * cfg_.latent_dim +
                       (level < l ? cfg_.latent_dim : 0) + cfg_.code_dim;
        chain.push_back(make_gaussian_net(
            params, hp + ".prior" + std::to_string(level) + "p" + std::to_string(q),
            in, cfg_.prior_sizes, cfg_.latent_dim, cfg_.sigma_floor, rng));
      }
      h.priors.push_back(std::move(chain));
    }
    h.leaf_posterior = PosteriorEncoder(
        params, hp + ".q1", spec_.onehot_size(), cfg_.code_dim, cfg_.embed_dim,
        cfg_.embed_sizes, cfg_.head_sizes, cfg_.latent_dim, cfg_.sigma_floor,
        rng);
    for (int level = 2; level <= l; ++level)
      h.latent_posteriors.push_back(PosteriorEncoder(
          params, hp + ".q" + std::to_string(level), cfg_.latent_dim,
          cfg_.code_dim, cfg_.embed_dim, cfg_.embed_sizes, cfg_.head_sizes,
          cfg_.latent_dim, cfg_.sigma_floor, rng));
    hierarchies_.push_back(std::move(h));
  }
}

const GenerativeBeliefModel::Hierarchy& GenerativeBeliefModel::hierarchy(
    int order) const {
  if (order < 1 || order > static_cast<int>(hierarchies_.size()))
    throw std::invalid_argument("belief model: no hierarchy of order " +
                                std::to_string(order));
  return hierarchies_[static_cast<std::size_t>(order - 1)];
}

Var GenerativeBeliefModel::b0_log_prob(Tape& t, Var code,
                                       const std::vector<int>& state) const {
  return order0_.log_prob(t, code, state);
}

std::vector<int> GenerativeBeliefModel::b0_sample(Tape& t, Var code,
                                                  Rng& rng) const {
  return order0_.sample(t, code, rng);
}

NestedBelief GenerativeBeliefModel::b0_sample_collection(Tape& t, Var code,
                                                         int k,
                                                         Rng& rng) const {
  if (k < 1) throw std::invalid_argument("b0_sample_collection: K must be >= 1");
  NestedBelief b;
  b.order = 0;
  b.branching = k;
  b.num_co_players = cfg_.num_co_players;
  for (auto& s : order0_.sample_many(t, code, k, rng))
    b.leaves.push_back(target_to_state(cfg_.game, s, cfg_.target_player));
  return b;
}

GaussianParams GenerativeBeliefModel::prior(Tape& t, int order, int level,
                                            int player,
                                            std::span<const Var> prev_players,
                                            std::optional<Var> parent,
                                            Var code) const {
  const Hierarchy& h = hierarchy(order);
  if (level < 1 || level > order)
    throw std::invalid_argument("belief model prior: bad level");
  if (player < 0 || player >= cfg_.num_co_players)
    throw std::invalid_argument("belief model prior: bad player");
  if (static_cast<int>(prev_players.size()) != player)
    throw std::invalid_argument("belief model prior: need one latent per earlier player");
  const bool has_parent = level < order;
  if (has_parent != parent.has_value())
    throw std::invalid_argument("belief model prior: parent latent mismatch");
  std::vector<Var> parts(prev_players.begin(), prev_players.end());
  if (parent.has_value()) parts.push_back(*parent);
  parts.push_back(code);
  Var in = parts.size() == 1 ? parts[0] : t.concat(parts);
  return h.priors[static_cast<std::size_t>(level - 1)]
                 [static_cast<std::size_t>(player)](t, in);
}

GaussianParams GenerativeBeliefModel::posterior_leaf(
    Tape& t, int order, std::span<const Var> state_onehots, Var code) const {
  return hierarchy(order).leaf_posterior.encode(t, state_onehots, code);
}

GaussianParams GenerativeBeliefModel::posterior_encode(
    Tape& t, int order, const std::vector<std::vector<int>>& states,
    Var code) const {
  std::vector<Var> onehots;
  onehots.reserve(states.size());
  for (const auto& s : states) onehots.push_back(onehot_var(t, s));
  return posterior_leaf(t, order, onehots, code);
}

GaussianParams GenerativeBeliefModel::posterior_latent(
    Tape& t, int order, int level, std::span<const Var> child_latents,
    Var code) const {
  const Hierarchy& h = hierarchy(order);
  if (level < 2 || level > order)
    throw std::invalid_argument("posterior_latent: bad level");
  return h.latent_posteriors[static_cast<std::size_t>(level - 2)].encode(
      t, child_latents, code);
}

Var GenerativeBeliefModel::leaf_log_prob(Tape& t, int order, Var z1, Var code,
                                         const std::vector<int>& state) const {
  return hierarchy(order).leaf_decoder.log_prob(t, t.concat(z1, code), state);
}

std::vector<int> GenerativeBeliefModel::leaf_sample(Tape& t, int order, Var z1,
                                                    Var code, Rng& rng) const {
  return hierarchy(order).leaf_decoder.sample(t, t.concat(z1, code), rng);
}

Var GenerativeBeliefModel::leaf_collection_log_prob(
    Tape& t, int order, Var z1, Var code,
    const std::vector<std::vector<int>>& states) const {
  const ResMade& dec = hierarchy(order).leaf_decoder;
  Var cond = t.concat(z1, code);
  if (spec_.dims() == 1) {
    const int c = spec_.categories[0];
    Var ls = t.log_softmax(t.slice(dec.logits(t, cond, {0}, 0), 0, c));
    Var total = t.input_scalar(0.0);
    for (const auto& s : states) {
      if (s.size() != 1 || s[0] < 0 || s[0] >= c)
        throw std::invalid_argument("leaf_collection_log_prob: bad category");
      total = t.add(total, t.pick(ls, s[0]));
    }
    return total;
  }
  Var total = t.input_scalar(0.0);
  for (const auto& s : states) total = t.add(total, dec.log_prob(t, cond, s));
  return total;
}

std::vector<std::vector<int>> GenerativeBeliefModel::leaf_sample_many(
    Tape& t, int order, Var z1, Var code, int count, Rng& rng) const {
  return hierarchy(order).leaf_decoder.sample_many(t, t.concat(z1, code), count,
                                                   rng);
}

Var GenerativeBeliefModel::onehot_var(Tape& t,
                                      const std::vector<int>& state) const {
  return t.input(onehot_encode(spec_, state, spec_.dims()));
}

namespace {

struct GenContext {
  const GenerativeBeliefModel* model;
  Tape* tape;
  Var code;
  int k;
  int order;
  Rng* rng;
};

NestedBelief gen_rec(const GenContext& ctx, int node_level,
                     std::optional<Var> my_z);

// Draw one tuple of per-co-player latents at `level` conditioned on the
// parent latent, then expand each player's node.
void gen_children(const GenContext& ctx, int level, std::optional<Var> parent,
                  std::vector<std::vector<NestedBelief>>* per_player) {
  std::vector<Var> chain;
  const auto& cfg = ctx.model->config();
  for (int q = 0; q < cfg.num_co_players; ++q) {
    GaussianParams p = ctx.model->prior(*ctx.tape, ctx.order, level, q,
                                        std::span<const Var>(chain), parent,
                                        ctx.code);
    Var z = sample_gaussian(*ctx.tape, p, *ctx.rng);
    chain.push_back(z);
    (*per_player)[static_cast<std::size_t>(q)].push_back(
        gen_rec(ctx, level - 1, z));
  }
}

NestedBelief gen_rec(const GenContext& ctx, int node_level,
                     std::optional<Var> my_z) {
  const auto& cfg = ctx.model->config();
  NestedBelief node;
  node.order = node_level;
  node.branching = ctx.k;
  node.num_co_players = cfg.num_co_players;
  if (node_level == 0) {
    for (auto& s : ctx.model->leaf_sample_many(*ctx.tape, ctx.order, *my_z,
                                               ctx.code, ctx.k, *ctx.rng))
      node.leaves.push_back(target_to_state(cfg.game, s, cfg.target_player));
    return node;
  }
  std::vector<std::vector<NestedBelief>> per_player(
      static_cast<std::size_t>(cfg.num_co_players));
  for (int draw = 0; draw < ctx.k; ++draw)
    gen_children(ctx, node_level, my_z, &per_player);
  for (auto& group : per_player)
    for (auto& child : group) node.children.push_back(std::move(child));
  return node;
}

}  // namespace

NestedBelief GenerativeBeliefModel::generate_nested(Tape& t, Var code, int k,
                                                    int l, Rng& rng) const {
  if (l < 1) throw std::invalid_argument("generate_nested: l must be >= 1");
  if (k < 1) throw std::invalid_argument("generate_nested: K must be >= 1");
  (void)hierarchy(l);
  GenContext ctx{this, &t, code, k, l, &rng};
  return gen_rec(ctx, l, std::nullopt);
}

}  // namespace rb::model
