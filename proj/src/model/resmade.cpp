#include "rb/model/resmade.hpp"

#include <cmath>
#include <stdexcept>

namespace rb::model {

using diff::Tape;
using diff::Var;

Var MaskedLinear::operator()(Tape& t, Var x) const {
  Var wm;
  if (!t.lookup(this, &wm)) {
    wm = t.mul(t.param(*w), t.input(mask));
    t.store(this, wm);
  }
  return t.add(t.matvec(wm, x, out, in), t.param(*b));
}

namespace {

MaskedLinear make_masked(diff::ParamStore& params, const std::string& name,
                         int in, int out, const std::vector<int>& in_deg,
                         const std::vector<int>& out_deg, bool strict,
                         Rng& rng) {
  MaskedLinear l;
  l.in = in;
  l.out = out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  l.w = &params.ensure(name + ".w", {out, in}, scale, rng);
  l.b = &params.ensure(name + ".b", {out, 1}, scale, rng);
  l.mask.assign(static_cast<std::size_t>(in * out), 0.0);
  for (int r = 0; r < out; ++r)
    for (int c = 0; c < in; ++c) {
      const bool connected = strict
                                 ? out_deg[static_cast<std::size_t>(r)] >
                                       in_deg[static_cast<std::size_t>(c)]
                                 : out_deg[static_cast<std::size_t>(r)] >=
                                       in_deg[static_cast<std::size_t>(c)];
      l.mask[static_cast<std::size_t>(r * in + c)] = connected ? 1.0 : 0.0;
    }
  return l;
}

}  // namespace

ResMade::ResMade(diff::ParamStore& params, const std::string& name,
                 StateSpec spec, int cond_dim, int width, int n_blocks,
                 Rng& rng)
    : spec_(std::move(spec)), cond_dim_(cond_dim), width_(width) {
  const int dims = spec_.dims();
  // Input one-hot block for dimension d carries degree d+1; hidden units get
  // degrees 0..dims-1 round-robin (degree 0 sees no input and works purely off
  // the conditioning); output logits for dimension d carry degree d+1 and
  // connect strictly below, so they depend on dimensions < d only.
  std::vector<int> input_deg;
  for (int d = 0; d < dims; ++d)
    input_deg.insert(input_deg.end(),
                     static_cast<std::size_t>(spec_.categories[static_cast<std::size_t>(d)]),
                     d + 1);
  std::vector<int> hidden_deg(static_cast<std::size_t>(width));
  for (int u = 0; u < width; ++u)
    hidden_deg[static_cast<std::size_t>(u)] = u % dims;
  std::vector<int> output_deg;
  for (int d = 0; d < dims; ++d)
    output_deg.insert(output_deg.end(),
                      static_cast<std::size_t>(spec_.categories[static_cast<std::size_t>(d)]),
                      d + 1);

  input_ = make_masked(params, name + ".in", spec_.onehot_size(), width,
                       input_deg, hidden_deg, false, rng);
  for (int blk = 0; blk < n_blocks; ++blk) {
    Block b;
    const std::string bn = name + ".blk" + std::to_string(blk);
    b.a = make_masked(params, bn + ".a", width, width, hidden_deg, hidden_deg,
                      false, rng);
    b.b = make_masked(params, bn + ".b", width, width, hidden_deg, hidden_deg,
                      false, rng);
    const double cscale = 1.0 / std::sqrt(static_cast<double>(cond_dim));
    b.cond_w = &params.ensure(bn + ".cond.w", {width, cond_dim}, cscale, rng);
    blocks_.push_back(b);
  }
  output_ = make_masked(params, name + ".out", width, spec_.onehot_size(),
                        hidden_deg, output_deg, true, rng);
}

int ResMade::logits_offset(int d) const {
  int off = 0;
  for (int i = 0; i < d; ++i) off += spec_.categories[static_cast<std::size_t>(i)];
  return off;
}

Var ResMade::logits(Tape& t, Var cond, const std::vector<int>& x,
                    int filled) const {
  if (cond.size() != cond_dim_)
    throw std::invalid_argument("ResMade: conditioning size mismatch");
  Var h = input_(t, t.input(onehot_encode(spec_, x, filled)));
  for (const auto& blk : blocks_) {
    Var u = blk.b(t, t.relu(blk.a(t, t.relu(h))));
    Var p = t.matvec(t.param(*blk.cond_w), cond, width_, cond_dim_);
    h = t.add(h, t.add(t.mul(u, p), p));
  }
  return output_(t, t.relu(h));
}

Var ResMade::log_prob(Tape& t, Var cond, const std::vector<int>& x) const {
  if (static_cast<int>(x.size()) != spec_.dims())
    throw std::invalid_argument("ResMade::log_prob: dimension mismatch");
  Var all = logits(t, cond, x, spec_.dims());
  Var total = t.input_scalar(0.0);
  for (int d = 0; d < spec_.dims(); ++d) {
    const int c = spec_.categories[static_cast<std::size_t>(d)];
    if (x[static_cast<std::size_t>(d)] < 0 || x[static_cast<std::size_t>(d)] >= c)
      throw std::invalid_argument("ResMade::log_prob: category out of range");
    Var ls = t.log_softmax(t.slice(all, logits_offset(d), c));
    total = t.add(total, t.pick(ls, x[static_cast<std::size_t>(d)]));
  }
  return total;
}

std::vector<std::vector<int>> ResMade::sample_many(Tape& t, Var cond, int count,
                                                   Rng& rng) const {
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(count));
  if (spec_.dims() == 1) {
    const int c = spec_.categories[0];
    Var all = logits(t, cond, {0}, 0);
    Var ls = t.log_softmax(t.slice(all, 0, c));
    std::vector<double> probs(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i) probs[static_cast<std::size_t>(i)] = std::exp(ls.value()[i]);
    for (int s = 0; s < count; ++s) {
      const double u = rng.uniform01();
      double acc = 0.0;
      int chosen = c - 1;
      for (int i = 0; i < c; ++i) {
        acc += probs[static_cast<std::size_t>(i)];
        if (u < acc) {
          chosen = i;
          break;
        }
      }
      out.push_back({chosen});
    }
    return out;
  }
  for (int s = 0; s < count; ++s) out.push_back(sample(t, cond, rng));
  return out;
}

std::vector<int> ResMade::sample(Tape& t, Var cond, Rng& rng) const {
  std::vector<int> x(static_cast<std::size_t>(spec_.dims()), 0);
  for (int d = 0; d < spec_.dims(); ++d) {
    Var all = logits(t, cond, x, d);
    const int c = spec_.categories[static_cast<std::size_t>(d)];
    Var ls = t.log_softmax(t.slice(all, logits_offset(d), c));
    auto lsv = ls.value();
    const double u = rng.uniform01();
    double acc = 0.0;
    int chosen = c - 1;
    for (int i = 0; i < c; ++i) {
      acc += std::exp(lsv[static_cast<std::size_t>(i)]);
      if (u < acc) {
        chosen = i;
        break;
      }
    }
    x[static_cast<std::size_t>(d)] = chosen;
  }
  return x;
}

}  // namespace rb::model
