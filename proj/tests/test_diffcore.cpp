#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "rb/diff/checkpoint.hpp"
#include "rb/diff/nn.hpp"
#include "rb/diff/optim.hpp"
#include "rb/diff/tape.hpp"
#include "rb/exact_sum.hpp"
#include "rb/rng.hpp"

using namespace rb;
using namespace rb::diff;

TEST_CASE("dense_forward identity weights passes input through") {
  Rng rng(1);
  ParamStore ps;
  Linear l = make_linear(ps, "l", 3, 3, rng);
  l.w->value = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  l.b->value = {0, 0, 0};
  Tape t;
  std::vector<double> in = {0.3, -1.2, 2.5};
  Var y = dense_forward(t, l, t.input(in), Activation::kIdentity);
  for (int i = 0; i < 3; ++i) CHECK(y.value()[i] == in[i]);
}

TEST_CASE("dense_forward zero weights returns bias") {
  Rng rng(1);
  ParamStore ps;
  Linear l = make_linear(ps, "l", 2, 3, rng);
  l.w->value = {0, 0, 0, 0, 0, 0};
  l.b->value = {0.5, -0.25, 4.0};
  Tape t;
  std::vector<double> in = {7.0, -3.0};
  Var y = dense_forward(t, l, t.input(in), Activation::kIdentity);
  CHECK(y.value()[0] == 0.5);
  CHECK(y.value()[1] == -0.25);
  CHECK(y.value()[2] == 4.0);
}

TEST_CASE("dense_forward random 4->3 matches hand-computed product") {
  Rng rng(42);
  ParamStore ps;
  Linear l = make_linear(ps, "l", 4, 3, rng);
  std::vector<double> in = {0.1, -0.7, 1.3, 0.4};
  Tape t;
  Var y = dense_forward(t, l, t.input(in), Activation::kIdentity);
  for (int r = 0; r < 3; ++r) {
    double expect = l.b->value[static_cast<std::size_t>(r)];
    for (int c = 0; c < 4; ++c)
      expect += l.w->value[static_cast<std::size_t>(r * 4 + c)] *
                in[static_cast<std::size_t>(c)];
    CHECK(std::abs(y.value()[r] - expect) < 1e-12);
  }
}

TEST_CASE("dense_forward rejects shape mismatch") {
  Rng rng(1);
  ParamStore ps;
  Linear l = make_linear(ps, "l", 4, 3, rng);
  Tape t;
  std::vector<double> in = {1.0, 2.0};
  CHECK_THROWS(dense_forward(t, l, t.input(in), Activation::kRelu));
}

namespace {

// Independent scalar re-implementation of the GRU step used as an oracle.
std::vector<double> gru_oracle(const GruCell& c,
                               const std::vector<double>& h,
                               const std::vector<double>& x) {
  const int H = c.hidden;
  const int I = c.wr.in;
  auto lin = [&](const Linear& l, const std::vector<double>& v, int in_dim,
                 int i) {
    double acc = l.b->value[static_cast<std::size_t>(i)];
    for (int j = 0; j < in_dim; ++j)
      acc += l.w->value[static_cast<std::size_t>(i * in_dim + j)] *
             v[static_cast<std::size_t>(j)];
    return acc;
  };
  std::vector<double> out(static_cast<std::size_t>(H));
  for (int i = 0; i < H; ++i) {
    const double r = 1.0 / (1.0 + std::exp(-(lin(c.wr, x, I, i) + lin(c.ur, h, H, i))));
    const double u = 1.0 / (1.0 + std::exp(-(lin(c.wu, x, I, i) + lin(c.uu, h, H, i))));
    const double n = std::tanh(lin(c.wn, x, I, i) + r * lin(c.un, h, H, i));
    out[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(i)] +
                                       u * (n - h[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

TEST_CASE("gru_step gate semantics") {
  Rng rng(7);
  ParamStore ps;
  GruCell c = make_gru(ps, "g", 2, 3, rng);
  std::vector<double> h = {0.3, -0.2, 0.9};
  std::vector<double> x = {1.0, -1.0};

  SUBCASE("update gate forced to 0 keeps hidden") {
    for (auto& v : c.wu.w->value) v = 0.0;
    for (auto& v : c.uu.w->value) v = 0.0;
    for (auto& v : c.wu.b->value) v = -1e9;
    for (auto& v : c.uu.b->value) v = 0.0;
    Tape t;
    Var out = gru_step(t, c, t.input(h), t.input(x));
    for (int i = 0; i < 3; ++i) CHECK(out.value()[i] == h[static_cast<std::size_t>(i)]);
  }
  SUBCASE("update gate forced to 1 returns candidate") {
    for (auto& v : c.wu.w->value) v = 0.0;
    for (auto& v : c.uu.w->value) v = 0.0;
    for (auto& v : c.wu.b->value) v = 1e9;
    for (auto& v : c.uu.b->value) v = 0.0;
    Tape t;
    Var out = gru_step(t, c, t.input(h), t.input(x));
    auto expect = gru_oracle(c, h, x);
    // with u == 1 the oracle and the tape both compute h + (n - h)
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(out.value()[i] - expect[static_cast<std::size_t>(i)]) < 1e-12);
  }
}

TEST_CASE("gru_step matches scalar oracle") {
  Rng rng(99);
  ParamStore ps;
  GruCell c = make_gru(ps, "g", 3, 5, rng);
  std::vector<double> h = {0.1, -0.4, 0.2, 0.0, 0.8};
  std::vector<double> x = {0.5, -0.6, 1.1};
  Tape t;
  Var out = gru_step(t, c, t.input(h), t.input(x));
  auto expect = gru_oracle(c, h, x);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(out.value()[i] - expect[static_cast<std::size_t>(i)]) < 1e-12);
}

TEST_CASE("backward on f(x)=x and f(x)=x^2") {
  Rng rng(1);
  ParamStore ps;
  auto& xe = ps.ensure_zeros("x", {1, 1});
  xe.value = {3.0};
  {
    Tape t;
    Var x = t.param(xe);
    t.backward(x);
    GradMap g;
    t.export_param_grads(g);
    CHECK(g["x"][0] == 1.0);
  }
  {
    Tape t;
    Var x = t.param(xe);
    Var y = x * x;
    t.backward(y);
    GradMap g;
    t.export_param_grads(g);
    CHECK(g["x"][0] == 6.0);
  }
}

TEST_CASE("backward on composite MLP loss matches finite differences") {
  Rng rng(5);
  ParamStore ps;
  Mlp mlp = make_mlp(ps, "mlp", 3, {8, 8, 1}, rng);
  std::vector<double> in = {0.2, -0.9, 0.5};
  auto build = [&](Tape& t) -> Var {
    Var y = mlp(t, t.input(in), Activation::kTanh);
    Var sq = y * y;
    return t.sum(sq);
  };
  CHECK(grad_check(ps, build, 1e-4) < 1e-4);
}

TEST_CASE("backward throws on non-finite forward value") {
  Tape t;
  Var x = t.input_scalar(-1.0);
  Var y = t.log(x);  // NaN
  CHECK_THROWS(t.backward(y));
}

TEST_CASE("unreachable parameters get zero gradient") {
  Rng rng(3);
  ParamStore ps;
  auto& used = ps.ensure("used", {2, 1}, 0.5, rng);
  ps.ensure("unused", {2, 1}, 0.5, rng);
  Tape t;
  Var x = t.param(used);
  t.backward(t.sum(x));
  GradMap g;
  t.export_param_grads(g);
  CHECK(g.count("used") == 1);
  CHECK(g.count("unused") == 0);  // absent means zero
}

TEST_CASE("stop_gradient blocks gradient exactly") {
  Rng rng(4);
  ParamStore ps;
  auto& a = ps.ensure("a", {3, 1}, 1.0, rng);
  auto& b = ps.ensure("b", {3, 1}, 1.0, rng);
  Tape t;
  Var va = t.param(a);
  Var vb = t.param(b);
  Var loss = t.sum(t.stop_gradient(va) * vb);
  t.backward(loss);
  GradMap g;
  t.export_param_grads(g);
  for (double v : g["a"]) CHECK(v == 0.0);
  bool any = false;
  for (double v : g["b"]) any = any || v != 0.0;
  CHECK(any);
}

TEST_CASE("rmsprop zero gradient decays second moment, keeps value") {
  ParamStore ps;
  auto& e = ps.ensure_zeros("p", {2, 1});
  e.value = {1.0, -2.0};
  e.second_moment = {0.5, 0.125};
  GradMap g;
  g["p"] = {0.0, 0.0};
  rmsprop_update(ps, g, {.lr = 0.1, .decay = 0.99, .momentum = 0.0, .epsilon = 1e-8});
  CHECK(e.value[0] == 1.0);
  CHECK(e.value[1] == -2.0);
  CHECK(e.second_moment[0] == 0.99 * 0.5);
  CHECK(e.second_moment[1] == 0.99 * 0.125);
}

TEST_CASE("rmsprop single step matches hand-computed update") {
  ParamStore ps;
  auto& e = ps.ensure_zeros("p", {1, 1});
  e.value = {2.0};
  GradMap g;
  g["p"] = {4.0};  // d/dp of p^2 at p=2
  const double lr = 0.01, decay = 0.99, eps = 1e-8;
  rmsprop_update(ps, g, {.lr = lr, .decay = decay, .momentum = 0.0, .epsilon = eps});
  const double ms = (1.0 - decay) * 4.0 * 4.0;
  const double expect = 2.0 - lr * 4.0 / std::sqrt(ms + eps);
  CHECK(std::abs(e.value[0] - expect) < 1e-12);
}

TEST_CASE("rmsprop on convex quadratic is non-increasing after burn-in") {
  ParamStore ps;
  auto& e = ps.ensure_zeros("p", {1, 1});
  e.value = {3.0};
  double prev = 9.0;
  for (int i = 0; i < 200; ++i) {
    GradMap g;
    g["p"] = {2.0 * e.value[0]};
    rmsprop_update(ps, g, {.lr = 0.01, .decay = 0.99, .momentum = 0.0, .epsilon = 1e-8});
    const double loss = e.value[0] * e.value[0];
    if (i >= 20) CHECK(loss <= prev + 1e-12);
    prev = loss;
  }
  CHECK(prev < 1.0);
}

TEST_CASE("rmsprop rejects non-finite gradients") {
  ParamStore ps;
  ps.ensure_zeros("p", {1, 1});
  GradMap g;
  g["p"] = {std::nan("")};
  CHECK_THROWS(rmsprop_update(ps, g, {}));
}

TEST_CASE("forward and backward are bit-deterministic") {
  auto run = [] {
    Rng rng(11);
    ParamStore ps;
    Mlp mlp = make_mlp(ps, "m", 4, {16, 1}, rng);
    std::vector<double> in = {0.1, 0.2, 0.3, 0.4};
    Tape t;
    Var y = t.sum(mlp(t, t.input(in), Activation::kTanh));
    t.backward(y);
    GradMap g;
    t.export_param_grads(g);
    return std::make_pair(y.scalar(), g);
  };
  auto [v1, g1] = run();
  auto [v2, g2] = run();
  CHECK(v1 == v2);
  REQUIRE(g1.size() == g2.size());
  for (auto& [k, g] : g1) {
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == g2[k][i]);
  }
}

TEST_CASE("reparameterized gaussian with frozen noise passes grad check") {
  Rng rng(21);
  ParamStore ps;
  Mlp head = make_mlp(ps, "h", 2, {8, 4}, rng);
  std::vector<double> in = {0.4, -0.2};
  std::vector<double> eps = {0.3, -1.1};
  auto build = [&](Tape& t) -> Var {
    Var o = head(t, t.input(in));
    Var mu = t.slice(o, 0, 2);
    Var sigma = t.add_scalar(t.softplus(t.slice(o, 2, 2)), 1e-4);
    Var z = mu + sigma * t.input(eps);
    return t.sum(z * z);
  };
  CHECK(grad_check(ps, build, 1e-4) < 1e-4);
}

TEST_CASE("sum_set is bit-exact under permutation and duplication") {
  Tape t;
  std::vector<double> a = {0.1, 1e16};
  std::vector<double> b = {0.2, -1e16};
  std::vector<double> c = {0.3, 3.0};
  Var va = t.input(a), vb = t.input(b), vc = t.input(c);
  std::vector<Var> p1 = {va, vb, vc};
  std::vector<Var> p2 = {vc, va, vb};
  Var s1 = t.sum_set(p1);
  Var s2 = t.sum_set(p2);
  for (int i = 0; i < 2; ++i) CHECK(s1.value()[i] == s2.value()[i]);

  // k duplicates == k * x, exactly
  std::vector<double> x = {0.1234567890123};
  Var vx = t.input(x);
  std::vector<Var> dup = {vx, vx, vx};
  Var s3 = t.sum_set(dup);
  CHECK(s3.value()[0] == 3.0 * x[0]);
}

TEST_CASE("log_softmax normalizes and differentiates") {
  Rng rng(2);
  ParamStore ps;
  auto& e = ps.ensure("logits", {4, 1}, 1.0, rng);
  {
    Tape t;
    Var ls = t.log_softmax(t.param(e));
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += std::exp(ls.value()[i]);
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  auto build = [&](Tape& t) -> Var {
    Var ls = t.log_softmax(t.param(e));
    return t.pick(ls, 2);
  };
  CHECK(grad_check(ps, build, 1e-4) < 1e-4);
}

TEST_CASE("checkpoint round-trips params, slots and rng") {
  Rng rng(77);
  ParamStore ps;
  Mlp mlp = make_mlp(ps, "m", 3, {5, 2}, rng);
  (void)mlp;
  ps.at("m.l0.w").second_moment[0] = 0.25;
  Rng env_rng(123);
  env_rng.next_u64();
  const std::string path = "ckpt_test.json";
  save_checkpoint(ps, env_rng, path);

  ParamStore loaded;
  Rng loaded_rng;
  load_checkpoint(loaded, loaded_rng, path);
  CHECK(loaded.count() == ps.count());
  for (auto& [name, e] : ps) {
    auto& l = loaded.at(name);
    CHECK(l.shape == e.shape);
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      CHECK(l.value[i] == e.value[i]);
      CHECK(l.second_moment[i] == e.second_moment[i]);
    }
  }
  CHECK(loaded_rng == env_rng);
  std::remove(path.c_str());
}

TEST_CASE("exact accumulator recovers cancelled terms") {
  ExactAccumulator acc;
  acc.add(1e16);
  acc.add(0.1);
  acc.add(-1e16);
  CHECK(acc.round() == 0.1);
}
