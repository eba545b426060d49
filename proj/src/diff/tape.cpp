#include "rb/diff/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rb/exact_sum.hpp"

namespace rb::diff {

int Var::size() const { return tape->value(*this).size(); }

double Var::scalar() const {
  auto v = tape->value(*this);
  if (v.size() != 1) throw std::logic_error("Var::scalar on non-scalar node");
  return v[0];
}

std::span<const double> Var::value() const { return tape->value(*this); }

Var operator+(Var a, Var b) { return a.tape->add(a, b); }
Var operator-(Var a, Var b) { return a.tape->sub(a, b); }
Var operator*(Var a, Var b) { return a.tape->mul(a, b); }

void Tape::clear() {
  nodes_.clear();
  values_.clear();
  grads_.clear();
  extra_.clear();
  param_nodes_.clear();
  param_list_.clear();
  memo_.clear();
}

int Tape::alloc_node(Op op, int len, int a, int b) {
  Node n;
  n.op = op;
  n.a = a;
  n.b = b;
  n.off = static_cast<int>(values_.size());
  n.len = len;
  values_.resize(values_.size() + static_cast<std::size_t>(len), 0.0);
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

std::span<const double> Tape::value(Var v) const {
  const Node& n = nodes_.at(static_cast<std::size_t>(v.idx));
  return {values_.data() + n.off, static_cast<std::size_t>(n.len)};
}

std::span<const double> Tape::grad(Var v) const {
  const Node& n = nodes_.at(static_cast<std::size_t>(v.idx));
  return {grads_.data() + n.off, static_cast<std::size_t>(n.len)};
}

Var Tape::input(std::span<const double> d) {
  int i = alloc_node(Op::kInput, static_cast<int>(d.size()), -1, -1);
  std::copy(d.begin(), d.end(), data(i));
  return {this, i};
}

Var Tape::input_scalar(double x) { return input(std::span<const double>(&x, 1)); }

Var Tape::fill(int n, double x) {
  int i = alloc_node(Op::kFill, n, -1, -1);
  std::fill_n(data(i), n, x);
  return {this, i};
}

Var Tape::param(ParamStore::Entry& entry) {
  auto it = param_nodes_.find(&entry);
  if (it != param_nodes_.end()) return {this, it->second};
  int i = alloc_node(Op::kParam, static_cast<int>(entry.value.size()), -1, -1);
  std::copy(entry.value.begin(), entry.value.end(), data(i));
  param_nodes_.emplace(&entry, i);
  param_list_.emplace_back(&entry, i);
  return {this, i};
}

namespace {
void check_same_len(const char* what, int a, int b) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
}
}  // namespace

Var Tape::add(Var a, Var b) {
  check_same_len("add", nodes_[a.idx].len, nodes_[b.idx].len);
  int i = alloc_node(Op::kAdd, nodes_[a.idx].len, a.idx, b.idx);
  const double* x = data(a.idx);
  const double* y = data(b.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = x[k] + y[k];
  return {this, i};
}

Var Tape::sub(Var a, Var b) {
  check_same_len("sub", nodes_[a.idx].len, nodes_[b.idx].len);
  int i = alloc_node(Op::kSub, nodes_[a.idx].len, a.idx, b.idx);
  const double* x = data(a.idx);
  const double* y = data(b.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = x[k] - y[k];
  return {this, i};
}

Var Tape::mul(Var a, Var b) {
  check_same_len("mul", nodes_[a.idx].len, nodes_[b.idx].len);
  int i = alloc_node(Op::kMul, nodes_[a.idx].len, a.idx, b.idx);
  const double* x = data(a.idx);
  const double* y = data(b.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = x[k] * y[k];
  return {this, i};
}

Var Tape::div(Var a, Var b) {
  check_same_len("div", nodes_[a.idx].len, nodes_[b.idx].len);
  int i = alloc_node(Op::kDiv, nodes_[a.idx].len, a.idx, b.idx);
  const double* x = data(a.idx);
  const double* y = data(b.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = x[k] / y[k];
  return {this, i};
}

Var Tape::add_scalar(Var a, double s) {
  int i = alloc_node(Op::kAddScalar, nodes_[a.idx].len, a.idx, -1);
  nodes_[i].s = s;
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = x[k] + s;
  return {this, i};
}

Var Tape::mul_scalar(Var a, double s) {
  int i = alloc_node(Op::kMulScalar, nodes_[a.idx].len, a.idx, -1);
  nodes_[i].s = s;
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = x[k] * s;
  return {this, i};
}

Var Tape::relu(Var a) {
  int i = alloc_node(Op::kRelu, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = x[k] > 0.0 ? x[k] : 0.0;
  return {this, i};
}

Var Tape::sigmoid(Var a) {
  int i = alloc_node(Op::kSigmoid, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) {
    const double v = x[k];
    o[k] = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                    : std::exp(v) / (1.0 + std::exp(v));
  }
  return {this, i};
}

Var Tape::tanh(Var a) {
  int i = alloc_node(Op::kTanh, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = std::tanh(x[k]);
  return {this, i};
}

Var Tape::softplus(Var a) {
  int i = alloc_node(Op::kSoftplus, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) {
    const double v = x[k];
    if (v > 30.0)
      o[k] = v;
    else if (v < -30.0)
      o[k] = std::exp(v);
    else
      o[k] = std::log1p(std::exp(v));
  }
  return {this, i};
}

Var Tape::exp(Var a) {
  int i = alloc_node(Op::kExp, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = std::exp(x[k]);
  return {this, i};
}

Var Tape::log(Var a) {
  int i = alloc_node(Op::kLog, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  double* o = data(i);
  for (int k = 0; k < nodes_[i].len; ++k) o[k] = std::log(x[k]);
  return {this, i};
}

Var Tape::matvec(Var m, Var v, int rows, int cols) {
  if (nodes_[m.idx].len != rows * cols)
    throw std::invalid_argument("matvec: matrix size mismatch");
  if (nodes_[v.idx].len != cols)
    throw std::invalid_argument("matvec: vector size mismatch");
  int i = alloc_node(Op::kMatVec, rows, m.idx, v.idx);
  nodes_[i].i0 = rows;
  nodes_[i].i1 = cols;
  const double* M = data(m.idx);
  const double* x = data(v.idx);
  double* o = data(i);
  for (int r = 0; r < rows; ++r) {
    const double* row = M + static_cast<std::size_t>(r) * cols;
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    o[r] = acc;
  }
  return {this, i};
}

Var Tape::concat(Var a, Var b) {
  Var parts[2] = {a, b};
  return concat(std::span<const Var>(parts, 2));
}

Var Tape::concat(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no parts");
  int total = 0;
  for (Var p : parts) total += nodes_[p.idx].len;
  int i = alloc_node(Op::kConcat2, total, -1, -1);
  nodes_[i].i0 = static_cast<int>(extra_.size());
  nodes_[i].i1 = static_cast<int>(parts.size());
  for (Var p : parts) extra_.push_back(p.idx);
  double* o = data(i);
  for (Var p : parts) {
    const double* x = data(p.idx);
    o = std::copy(x, x + nodes_[p.idx].len, o);
  }
  return {this, i};
}

Var Tape::slice(Var a, int lo, int len) {
  if (lo < 0 || len < 0 || lo + len > nodes_[a.idx].len)
    throw std::invalid_argument("slice: out of range");
  int i = alloc_node(Op::kSlice, len, a.idx, -1);
  nodes_[i].i0 = lo;
  const double* x = data(a.idx) + lo;
  std::copy(x, x + len, data(i));
  return {this, i};
}

Var Tape::sum(Var a) {
  int i = alloc_node(Op::kSum, 1, a.idx, -1);
  const double* x = data(a.idx);
  double acc = 0.0;
  for (int k = 0; k < nodes_[a.idx].len; ++k) acc += x[k];
  *data(i) = acc;
  return {this, i};
}

Var Tape::mean(Var a) {
  int i = alloc_node(Op::kMean, 1, a.idx, -1);
  const double* x = data(a.idx);
  double acc = 0.0;
  const int n = nodes_[a.idx].len;
  for (int k = 0; k < n; ++k) acc += x[k];
  *data(i) = acc / n;
  return {this, i};
}

Var Tape::dot(Var a, Var b) {
  check_same_len("dot", nodes_[a.idx].len, nodes_[b.idx].len);
  int i = alloc_node(Op::kDot, 1, a.idx, b.idx);
  const double* x = data(a.idx);
  const double* y = data(b.idx);
  double acc = 0.0;
  for (int k = 0; k < nodes_[a.idx].len; ++k) acc += x[k] * y[k];
  *data(i) = acc;
  return {this, i};
}

Var Tape::pick(Var a, int j) {
  if (j < 0 || j >= nodes_[a.idx].len)
    throw std::invalid_argument("pick: index out of range");
  int i = alloc_node(Op::kPick, 1, a.idx, -1);
  nodes_[i].i0 = j;
  *data(i) = data(a.idx)[j];
  return {this, i};
}

Var Tape::sum_set(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("sum_set: no parts");
  const int len = nodes_[parts[0].idx].len;
  for (Var p : parts) check_same_len("sum_set", len, nodes_[p.idx].len);
  int i = alloc_node(Op::kSumSet, len, -1, -1);
  nodes_[i].i0 = static_cast<int>(extra_.size());
  nodes_[i].i1 = static_cast<int>(parts.size());
  for (Var p : parts) extra_.push_back(p.idx);
  double* o = data(i);
  ExactAccumulator acc;
  for (int k = 0; k < len; ++k) {
    acc.reset();
    for (Var p : parts) acc.add(data(p.idx)[k]);
    o[k] = acc.round();
  }
  return {this, i};
}

Var Tape::log_softmax(Var a) {
  int i = alloc_node(Op::kLogSoftmax, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  double* o = data(i);
  const int n = nodes_[i].len;
  double mx = x[0];
  for (int k = 1; k < n; ++k) mx = std::max(mx, x[k]);
  double z = 0.0;
  for (int k = 0; k < n; ++k) z += std::exp(x[k] - mx);
  const double lz = mx + std::log(z);
  for (int k = 0; k < n; ++k) o[k] = x[k] - lz;
  return {this, i};
}

Var Tape::stop_gradient(Var a) {
  int i = alloc_node(Op::kStopGrad, nodes_[a.idx].len, a.idx, -1);
  const double* x = data(a.idx);
  std::copy(x, x + nodes_[i].len, data(i));
  return {this, i};
}

void Tape::backward(Var out) {
  const Node& last = nodes_.at(static_cast<std::size_t>(out.idx));
  if (last.len != 1)
    throw std::invalid_argument("backward: output must be scalar");
  if (!std::isfinite(values_[last.off]))
    throw std::runtime_error("backward: non-finite forward value");
  grads_.assign(values_.size(), 0.0);
  grads_[last.off] = 1.0;
  for (int i = out.idx; i >= 0; --i) backward_node(i);
}

void Tape::backward_node(int idx) {
  const Node& n = nodes_[idx];
  const double* g = grads_.data() + n.off;
  switch (n.op) {
    case Op::kInput:
    case Op::kParam:
    case Op::kFill:
      break;
    case Op::kAdd: {
      double* ga = gdata(n.a);
      double* gb = gdata(n.b);
      for (int k = 0; k < n.len; ++k) {
        ga[k] += g[k];
        gb[k] += g[k];
      }
      break;
    }
    case Op::kSub: {
      double* ga = gdata(n.a);
      double* gb = gdata(n.b);
      for (int k = 0; k < n.len; ++k) {
        ga[k] += g[k];
        gb[k] -= g[k];
      }
      break;
    }
    case Op::kMul: {
      double* ga = gdata(n.a);
      double* gb = gdata(n.b);
      const double* xa = data(n.a);
      const double* xb = data(n.b);
      for (int k = 0; k < n.len; ++k) {
        ga[k] += g[k] * xb[k];
        gb[k] += g[k] * xa[k];
      }
      break;
    }
    case Op::kDiv: {
      double* ga = gdata(n.a);
      double* gb = gdata(n.b);
      const double* xa = data(n.a);
      const double* xb = data(n.b);
      for (int k = 0; k < n.len; ++k) {
        ga[k] += g[k] / xb[k];
        gb[k] -= g[k] * xa[k] / (xb[k] * xb[k]);
      }
      break;
    }
    case Op::kAddScalar: {
      double* ga = gdata(n.a);
      for (int k = 0; k < n.len; ++k) ga[k] += g[k];
      break;
    }
    case Op::kMulScalar: {
      double* ga = gdata(n.a);
      for (int k = 0; k < n.len; ++k) ga[k] += g[k] * n.s;
      break;
    }
    case Op::kRelu: {
      double* ga = gdata(n.a);
      const double* xa = data(n.a);
      for (int k = 0; k < n.len; ++k)
        if (xa[k] > 0.0) ga[k] += g[k];
      break;
    }
    case Op::kSigmoid: {
      double* ga = gdata(n.a);
      const double* o = data(idx);
      for (int k = 0; k < n.len; ++k) ga[k] += g[k] * o[k] * (1.0 - o[k]);
      break;
    }
    case Op::kTanh: {
      double* ga = gdata(n.a);
      const double* o = data(idx);
      for (int k = 0; k < n.len; ++k) ga[k] += g[k] * (1.0 - o[k] * o[k]);
      break;
    }
    case Op::kSoftplus: {
      double* ga = gdata(n.a);
      const double* xa = data(n.a);
      for (int k = 0; k < n.len; ++k) {
        const double v = xa[k];
        const double sg = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v))
                                   : std::exp(v) / (1.0 + std::exp(v));
        ga[k] += g[k] * sg;
      }
      break;
    }
    case Op::kExp: {
      double* ga = gdata(n.a);
      const double* o = data(idx);
      for (int k = 0; k < n.len; ++k) ga[k] += g[k] * o[k];
      break;
    }
    case Op::kLog: {
      double* ga = gdata(n.a);
      const double* xa = data(n.a);
      for (int k = 0; k < n.len; ++k) ga[k] += g[k] / xa[k];
      break;
    }
    case Op::kMatVec: {
      const int rows = n.i0;
      const int cols = n.i1;
      double* gm = gdata(n.a);
      double* gv = gdata(n.b);
      const double* M = data(n.a);
      const double* x = data(n.b);
      for (int r = 0; r < rows; ++r) {
        const double gr = g[r];
        if (gr == 0.0) continue;
        double* gmrow = gm + static_cast<std::size_t>(r) * cols;
        const double* mrow = M + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) {
          gmrow[c] += gr * x[c];
          gv[c] += gr * mrow[c];
        }
      }
      break;
    }
    case Op::kConcat2: {
      int off = 0;
      for (int e = 0; e < n.i1; ++e) {
        const int p = extra_[static_cast<std::size_t>(n.i0 + e)];
        double* gp = gdata(p);
        const int plen = nodes_[p].len;
        for (int k = 0; k < plen; ++k) gp[k] += g[off + k];
        off += plen;
      }
      break;
    }
    case Op::kSlice: {
      double* ga = gdata(n.a) + n.i0;
      for (int k = 0; k < n.len; ++k) ga[k] += g[k];
      break;
    }
    case Op::kSum: {
      double* ga = gdata(n.a);
      const int m = nodes_[n.a].len;
      for (int k = 0; k < m; ++k) ga[k] += g[0];
      break;
    }
    case Op::kMean: {
      double* ga = gdata(n.a);
      const int m = nodes_[n.a].len;
      const double gs = g[0] / m;
      for (int k = 0; k < m; ++k) ga[k] += gs;
      break;
    }
    case Op::kDot: {
      double* ga = gdata(n.a);
      double* gb = gdata(n.b);
      const double* xa = data(n.a);
      const double* xb = data(n.b);
      const int m = nodes_[n.a].len;
      for (int k = 0; k < m; ++k) {
        ga[k] += g[0] * xb[k];
        gb[k] += g[0] * xa[k];
      }
      break;
    }
    case Op::kPick: {
      gdata(n.a)[n.i0] += g[0];
      break;
    }
    case Op::kSumSet: {
      for (int e = 0; e < n.i1; ++e) {
        const int p = extra_[static_cast<std::size_t>(n.i0 + e)];
        double* gp = gdata(p);
        for (int k = 0; k < n.len; ++k) gp[k] += g[k];
      }
      break;
    }
    case Op::kLogSoftmax: {
      double* ga = gdata(n.a);
      const double* o = data(idx);
      double gsum = 0.0;
      for (int k = 0; k < n.len; ++k) gsum += g[k];
      for (int k = 0; k < n.len; ++k) ga[k] += g[k] - std::exp(o[k]) * gsum;
      break;
    }
    case Op::kStopGrad:
      break;
  }
}

void Tape::export_param_grads(GradMap& grads) const {
  for (const auto& [entry, idx] : param_list_) {
    auto& dst = grads[entry->name];
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    if (dst.empty()) dst.assign(static_cast<std::size_t>(n.len), 0.0);
    const double* g = grads_.data() + n.off;
    for (int k = 0; k < n.len; ++k) dst[static_cast<std::size_t>(k)] += g[k];
  }
}

}  // namespace rb::diff
