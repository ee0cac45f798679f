/* Copyright 2026 The Y2Seq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "y2s/autodiff.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "y2s/error.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

using MatMap = Eigen::Map<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

MatMap as_mat(Tensor& t) { return MatMap(t.data(), t.rows(), t.cols()); }
ConstMatMap as_mat(const Tensor& t) { return ConstMatMap(t.data(), t.rows(), t.cols()); }

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  fail(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
}

Tape& tape_of(Var a, Var b, const char* op) {
  if (!a.valid() || !b.valid() || a.tape != b.tape) {
    fail(std::string(op) + ": operands must live on the same tape");
  }
  return *a.tape;
}

Tape& tape_of(Var a, const char* op) {
  if (!a.valid()) fail(std::string(op) + ": invalid operand");
  return *a.tape;
}

template <typename F>
Tensor map_values(const Tensor& a, F f) {
  Tensor out(a.shape());
  const Real* in = a.data();
  Real* o = out.data();
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = f(in[i]);
  return out;
}

void accumulate(Tensor& dst, const Tensor& src) {
  Real* d = dst.data();
  const Real* s = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += s[i];
}

void accumulate_scaled(Tensor& dst, const Tensor& src, Real c) {
  Real* d = dst.data();
  const Real* s = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += c * s[i];
}

// Elementwise binary op shared scaffolding.
void check_same(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) shape_error(op, a, b);
}

}  // namespace

const Tensor& Var::value() const {
  if (!valid()) fail("value() on an invalid Var");
  return tape->value(id);
}

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), Tensor{}, nullptr, nullptr, false});
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Var Tape::param(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) {
    return Var{this, it->second};
  }
  nodes_.push_back(Node{p.value, Tensor{}, nullptr, &p, true});
  const int id = static_cast<int>(nodes_.size() - 1);
  param_nodes_.emplace(&p, id);
  return Var{this, id};
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(fn));
}

Var Tape::record(Tensor value, std::span<const Var> inputs, BackwardFn fn) {
  bool needs = false;
  for (const Var& v : inputs) {
    check_owned(v, "record");
    needs = needs || requires_grad(v.id);
  }
  nodes_.push_back(
      Node{std::move(value), Tensor{}, needs ? std::move(fn) : nullptr, nullptr, needs});
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Tensor& Tape::grad(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

void Tape::backward(Var loss) {
  check_owned(loss, "backward");
  if (!value(loss).is_scalar()) {
    fail("backward: loss must be a scalar, got shape " + value(loss).shape_str());
  }
  for (Node& n : nodes_) n.grad = Tensor{};
  grad(loss.id)[0] = Real{1};
  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param != nullptr) accumulate(n.param->grad, n.grad);
  }
}

void Tape::clear() {
  nodes_.clear();
  param_nodes_.clear();
}

void Tape::check_owned(Var v, const char* what) const {
  if (v.tape != this || v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    fail(std::string(what) + ": Var does not belong to this tape");
  }
}

Var matmul(Var a, Var b) {
  Tape& t = tape_of(a, b, "matmul");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  if (av.cols() != bv.rows() || bv.rank() != 2) shape_error("matmul", av, bv);
  Tensor out({av.rows(), bv.cols()});
  as_mat(out).noalias() = as_mat(av) * as_mat(bv);
  return t.record(std::move(out), {a, b}, [a, b](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    if (tp.requires_grad(a.id)) as_mat(tp.grad(a.id)).noalias() += as_mat(g) * as_mat(tp.value(b)).transpose();
    if (tp.requires_grad(b.id)) as_mat(tp.grad(b.id)).noalias() += as_mat(tp.value(a)).transpose() * as_mat(g);
  });
}

Var matmul_nt(Var a, Var w) {
  Tape& t = tape_of(a, w, "matmul_nt");
  const Tensor& av = t.value(a);
  const Tensor& wv = t.value(w);
  if (av.cols() != wv.cols() || wv.rank() != 2) shape_error("matmul_nt", av, wv);
  Tensor out({av.rows(), wv.rows()});
  as_mat(out).noalias() = as_mat(av) * as_mat(wv).transpose();
  return t.record(std::move(out), {a, w}, [a, w](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    if (tp.requires_grad(a.id)) as_mat(tp.grad(a.id)).noalias() += as_mat(g) * as_mat(tp.value(w));
    if (tp.requires_grad(w.id)) as_mat(tp.grad(w.id)).noalias() += as_mat(g).transpose() * as_mat(tp.value(a));
  });
}

Var add(Var a, Var b) {
  Tape& t = tape_of(a, b, "add");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  check_same("add", av, bv);
  Tensor out = av;
  accumulate(out, bv);
  return t.record(std::move(out), {a, b}, [a, b](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    if (tp.requires_grad(a.id)) accumulate(tp.grad(a.id), g);
    if (tp.requires_grad(b.id)) accumulate(tp.grad(b.id), g);
  });
}

Var sub(Var a, Var b) {
  Tape& t = tape_of(a, b, "sub");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  check_same("sub", av, bv);
  Tensor out = av;
  accumulate_scaled(out, bv, Real{-1});
  return t.record(std::move(out), {a, b}, [a, b](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    if (tp.requires_grad(a.id)) accumulate(tp.grad(a.id), g);
    if (tp.requires_grad(b.id)) accumulate_scaled(tp.grad(b.id), g, Real{-1});
  });
}

Var mul(Var a, Var b) {
  Tape& t = tape_of(a, b, "mul");
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  check_same("mul", av, bv);
  Tensor out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return t.record(std::move(out), {a, b}, [a, b](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    if (tp.requires_grad(a.id)) {
      Tensor& ga = tp.grad(a.id);
      const Tensor& bv2 = tp.value(b);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv2[i];
    }
    if (tp.requires_grad(b.id)) {
      Tensor& gb = tp.grad(b.id);
      const Tensor& av2 = tp.value(a);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av2[i];
    }
  });
}

Var scale(Var a, Real c) {
  Tape& t = tape_of(a, "scale");
  Tensor out = map_values(t.value(a), [c](Real x) { return c * x; });
  return t.record(std::move(out), {a}, [a, c](Tape& tp, int self) {
    accumulate_scaled(tp.grad(a.id), tp.upstream(self), c);
  });
}

Var add_scalar(Var a, Real c) {
  Tape& t = tape_of(a, "add_scalar");
  Tensor out = map_values(t.value(a), [c](Real x) { return x + c; });
  return t.record(std::move(out), {a}, [a](Tape& tp, int self) {
    accumulate(tp.grad(a.id), tp.upstream(self));
  });
}

Var add_bias(Var x, Var bias) {
  Tape& t = tape_of(x, bias, "add_bias");
  const Tensor& xv = t.value(x);
  const Tensor& bv = t.value(bias);
  if (bv.rows() != 1 || bv.cols() != xv.cols()) shape_error("add_bias", xv, bv);
  Tensor out = xv;
  as_mat(out).rowwise() += as_mat(bv).row(0);
  return t.record(std::move(out), {x, bias}, [x, bias](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    if (tp.requires_grad(x.id)) accumulate(tp.grad(x.id), g);
    if (tp.requires_grad(bias.id)) as_mat(tp.grad(bias.id)).row(0) += as_mat(g).colwise().sum();
  });
}

Var sigmoid(Var a) {
  Tape& t = tape_of(a, "sigmoid");
  Tensor out = map_values(t.value(a), [](Real x) {
    // Split on sign so exp never overflows.
    if (x >= 0) return Real{1} / (Real{1} + std::exp(-x));
    const Real e = std::exp(x);
    return e / (Real{1} + e);
  });
  return t.record(std::move(out), {a}, [a](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    const Tensor& y = tp.value(self);
    Tensor& ga = tp.grad(a.id);
    const Real sign =
        y2s::testing::fault() == y2s::testing::Fault::kFlipSigmoidBackward ? Real{-1} : Real{1};
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += sign * g[i] * y[i] * (Real{1} - y[i]);
  });
}

Var tanh(Var a) {
  Tape& t = tape_of(a, "tanh");
  Tensor out = map_values(t.value(a), [](Real x) { return std::tanh(x); });
  return t.record(std::move(out), {a}, [a](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    const Tensor& y = tp.value(self);
    Tensor& ga = tp.grad(a.id);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (Real{1} - y[i] * y[i]);
  });
}

Var relu(Var a) {
  Tape& t = tape_of(a, "relu");
  Tensor out = map_values(t.value(a), [](Real x) { return x > 0 ? x : Real{0}; });
  return t.record(std::move(out), {a}, [a](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    const Tensor& x = tp.value(a);
    Tensor& ga = tp.grad(a.id);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (x[i] > 0) ga[i] += g[i];
    }
  });
}

Var softmax_cross_entropy(Var logits, std::span<const int> targets,
                          std::span<const Real> weights) {
  Tape& t = tape_of(logits, "softmax_cross_entropy");
  const Tensor& lv = t.value(logits);
  const int rows = lv.rows();
  const int cols = lv.cols();
  if (static_cast<int>(targets.size()) != rows) {
    fail("softmax_cross_entropy: " + std::to_string(targets.size()) + " targets for logits " +
         lv.shape_str());
  }
  if (!weights.empty() && weights.size() != targets.size()) {
    fail("softmax_cross_entropy: weight count does not match target count");
  }
  // Row-wise probabilities kept for the backward pass.
  Tensor probs(lv.shape());
  double loss = 0.0;
  for (int r = 0; r < rows; ++r) {
    const int target = targets[static_cast<std::size_t>(r)];
    if (target >= cols) {
      fail("softmax_cross_entropy: target " + std::to_string(target) + " outside " +
           std::to_string(cols) + " classes");
    }
    const Real* x = lv.data() + static_cast<std::ptrdiff_t>(r) * cols;
    Real* p = probs.data() + static_cast<std::ptrdiff_t>(r) * cols;
    const Real mx = *std::max_element(x, x + cols);
    Real z = 0;
    for (int c = 0; c < cols; ++c) {
      p[c] = std::exp(x[c] - mx);
      z += p[c];
    }
    for (int c = 0; c < cols; ++c) p[c] /= z;
    if (target < 0) continue;
    const Real w = weights.empty() ? Real{1} : weights[static_cast<std::size_t>(r)];
    loss += static_cast<double>(w) * (static_cast<double>(std::log(z)) + mx - x[target]);
  }
  std::vector<int> tgt(targets.begin(), targets.end());
  std::vector<Real> wts(weights.begin(), weights.end());
  return t.record(
      Tensor::scalar(static_cast<Real>(loss)), {logits},
      [logits, probs = std::move(probs), tgt = std::move(tgt), wts = std::move(wts)](
          Tape& tp, int self) {
        const Real g = tp.upstream(self)[0];
        Tensor& gl = tp.grad(logits.id);
        const int cols2 = probs.cols();
        for (std::size_t r = 0; r < tgt.size(); ++r) {
          if (tgt[r] < 0) continue;
          const Real w = g * (wts.empty() ? Real{1} : wts[r]);
          Real* dst = gl.data() + static_cast<std::ptrdiff_t>(r) * cols2;
          const Real* p = probs.data() + static_cast<std::ptrdiff_t>(r) * cols2;
          for (int c = 0; c < cols2; ++c) dst[c] += w * p[c];
          dst[tgt[r]] -= w;
        }
      });
}

Var sq_norm(Var a) {
  Tape& t = tape_of(a, "sq_norm");
  const Tensor& av = t.value(a);
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) s += static_cast<double>(av[i]) * av[i];
  return t.record(Tensor::scalar(static_cast<Real>(s)), {a}, [a](Tape& tp, int self) {
    const Real g = tp.upstream(self)[0];
    accumulate_scaled(tp.grad(a.id), tp.value(a), Real{2} * g);
  });
}

Var row_sq_norm(Var a) {
  Tape& t = tape_of(a, "row_sq_norm");
  const Tensor& av = t.value(a);
  Tensor out({av.rows()});
  as_mat(out).row(0) = as_mat(av).rowwise().squaredNorm().transpose();
  return t.record(std::move(out), {a}, [a](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    const Tensor& x = tp.value(a);
    Tensor& ga = tp.grad(a.id);
    const int cols = x.cols();
    for (int r = 0; r < x.rows(); ++r) {
      for (int c = 0; c < cols; ++c) ga.at(r, c) += Real{2} * g[static_cast<std::size_t>(r)] * x.at(r, c);
    }
  });
}

Var sum(Var a) {
  Tape& t = tape_of(a, "sum");
  const Tensor& av = t.value(a);
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) s += av[i];
  return t.record(Tensor::scalar(static_cast<Real>(s)), {a}, [a](Tape& tp, int self) {
    const Real g = tp.upstream(self)[0];
    Tensor& ga = tp.grad(a.id);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
  });
}

Var mean(Var a) {
  Tape& t = tape_of(a, "mean");
  const auto n = static_cast<Real>(t.value(a).size());
  return scale(sum(a), Real{1} / n);
}

Var concat(std::span<const Var> parts, int axis) {
  if (parts.empty()) fail("concat: no inputs");
  if (axis != 0 && axis != 1) fail("concat: axis must be 0 or 1");
  Tape& t = tape_of(parts.front(), "concat");
  const Tensor& first = t.value(parts.front());
  int total = 0;
  for (const Var& v : parts) {
    tape_of(parts.front(), v, "concat");
    const Tensor& pv = t.value(v);
    const int other = axis == 0 ? pv.cols() : pv.rows();
    const int other_first = axis == 0 ? first.cols() : first.rows();
    if (other != other_first) shape_error("concat", first, pv);
    total += axis == 0 ? pv.rows() : pv.cols();
  }
  Tensor out = axis == 0 ? Tensor({total, first.cols()}) : Tensor({first.rows(), total});
  int offset = 0;
  std::vector<int> offsets;
  for (const Var& v : parts) {
    const Tensor& pv = t.value(v);
    offsets.push_back(offset);
    if (axis == 0) {
      as_mat(out).middleRows(offset, pv.rows()) = as_mat(pv);
      offset += pv.rows();
    } else {
      as_mat(out).middleCols(offset, pv.cols()) = as_mat(pv);
      offset += pv.cols();
    }
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.record(std::move(out), parts,
                  [inputs, offsets = std::move(offsets), axis](Tape& tp, int self) {
                    const Tensor& g = tp.upstream(self);
                    for (std::size_t i = 0; i < inputs.size(); ++i) {
                      const Var v = inputs[i];
                      if (!tp.requires_grad(v.id)) continue;
                      Tensor& gv = tp.grad(v.id);
                      if (axis == 0) {
                        as_mat(gv) += as_mat(g).middleRows(offsets[i], gv.rows());
                      } else {
                        as_mat(gv) += as_mat(g).middleCols(offsets[i], gv.cols());
                      }
                    }
                  });
}

Var slice(Var a, int axis, int begin, int end) {
  Tape& t = tape_of(a, "slice");
  const Tensor& av = t.value(a);
  if (axis != 0 && axis != 1) fail("slice: axis must be 0 or 1");
  const int extent = axis == 0 ? av.rows() : av.cols();
  if (begin < 0 || end > extent || begin >= end) {
    fail("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
         ") invalid for shape " + av.shape_str());
  }
  const int n = end - begin;
  Tensor out = axis == 0 ? Tensor({n, av.cols()}) : Tensor({av.rows(), n});
  if (axis == 0) {
    as_mat(out) = as_mat(av).middleRows(begin, n);
  } else {
    as_mat(out) = as_mat(av).middleCols(begin, n);
  }
  return t.record(std::move(out), {a}, [a, axis, begin, n](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    Tensor& ga = tp.grad(a.id);
    if (axis == 0) {
      as_mat(ga).middleRows(begin, n) += as_mat(g);
    } else {
      as_mat(ga).middleCols(begin, n) += as_mat(g);
    }
  });
}

Var embedding(Var table, std::span<const int> ids) {
  Tape& t = tape_of(table, "embedding");
  const Tensor& tv = t.value(table);
  const int width = tv.cols();
  if (ids.empty()) fail("embedding: empty id list");
  Tensor out({static_cast<int>(ids.size()), width});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const int id = ids[r];
    if (id < 0 || id >= tv.rows()) {
      fail("embedding: id " + std::to_string(id) + " outside table " + tv.shape_str());
    }
    as_mat(out).row(static_cast<Eigen::Index>(r)) = as_mat(tv).row(id);
  }
  std::vector<int> idv(ids.begin(), ids.end());
  return t.record(std::move(out), {table}, [table, idv = std::move(idv)](Tape& tp, int self) {
    const Tensor& g = tp.upstream(self);
    Tensor& gt = tp.grad(table.id);
    for (std::size_t r = 0; r < idv.size(); ++r) {
      as_mat(gt).row(idv[r]) += as_mat(g).row(static_cast<Eigen::Index>(r));
    }
  });
}

Y2S_NAMESPACE_END
