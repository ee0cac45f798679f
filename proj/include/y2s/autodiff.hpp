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
#ifndef Y2S_AUTODIFF_HPP_
#define Y2S_AUTODIFF_HPP_

#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "y2s/tensor.hpp"

Y2S_NAMESPACE_BEGIN

class Tape;

// Handle to a value recorded on a tape.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const noexcept { return tape != nullptr && id >= 0; }
  const Tensor& value() const;
};

// Records a forward pass. Nodes are appended in evaluation order, which is a
// topological order, so backward simply walks the node list in reverse.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  // One leaf per parameter per tape; repeated uses share the leaf so its
  // gradient accumulates across all use sites.
  Var param(Parameter& p);

  // Appends an op result. `inputs` are used only to decide whether the node
  // needs a gradient.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn);
  Var record(Tensor value, std::span<const Var> inputs, BackwardFn fn);

  const Tensor& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  const Tensor& value(Var v) const { return value(v.id); }
  bool requires_grad(int id) const {
    return nodes_[static_cast<std::size_t>(id)].requires_grad;
  }
  // Gradient buffer of a node, allocated as zeros on first access.
  Tensor& grad(int id);
  const Tensor& upstream(int id) const {
    return nodes_[static_cast<std::size_t>(id)].grad;
  }

  // Reverse sweep from a scalar loss. Adds d(loss)/d(param) into every
  // reachable Parameter::grad; callers zero parameter grads between steps.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  void clear();

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  void check_owned(Var v, const char* what) const;

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
};

// Primitive ops. Shape violations throw y2s::Error naming the op and shapes.
// Rank-1 operands are treated as a single row.
Var matmul(Var a, Var b);     // [m,k] x [k,n]
Var matmul_nt(Var a, Var w);  // [m,k] x [n,k]^T
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var a, Real c);
Var add_scalar(Var a, Real c);
Var add_bias(Var x, Var bias);  // [m,n] + [n] broadcast over rows
Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);
// Sum over rows of w_r * (-log softmax(logits_r)[target_r]). Rows with a
// negative target are skipped. Empty weights means all ones.
Var softmax_cross_entropy(Var logits, std::span<const int> targets,
                          std::span<const Real> weights = {});
Var sq_norm(Var a);      // scalar sum of squares
Var row_sq_norm(Var a);  // [m,n] -> [m]
Var sum(Var a);
Var mean(Var a);
Var concat(std::span<const Var> parts, int axis);  // axis 0 rows, 1 cols
Var slice(Var a, int axis, int begin, int end);
Var embedding(Var table, std::span<const int> ids);  // gathers rows

Y2S_NAMESPACE_END

namespace y2s::testing {

// Fault injection for the gradient-check mutation test.
enum class Fault { kNone, kFlipSigmoidBackward };
void set_fault(Fault f);
Fault fault();

}  // namespace y2s::testing

#endif  // Y2S_AUTODIFF_HPP_
