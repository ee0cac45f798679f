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
#ifndef Y2S_TENSOR_HPP_
#define Y2S_TENSOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "y2s/real.hpp"

Y2S_NAMESPACE_BEGIN

// Dense row-major array. Rank-1 tensors behave as a single row wherever a
// matrix is expected; a scalar is any tensor with exactly one element.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, std::vector<Real> data);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor scalar(Real v) { return Tensor({1}, {v}); }
  static Tensor vector(std::vector<Real> values);
  static Tensor matrix(int rows, int cols, std::vector<Real> values);

  const std::vector<int>& shape() const noexcept { return shape_; }
  int rank() const noexcept { return static_cast<int>(shape_.size()); }
  int dim(int axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_scalar() const noexcept { return data_.size() == 1; }

  // Matrix view: rank-1 [n] is 1 x n.
  int rows() const noexcept;
  int cols() const noexcept;

  Real* data() noexcept { return data_.data(); }
  const Real* data() const noexcept { return data_.data(); }
  std::span<Real> values() noexcept { return data_; }
  std::span<const Real> values() const noexcept { return data_; }
  const std::vector<Real>& storage() const noexcept { return data_; }

  Real& operator[](std::size_t i) { return data_[i]; }
  Real operator[](std::size_t i) const { return data_[i]; }
  Real& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  Real at(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols() + c];
  }
  Real item() const;

  Tensor row(int r) const;
  void fill(Real v);
  bool all_finite() const noexcept;
  bool same_shape(const Tensor& other) const noexcept {
    return shape_ == other.shape_;
  }

  std::string shape_str() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  std::vector<int> shape_;
  std::vector<Real> data_;
};

std::string shape_str(const std::vector<int>& shape);

// A named trainable tensor with its accumulated gradient.
struct Parameter {
  Parameter() = default;
  Parameter(std::string n, Tensor v);

  std::string name;
  Tensor value;
  Tensor grad;

  void zero_grad() { grad.fill(Real{0}); }
};

Y2S_NAMESPACE_END

#endif  // Y2S_TENSOR_HPP_
