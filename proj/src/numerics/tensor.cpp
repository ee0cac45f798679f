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
#include "y2s/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "y2s/error.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

std::size_t element_count(const std::vector<int>& shape) {
  if (shape.empty()) fail("tensor shape must have at least one extent");
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) fail("tensor extents must be positive, got " + y2s::shape_str(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

}  // namespace

std::string shape_str(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), data_(element_count(shape_), Real{0}) {}

Tensor::Tensor(std::vector<int> shape, std::vector<Real> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (element_count(shape_) != data_.size()) {
    fail("tensor data length " + std::to_string(data_.size()) +
         " does not match shape " + shape_str());
  }
}

Tensor Tensor::vector(std::vector<Real> values) {
  const int n = static_cast<int>(values.size());
  return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(int rows, int cols, std::vector<Real> values) {
  return Tensor({rows, cols}, std::move(values));
}

int Tensor::rows() const noexcept {
  if (shape_.size() < 2) return 1;
  return static_cast<int>(data_.size() / static_cast<std::size_t>(shape_.back()));
}

int Tensor::cols() const noexcept { return shape_.empty() ? 0 : shape_.back(); }

Real Tensor::item() const {
  if (!is_scalar()) fail("item() on non-scalar tensor " + shape_str());
  return data_[0];
}

Tensor Tensor::row(int r) const {
  if (r < 0 || r >= rows()) fail("row index out of range");
  const auto c = static_cast<std::size_t>(cols());
  std::vector<Real> out(data_.begin() + static_cast<std::ptrdiff_t>(r * c),
                        data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * c));
  return Tensor::vector(std::move(out));
}

void Tensor::fill(Real v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const noexcept {
  for (Real v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::shape_str() const { return y2s::shape_str(shape_); }

Parameter::Parameter(std::string n, Tensor v)
    : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}

Y2S_NAMESPACE_END
