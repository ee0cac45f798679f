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
#ifndef Y2S_FINITE_DIFF_HPP_
#define Y2S_FINITE_DIFF_HPP_

#include <functional>

#include "y2s/tensor.hpp"

Y2S_NAMESPACE_BEGIN

// Central-difference gradient of `f` with respect to `theta.value`.
// `f` must read the parameter's current value on every call; theta is
// restored bit-exactly after each probe.
Tensor finite_diff(const std::function<double()>& f, Parameter& theta, double h = 1e-3);

// |a - b| / max(|a|, |b|, floor)
double relative_error(double a, double b, double floor = 1e-6);

// Largest relative_error over all coordinates; shapes must match.
double max_relative_error(const Tensor& a, const Tensor& b, double floor = 1e-6);

Y2S_NAMESPACE_END

#endif  // Y2S_FINITE_DIFF_HPP_
