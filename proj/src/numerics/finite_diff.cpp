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
#include "y2s/finite_diff.hpp"

#include <algorithm>
#include <cmath>

#include "y2s/error.hpp"

Y2S_NAMESPACE_BEGIN

Tensor finite_diff(const std::function<double()>& f, Parameter& theta, double h) {
  if (!(h > 0.0)) fail("finite_diff: step must be positive");
  Tensor out(theta.value.shape());
  for (std::size_t k = 0; k < theta.value.size(); ++k) {
    const Real saved = theta.value[k];
    // Divide by the step actually representable in Real.
    const Real hi = static_cast<Real>(saved + h);
    const Real lo = static_cast<Real>(saved - h);
    theta.value[k] = hi;
    const double up = f();
    theta.value[k] = lo;
    const double down = f();
    theta.value[k] = saved;
    out[k] = static_cast<Real>((up - down) / (static_cast<double>(hi) - static_cast<double>(lo)));
  }
  return out;
}

double relative_error(double a, double b, double floor) {
  const double denom = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) / denom;
}

double max_relative_error(const Tensor& a, const Tensor& b, double floor) {
  if (!a.same_shape(b)) {
    fail("max_relative_error: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, relative_error(a[i], b[i], floor));
  }
  return worst;
}

Y2S_NAMESPACE_END
