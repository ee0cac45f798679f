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
#ifndef Y2S_GRADCHECK_HPP_
#define Y2S_GRADCHECK_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "y2s/config.hpp"

namespace y2s {

// End-to-end finite-difference check of the total objective on a tiny
// model: view_dim 4, hidden 6, vocab 5, 2 views, 3-token captions, a batch
// of two pairs from different classes, each the other's triplet negative.
struct GradCheckOptions {
  AblationMode mode = AblationMode::kCY;
  ConstraintSet constraints = ConstraintSet::kC;
  BalanceWeights weights = prim_weights();
  std::uint64_t seed = 7;
  double step = 0.0;  // 0 picks 1e-5 in double, 1e-2 in float
  double tolerance = 1e-3;
  bool strict_triplet = false;
};

struct GradCheckGroup {
  std::string name;
  int size = 0;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckGroup> groups;  // one per parameter tensor
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  double objective = 0.0;
  double seconds = 0.0;
  bool passed = false;

  std::string to_text() const;
};

GradCheckReport run_grad_check_f64(const GradCheckOptions& opts);
GradCheckReport run_grad_check_f32(const GradCheckOptions& opts);

}  // namespace y2s

#endif  // Y2S_GRADCHECK_HPP_
