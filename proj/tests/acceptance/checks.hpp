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
#ifndef Y2S_TESTS_ACCEPTANCE_CHECKS_HPP_
#define Y2S_TESTS_ACCEPTANCE_CHECKS_HPP_

#include <string>

namespace acceptance {

struct Outcome {
  bool passed = false;
  std::string detail;
};

// Double-precision checks, compiled against the f64 core.
Outcome loss_zero_cases();
Outcome gradient_check(std::string& report_text);

}  // namespace acceptance

#endif  // Y2S_TESTS_ACCEPTANCE_CHECKS_HPP_
