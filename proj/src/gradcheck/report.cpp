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
#include <cstdio>

#include "y2s/gradcheck.hpp"

namespace y2s {

std::string GradCheckReport::to_text() const {
  std::string out;
  char buf[256];
  for (const GradCheckGroup& g : groups) {
    std::snprintf(buf, sizeof buf, "%-24s %5d  max_rel_err %.3e\n", g.name.c_str(), g.size,
                  g.max_rel_error);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "objective %.9g  max_rel_err %.3e  tolerance %.1e  %.2fs  %s\n",
                objective, max_rel_error, tolerance, seconds, passed ? "PASS" : "FAIL");
  out += buf;
  return out;
}

}  // namespace y2s
