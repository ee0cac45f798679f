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
#ifndef Y2S_EVALUATE_HPP_
#define Y2S_EVALUATE_HPP_

#include <string>
#include <vector>

#include "y2s/metrics.hpp"
#include "y2s/model.hpp"
#include "y2s/synthdata.hpp"

Y2S_NAMESPACE_BEGIN

struct Evaluation {
  EvalReport report;
  std::vector<std::string> generated;  // one caption per test shape
};

// Embeds every test shape and caption with the same model and scores both
// retrieval directions plus greedy captioning. The ground-truth set of a
// shape query is all of its captions; a caption query has its one shape.
Evaluation evaluate(ModelParams& params, const DatasetSplit& test, const Vocab& vocab,
                    int max_len);

Y2S_NAMESPACE_END

#endif  // Y2S_EVALUATE_HPP_
