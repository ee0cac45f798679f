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
#include "y2s/gradcheck.hpp"

#include <chrono>

#include "y2s/finite_diff.hpp"
#include "y2s/trainer.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

GradCheckReport run_impl(const GradCheckOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  ModelConfig mc;
  mc.view_dim = 4;
  mc.n_views = 2;
  mc.hidden_dim = 6;
  mc.word_embed_dim = 3;
  mc.vocab_size = 5;
  mc.n_classes = 2;
  ModelParams params = ModelParams::create(mc, needs_decoupled_decoders(opts.mode), opts.seed);

  Rng rng(derive_seed(opts.seed, 0x6763));
  std::vector<Tensor> mats;
  for (int b = 0; b < 2; ++b) {
    Tensor m({mc.n_views, mc.view_dim});
    for (Real& x : m.values()) x = static_cast<Real>(rng.normal());
    mats.push_back(std::move(m));
  }
  const std::vector<std::vector<int>> words = {{4, 3, 2}, {4, 4, 2}};
  const std::vector<int> classes = {0, 1};
  const std::vector<int> negatives = {1, 0};
  const PairBatch batch = PairBatch::from_pairs(mats, words, classes);

  TrainConfig tc;
  tc.mode = opts.mode;
  tc.constraints = opts.constraints;
  tc.weights = opts.weights;
  tc.strict_triplet = opts.strict_triplet;

  auto objective = [&]() {
    Tape tape;
    return batch_objective(tape, params, batch, negatives, tc).total_value;
  };

  params.zero_grad();
  GradCheckReport report;
  report.tolerance = opts.tolerance;
  {
    Tape tape;
    BatchObjective obj = batch_objective(tape, params, batch, negatives, tc);
    report.objective = obj.total_value;
    tape.backward(obj.total);
  }
  const double h = opts.step > 0.0 ? opts.step : (sizeof(Real) == 8 ? 1e-5 : 1e-2);
  for (Parameter* p : params.parameters()) {
    const Tensor numeric = finite_diff(objective, *p, h);
    GradCheckGroup g;
    g.name = p->name;
    g.size = static_cast<int>(p->value.size());
    g.max_rel_error = max_relative_error(p->grad, numeric);
    report.max_rel_error = std::max(report.max_rel_error, g.max_rel_error);
    report.groups.push_back(std::move(g));
  }
  report.passed = report.max_rel_error <= opts.tolerance;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

Y2S_NAMESPACE_END

namespace y2s {

#if defined(Y2S_REAL_DOUBLE)
GradCheckReport run_grad_check_f64(const GradCheckOptions& opts) { return run_impl(opts); }
#else
GradCheckReport run_grad_check_f32(const GradCheckOptions& opts) { return run_impl(opts); }
#endif

}  // namespace y2s
