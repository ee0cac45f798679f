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
#define Y2S_REAL_DOUBLE 1

#include <cmath>
#include <string>

#include "acceptance/checks.hpp"
#include "y2s/gradcheck.hpp"
#include "y2s/losses.hpp"
#include "y2s/rng.hpp"

namespace acceptance {

using namespace y2s;

namespace {

Tensor rnd(int n, Rng& rng) {
  Tensor t({n});
  for (double& v : t.values()) v = rng.normal();
  return t;
}

}  // namespace

Outcome loss_zero_cases() {
  Rng rng(101);
  std::vector<std::string> failed;
  const std::vector<Tensor> views = {rnd(64, rng), rnd(64, rng), rnd(64, rng)};
  if (l_v2v(views, views) != 0.0) failed.push_back("l_v2v");
  {
    Tape t;
    std::vector<Var> a, b;
    for (const Tensor& v : views) {
      a.push_back(t.constant(v));
      b.push_back(t.constant(v));
    }
    if (t.value(l_w2v(a, b)).item() != 0.0) failed.push_back("l_w2v");
  }
  const Tensor e = rnd(32, rng);
  if (l_c3(e, e) != 0.0) failed.push_back("l_c3");

  // Negatives sit exactly mu and 2*mu further out than the positive.
  const double mu = 1.0;
  const Tensor s = Tensor::vector({0.0, 0.0, 0.0});
  const Tensor t = Tensor::vector({1.0, 0.0, 0.0});
  const Tensor at_margin = Tensor::vector({0.0, std::sqrt(2.0), 0.0});
  const Tensor beyond = Tensor::vector({0.0, 0.0, std::sqrt(3.0)});
  if (l_c2_triplet(s, t, at_margin, at_margin, mu) > 1e-12) failed.push_back("l_c2 at margin");
  if (l_c2_triplet(s, t, beyond, beyond, mu) != 0.0) failed.push_back("l_c2 beyond margin");

  const Tensor uniform({6});
  const double c1 = l_c1(uniform, uniform, 2);
  if (std::abs(c1 - 2.0 * std::log(6.0)) >= 1e-6) failed.push_back("l_c1 uniform");

  Outcome o;
  o.passed = failed.empty();
  o.detail = o.passed ? "l_v2v, l_w2v, l_c3 exact zero; triplet zero at margin; l_c1 = " +
                            std::to_string(c1)
                      : "failed:";
  for (const auto& f : failed) o.detail += " " + f;
  return o;
}

Outcome gradient_check(std::string& report_text) {
  GradCheckOptions opts;
  opts.tolerance = 1e-3;
  const GradCheckReport r = run_grad_check_f64(opts);
  report_text = r.to_text();
  Outcome o;
  o.passed = r.passed && r.seconds < 60.0 && r.max_rel_error < 1e-3;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu parameter tensors, max rel error %.3g, %.2f s",
                r.groups.size(), r.max_rel_error, r.seconds);
  o.detail = buf;
  return o;
}

}  // namespace acceptance
