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
#include "y2s/losses.hpp"

#include "y2s/error.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

void check_dims(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    fail(std::string(op) + ": dimension mismatch " + a.shape_str() + " vs " + b.shape_str());
  }
}

std::vector<Var> constants(Tape& tape, std::span<const Tensor> ts) {
  std::vector<Var> out;
  for (const Tensor& t : ts) out.push_back(tape.constant(t));
  return out;
}

}  // namespace

Var l_v2v(std::span<const Var> recon, std::span<const Var> gt) {
  if (recon.size() != gt.size()) {
    fail("l_v2v: " + std::to_string(recon.size()) + " reconstructed views vs " +
         std::to_string(gt.size()) + " ground-truth views");
  }
  if (recon.empty()) fail("l_v2v: empty view sequence");
  Tape& tape = *recon.front().tape;
  std::vector<Var> terms;
  for (std::size_t i = 0; i < recon.size(); ++i) {
    check_dims("l_v2v", tape.value(recon[i]), tape.value(gt[i]));
    terms.push_back(sq_norm(sub(recon[i], gt[i])));
  }
  Var total = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) total = add(total, terms[i]);
  return scale(total, Real{1} / static_cast<Real>(recon.size()));
}

Var l_v2w(std::span<const Var> logits, const StepTokens& tokens) {
  if (static_cast<int>(logits.size()) != tokens.steps()) {
    fail("l_v2w: " + std::to_string(logits.size()) + " logit steps vs " +
         std::to_string(tokens.steps()) + " tokens");
  }
  if (logits.empty()) fail("l_v2w: empty token sequence");
  Var total = softmax_cross_entropy(logits.front(), tokens.targets.front());
  for (std::size_t j = 1; j < logits.size(); ++j) {
    total = add(total, softmax_cross_entropy(logits[j], tokens.targets[j]));
  }
  return total;
}

Var l_c1(Var class_logits_s, Var class_logits_t, std::span<const int> classes) {
  const Tensor& ls = class_logits_s.value();
  const Tensor& lt = class_logits_t.value();
  check_dims("l_c1", ls, lt);
  for (int c : classes) {
    if (c < 0 || c >= ls.cols()) {
      fail("l_c1: class " + std::to_string(c) + " outside " + std::to_string(ls.cols()) +
           " classes");
    }
  }
  return add(softmax_cross_entropy(class_logits_s, classes),
             softmax_cross_entropy(class_logits_t, classes));
}

TripletTerms l_c2_triplet_terms(Var fs_pos, Var ft_pos, Var fs_neg, Var ft_neg, double mu,
                                bool add_negative) {
  const Tensor& a = fs_pos.value();
  check_dims("l_c2_triplet", a, ft_pos.value());
  check_dims("l_c2_triplet", a, fs_neg.value());
  check_dims("l_c2_triplet", a, ft_neg.value());
  const Real m = static_cast<Real>(mu);
  const Real neg_sign = add_negative ? Real{1} : Real{-1};
  auto hinge = [&](Var anchor, Var positive, Var negative) {
    const Var d_pos = row_sq_norm(sub(anchor, positive));
    const Var d_neg = row_sq_norm(sub(anchor, negative));
    return sum(relu(add_scalar(add(d_pos, scale(d_neg, neg_sign)), m)));
  };
  TripletTerms out;
  out.shape_anchor = hinge(fs_pos, ft_pos, ft_neg);
  out.text_anchor = hinge(ft_pos, fs_pos, fs_neg);
  out.total = add(out.shape_anchor, out.text_anchor);
  return out;
}

Var l_c2_triplet(Var fs_pos, Var ft_pos, Var fs_neg, Var ft_neg, double mu,
                 bool add_negative) {
  return l_c2_triplet_terms(fs_pos, ft_pos, fs_neg, ft_neg, mu, add_negative).total;
}

Var l_c3(Var f_s, Var f_t) {
  check_dims("l_c3", f_s.value(), f_t.value());
  return sq_norm(sub(f_s, f_t));
}

double l_v2v(std::span<const Tensor> recon, std::span<const Tensor> gt) {
  Tape tape;
  const auto r = constants(tape, recon);
  const auto g = constants(tape, gt);
  return tape.value(l_v2v(r, g)).item();
}

double l_v2w(std::span<const Tensor> logits, std::span<const int> gt_words) {
  if (logits.size() != gt_words.size()) {
    fail("l_v2w: " + std::to_string(logits.size()) + " logit steps vs " +
         std::to_string(gt_words.size()) + " tokens");
  }
  Tape tape;
  StepTokens st;
  for (int w : gt_words) st.targets.push_back({w});
  st.lengths = {static_cast<int>(gt_words.size())};
  return tape.value(l_v2w(constants(tape, logits), st)).item();
}

double l_c1(const Tensor& class_logits_s, const Tensor& class_logits_t, int c) {
  Tape tape;
  const int cls[] = {c};
  return tape
      .value(l_c1(tape.constant(class_logits_s), tape.constant(class_logits_t), cls))
      .item();
}

double l_c2_triplet(const Tensor& fs_pos, const Tensor& ft_pos, const Tensor& fs_neg,
                    const Tensor& ft_neg, double mu, bool add_negative) {
  Tape tape;
  return tape
      .value(l_c2_triplet(tape.constant(fs_pos), tape.constant(ft_pos), tape.constant(fs_neg),
                          tape.constant(ft_neg), mu, add_negative))
      .item();
}

double l_c3(const Tensor& f_s, const Tensor& f_t) {
  Tape tape;
  return tape.value(l_c3(tape.constant(f_s), tape.constant(f_t))).item();
}

const char* loss_name(int index) {
  static const char* const kNames[kLossCount] = {"l_v2v", "l_v2w", "l_w2w", "l_w2v",
                                                 "l_c1",  "l_c2",  "l_c3"};
  return kNames[index];
}

std::array<double, kLossCount> objective_coefficients(const BalanceWeights& w, AblationMode mode,
                                                      ConstraintSet constraints) {
  const ModeTerms t = mode_terms(mode);
  std::array<double, kLossCount> c{};
  c[kV2V] = t.v2v ? w.alpha : 0.0;
  c[kV2W] = t.v2w ? w.beta : 0.0;
  c[kW2W] = t.w2w ? w.gamma : 0.0;
  c[kW2V] = t.w2v ? w.delta : 0.0;
  c[kC1] = uses_c1(constraints) ? w.phi : 0.0;
  c[kC2] = uses_c2(constraints) ? w.varphi : 0.0;
  c[kC3] = uses_c3(constraints) ? w.psi : 0.0;
  return c;
}

double total_objective(const LossValues& losses, const BalanceWeights& w, AblationMode mode,
                       ConstraintSet constraints) {
  const auto c = objective_coefficients(w, mode, constraints);
  const double l_s = c[kV2V] * losses[kV2V] + c[kV2W] * losses[kV2W];
  const double l_t = c[kW2W] * losses[kW2W] + c[kW2V] * losses[kW2V];
  const double l_c = c[kC1] * losses[kC1] + c[kC2] * losses[kC2] + c[kC3] * losses[kC3];
  return l_s + l_t + l_c;
}

Y2S_NAMESPACE_END
