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
#ifndef Y2S_LOSSES_HPP_
#define Y2S_LOSSES_HPP_

#include <array>
#include <span>
#include <vector>

#include "y2s/autodiff.hpp"
#include "y2s/config.hpp"
#include "y2s/seqnets.hpp"

Y2S_NAMESPACE_BEGIN

// Batched forms sum the per-pair loss over batch rows; with a single row they
// are exactly the per-pair definitions.

// (1/N) sum_i ||recon_i - gt_i||^2. Also serves as the word-to-view loss.
Var l_v2v(std::span<const Var> recon, std::span<const Var> gt);
inline Var l_w2v(std::span<const Var> pred, std::span<const Var> gt) { return l_v2v(pred, gt); }

// -sum_j log softmax(logits_j)[w_j], summed (not averaged) over tokens. Also
// serves as the word-to-word loss.
Var l_v2w(std::span<const Var> logits, const StepTokens& tokens);
inline Var l_w2w(std::span<const Var> logits, const StepTokens& tokens) {
  return l_v2w(logits, tokens);
}

// -log p(c | F_s) - log p(c | F_t) with one shared classifier.
Var l_c1(Var class_logits_s, Var class_logits_t, std::span<const int> classes);

// Triplet hinge over (s+, t+, t-) and (t+, s+, s-):
//   [d(s+,t+) - d(s+,t-) + mu]_+ + [d(t+,s+) - d(t+,s-) + mu]_+
// with d the squared Euclidean distance. `add_negative` adds the
// negative distance instead, a variant kept for comparison runs.
struct TripletTerms {
  Var shape_anchor;  // first hinge, summed over rows
  Var text_anchor;   // second hinge, summed over rows
  Var total;
};
TripletTerms l_c2_triplet_terms(Var fs_pos, Var ft_pos, Var fs_neg, Var ft_neg, double mu,
                                bool add_negative = false);
Var l_c2_triplet(Var fs_pos, Var ft_pos, Var fs_neg, Var ft_neg, double mu,
                 bool add_negative = false);

// ||F_s - F_t||^2
Var l_c3(Var f_s, Var f_t);

// Plain-value conveniences for single pairs.
double l_v2v(std::span<const Tensor> recon, std::span<const Tensor> gt);
double l_v2w(std::span<const Tensor> logits, std::span<const int> gt_words);
double l_c1(const Tensor& class_logits_s, const Tensor& class_logits_t, int c);
double l_c2_triplet(const Tensor& fs_pos, const Tensor& ft_pos, const Tensor& fs_neg,
                    const Tensor& ft_neg, double mu, bool add_negative = false);
double l_c3(const Tensor& f_s, const Tensor& f_t);

enum LossIndex { kV2V = 0, kV2W, kW2W, kW2V, kC1, kC2, kC3, kLossCount };

struct LossValues {
  std::array<double, kLossCount> v{};
  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

const char* loss_name(int index);

// Coefficient of each component in the total objective for the given mode
// and constraint set; terms the mode or constraint set omits get zero.
std::array<double, kLossCount> objective_coefficients(const BalanceWeights& w, AblationMode mode,
                                                      ConstraintSet constraints);

// L_S + L_T + L_C with L_S = a*V2V + b*V2W, L_T = g*W2W + d*W2V,
// L_C = phi*C1 + varphi*C2 + psi*C3.
double total_objective(const LossValues& losses, const BalanceWeights& w, AblationMode mode,
                       ConstraintSet constraints);

Y2S_NAMESPACE_END

#endif  // Y2S_LOSSES_HPP_
