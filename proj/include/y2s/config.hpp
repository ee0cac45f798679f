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
#ifndef Y2S_CONFIG_HPP_
#define Y2S_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace y2s {

struct ModelConfig {
  int view_dim = 64;  // D, per-view feature size
  int n_views = 12;   // N
  int hidden_dim = 128;
  int word_embed_dim = 512;
  int vocab_size = 0;
  int n_classes = 0;

  bool operator==(const ModelConfig&) const = default;
};

// Throws y2s::Error if any field is non-positive.
void validate(const ModelConfig& cfg);

// Which decoder passes run and whether the two branches share decoders.
enum class AblationMode {
  kRec,  // each branch reconstructs its own modality
  kPre,  // each branch predicts the other modality
  kRP,   // reconstruct + predict, separate decoders per branch
  kCS,   // shared decoders, view sequences only
  kCT,   // shared decoders, word sequences only
  kCY,   // shared decoders, full reconstruction + prediction
};

enum class ConstraintSet { kNone, kC1, kC1C2, kC };

struct ModeTerms {
  bool v2v = false;
  bool v2w = false;
  bool w2w = false;
  bool w2v = false;
};

ModeTerms mode_terms(AblationMode mode);
bool mode_is_coupled(AblationMode mode);

bool uses_c1(ConstraintSet c);
bool uses_c2(ConstraintSet c);
bool uses_c3(ConstraintSet c);

std::string_view to_string(AblationMode mode);
std::string_view to_string(ConstraintSet c);
// Accepts the short CLI spellings: rec, pre, rp, cs, ct, cy / none, c1,
// c1c2, c.
std::optional<AblationMode> parse_mode(std::string_view s);
std::optional<ConstraintSet> parse_constraints(std::string_view s);

struct BalanceWeights {
  double alpha = 1.0;   // L_V2V
  double beta = 1.0;    // L_V2W
  double gamma = 1.0;   // L_W2W
  double delta = 1.0;   // L_W2V
  double phi = 1.0;     // L_C1
  double varphi = 1.0;  // L_C2
  double psi = 1.0;     // L_C3
  double mu = 1.0;      // triplet margin

  bool operator==(const BalanceWeights&) const = default;
};

// Balance-weight presets for primitive-style and ShapeNet-style data.
BalanceWeights prim_weights();
BalanceWeights shap_weights();
std::optional<BalanceWeights> preset_weights(std::string_view name);

enum class OptimizerKind { kSgd, kAdam };

struct TrainConfig {
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int epochs = 40;
  int batch_size = 32;
  AblationMode mode = AblationMode::kCY;
  ConstraintSet constraints = ConstraintSet::kC;
  BalanceWeights weights = prim_weights();
  // Hinge variant that adds the negative distance instead of subtracting
  // it; kept for comparison runs only.
  bool strict_triplet = false;
  std::uint64_t seed = 1;
  // Record wall-clock seconds in the log. Off gives byte-reproducible logs.
  bool record_time = true;
};

}  // namespace y2s

#endif  // Y2S_CONFIG_HPP_
