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
#include "y2s/config.hpp"

#include "y2s/error.hpp"

namespace y2s {

void validate(const ModelConfig& cfg) {
  auto positive = [](int v, const char* name) {
    if (v <= 0) fail_config(std::string("model config: ") + name + " must be positive");
  };
  positive(cfg.view_dim, "view_dim");
  positive(cfg.n_views, "n_views");
  positive(cfg.hidden_dim, "hidden_dim");
  positive(cfg.word_embed_dim, "word_embed_dim");
  positive(cfg.vocab_size, "vocab_size");
  positive(cfg.n_classes, "n_classes");
}

ModeTerms mode_terms(AblationMode mode) {
  switch (mode) {
    case AblationMode::kRec: return {true, false, true, false};
    case AblationMode::kPre: return {false, true, false, true};
    case AblationMode::kRP: return {true, true, true, true};
    case AblationMode::kCS: return {true, false, false, true};
    case AblationMode::kCT: return {false, true, true, false};
    case AblationMode::kCY: return {true, true, true, true};
  }
  return {};
}

bool mode_is_coupled(AblationMode mode) {
  return mode == AblationMode::kCS || mode == AblationMode::kCT || mode == AblationMode::kCY;
}

bool uses_c1(ConstraintSet c) { return c != ConstraintSet::kNone; }
bool uses_c2(ConstraintSet c) { return c == ConstraintSet::kC1C2 || c == ConstraintSet::kC; }
bool uses_c3(ConstraintSet c) { return c == ConstraintSet::kC; }

std::string_view to_string(AblationMode mode) {
  switch (mode) {
    case AblationMode::kRec: return "rec";
    case AblationMode::kPre: return "pre";
    case AblationMode::kRP: return "rp";
    case AblationMode::kCS: return "cs";
    case AblationMode::kCT: return "ct";
    case AblationMode::kCY: return "cy";
  }
  return "?";
}

std::string_view to_string(ConstraintSet c) {
  switch (c) {
    case ConstraintSet::kNone: return "none";
    case ConstraintSet::kC1: return "c1";
    case ConstraintSet::kC1C2: return "c1c2";
    case ConstraintSet::kC: return "c";
  }
  return "?";
}

std::optional<AblationMode> parse_mode(std::string_view s) {
  for (auto m : {AblationMode::kRec, AblationMode::kPre, AblationMode::kRP, AblationMode::kCS,
                 AblationMode::kCT, AblationMode::kCY}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<ConstraintSet> parse_constraints(std::string_view s) {
  for (auto c : {ConstraintSet::kNone, ConstraintSet::kC1, ConstraintSet::kC1C2,
                 ConstraintSet::kC}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

BalanceWeights prim_weights() {
  BalanceWeights w;
  w.alpha = 1.0;
  w.beta = 2.0;
  w.gamma = 0.001;
  w.delta = 1.0;
  w.phi = 0.0001;
  w.varphi = 0.1;
  w.psi = 0.1;
  w.mu = 1.0;
  return w;
}

BalanceWeights shap_weights() {
  BalanceWeights w;
  w.alpha = 1.0;
  w.beta = 1.0;
  w.gamma = 0.01;
  w.delta = 1.0;
  w.phi = 0.001;
  w.varphi = 0.01;
  w.psi = 0.1;
  w.mu = 1.5;
  return w;
}

std::optional<BalanceWeights> preset_weights(std::string_view name) {
  if (name == "prim") return prim_weights();
  if (name == "shap") return shap_weights();
  return std::nullopt;
}

}  // namespace y2s
