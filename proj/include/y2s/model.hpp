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
#ifndef Y2S_MODEL_HPP_
#define Y2S_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "y2s/config.hpp"
#include "y2s/seqnets.hpp"

Y2S_NAMESPACE_BEGIN

enum class Branch { kShape, kText };

// All trainable state. In coupled modes the word decoder and the view decoder
// exist exactly once and both branches use the same Parameter objects. The
// uncoupled R+P ablation adds a second decoder pair owned by the text branch.
struct ModelParams {
  ModelConfig config;
  GruParams view_encoder;
  GruParams word_encoder;
  Parameter embed_table;  // [vocab, word_embed_dim]
  WordDecoderParams word_decoder;
  ViewDecoderParams view_decoder;
  Parameter classifier_w;  // [n_classes, hidden]
  Parameter classifier_b;  // [n_classes]
  std::optional<WordDecoderParams> word_decoder_t;
  std::optional<ViewDecoderParams> view_decoder_t;

  // Seeded uniform initialization. With `decoupled`, the text-branch decoders
  // start as copies of the shape-branch ones but are separate storage.
  static ModelParams create(const ModelConfig& config, bool decoupled, std::uint64_t seed);
  static ModelParams zeros(const ModelConfig& config, bool decoupled);

  bool decoupled() const { return word_decoder_t.has_value(); }

  // Word decoder used from the given branch (P^W for shape, R^W for text).
  WordDecoderParams& word_decoder_for(Branch b);
  ViewDecoderParams& view_decoder_for(Branch b);

  // Fixed order; used by optimizers and checkpoints.
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  void zero_grad();
};

bool needs_decoupled_decoders(AblationMode mode);

// A batch of (shape, description) pairs in step-major layout.
struct PairBatch {
  std::vector<Tensor> views;              // n_views blocks of [B, view_dim]
  std::vector<std::vector<int>> words;    // B token sequences, each ending in eos
  std::vector<int> classes;               // B class ids

  int size() const { return static_cast<int>(words.size()); }
  // Builds from per-pair view matrices ([n_views, view_dim] each).
  static PairBatch from_pairs(std::span<const Tensor> view_mats,
                              std::span<const std::vector<int>> words,
                              std::span<const int> classes);
};

// Per-mode decoder outputs on a tape. Absent passes are empty vectors.
struct ForwardVars {
  Var f_s;
  Var f_t;
  std::vector<Var> recon_views;        // R^V from F_s
  std::vector<Var> pred_word_logits;   // P^W from F_s
  std::vector<Var> recon_word_logits;  // R^W from F_t
  std::vector<Var> pred_views;         // P^V from F_t
  Var class_logits_s;
  Var class_logits_t;
  StepTokens tokens;
  std::vector<Var> gt_views;
};

ForwardVars forward(Tape& tape, ModelParams& params, const PairBatch& batch, AblationMode mode);

Var embed_shapes(Tape& tape, ModelParams& params, std::span<const Tensor> view_steps);
Var embed_texts(Tape& tape, ModelParams& params, std::span<const std::vector<int>> words);
Var classify(Tape& tape, ModelParams& params, Var features);

// Single-instance conveniences.
struct ForwardOutputs {
  Tensor f_s;
  Tensor f_t;
  std::optional<std::vector<Tensor>> recon_views;
  std::optional<std::vector<Tensor>> pred_word_logits;
  std::optional<std::vector<Tensor>> recon_word_logits;
  std::optional<std::vector<Tensor>> pred_views;
  Tensor class_logits_s;
  Tensor class_logits_t;
};

// views: n_views tensors of [view_dim].
Tensor embed_shape(ModelParams& params, std::span<const Tensor> views);
Tensor embed_text(ModelParams& params, std::span<const int> words);
ForwardOutputs forward_pair(ModelParams& params, std::span<const Tensor> views,
                            std::span<const int> words, AblationMode mode);
std::vector<int> caption(ModelParams& params, std::span<const Tensor> views, int max_len);

// Batched inference over many shapes: each item is a [n_views, view_dim] matrix.
std::vector<Tensor> embed_shape_batch(ModelParams& params, std::span<const Tensor> view_mats,
                                      int chunk = 64);
std::vector<Tensor> embed_text_batch(ModelParams& params,
                                     std::span<const std::vector<int>> words, int chunk = 64);
std::vector<std::vector<int>> caption_batch(ModelParams& params,
                                            std::span<const Tensor> view_mats, int max_len,
                                            int chunk = 64);

// Checkpoint: text manifest (config, vocabulary, tensor names and shapes in
// fixed order) followed by little-endian float32 payloads in manifest order.
struct Checkpoint {
  ModelParams params;
  std::vector<std::string> vocab;
};

void save_checkpoint(const ModelParams& params, std::span<const std::string> vocab,
                     const std::string& path);
Checkpoint load_checkpoint(const std::string& path);
// Fails unless the stored configuration equals `expected`.
Checkpoint load_checkpoint(const std::string& path, const ModelConfig& expected);

Y2S_NAMESPACE_END

#endif  // Y2S_MODEL_HPP_
