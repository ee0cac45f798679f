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
#ifndef Y2S_SEQNETS_HPP_
#define Y2S_SEQNETS_HPP_

#include <span>
#include <string>
#include <vector>

#include "y2s/autodiff.hpp"
#include "y2s/rng.hpp"

Y2S_NAMESPACE_BEGIN

// GRU with the reset gate applied inside the candidate's recurrent term:
//   z = sigmoid(W_z x + U_z h + b_z)
//   r = sigmoid(W_r x + U_r h + b_r)
//   c = tanh(W_h x + U_h (r * h) + b_h)
//   h' = (1 - z) * h + z * c
struct GruParams {
  int input_dim = 0;
  int hidden_dim = 0;
  Parameter w_z, u_z, b_z;
  Parameter w_r, u_r, b_r;
  Parameter w_h, u_h, b_h;

  // Zero-initialized cell; names are prefixed with `prefix`.
  static GruParams zeros(const std::string& prefix, int input_dim, int hidden_dim);
  // Uniform in [-k, k], k = 1/sqrt(hidden_dim).
  static GruParams random(const std::string& prefix, int input_dim, int hidden_dim, Rng& rng);

  std::vector<Parameter*> parameters();
};

// Serves both the description predictor and the description reconstructor.
struct WordDecoderParams {
  GruParams gru;
  Parameter out_w;  // [vocab, hidden]
  Parameter out_b;  // [vocab]
  int bos = 1;
  int eos = 2;

  static WordDecoderParams zeros(const std::string& prefix, int embed_dim, int hidden_dim,
                                 int vocab_size);
  static WordDecoderParams random(const std::string& prefix, int embed_dim, int hidden_dim,
                                  int vocab_size, Rng& rng);
  int vocab_size() const { return out_w.value.dim(0); }
  std::vector<Parameter*> parameters();
};

// Serves both the multi-view reconstructor and the multi-view predictor.
struct ViewDecoderParams {
  GruParams gru;
  Parameter out_w;  // [view_dim, hidden]
  Parameter out_b;  // [view_dim]

  static ViewDecoderParams zeros(const std::string& prefix, int view_dim, int hidden_dim);
  static ViewDecoderParams random(const std::string& prefix, int view_dim, int hidden_dim,
                                  Rng& rng);
  int view_dim() const { return out_w.value.dim(0); }
  std::vector<Parameter*> parameters();
};

// Fills every entry uniformly in [-k, k].
void init_uniform(Parameter& p, double k, Rng& rng);

// Token sequences of a batch, laid out per decoding step. Row b of step j is
// padded with target -1 once sequence b has ended.
struct StepTokens {
  std::vector<std::vector<int>> inputs;   // [steps][batch]; bos-shifted
  std::vector<std::vector<int>> targets;  // [steps][batch]; -1 = padding
  std::vector<int> lengths;               // [batch]

  static StepTokens teacher_forced(std::span<const std::vector<int>> seqs, int bos);
  int steps() const { return static_cast<int>(targets.size()); }
};

// x: [B, input_dim], h: [B, hidden_dim].
Var gru_step(Tape& tape, GruParams& p, Var x, Var h);
Tensor gru_step(GruParams& p, const Tensor& x, const Tensor& h);

// Folds gru_step over `inputs` from a zero state. Row b stops updating after
// lengths[b] steps; an empty `lengths` means all rows use every step.
Var encode_sequence(Tape& tape, GruParams& p, std::span<const Var> inputs,
                    std::span<const int> lengths = {});
Tensor encode_sequence(GruParams& p, std::span<const Tensor> inputs);

// Teacher-forced word decoding from initial state `features` [B, hidden].
// Step j consumes the embedding of token j-1 (bos at step 0). Returns one
// [B, vocab] logit block per step.
std::vector<Var> word_decode_teacher_forced(Tape& tape, WordDecoderParams& p, Var embed_table,
                                            Var features, const StepTokens& tokens);

// Greedy decoding; each returned sequence excludes bos and eos.
std::vector<std::vector<int>> word_decode_greedy(WordDecoderParams& p, Parameter& embed_table,
                                                 const Tensor& features, int max_len);

// Self-feeding view decoding: step 0 consumes a zero vector, step i the
// previous emitted feature. Returns n_views blocks of [B, view_dim].
std::vector<Var> view_decode(Tape& tape, ViewDecoderParams& p, Var features, int n_views);

Y2S_NAMESPACE_END

#endif  // Y2S_SEQNETS_HPP_
