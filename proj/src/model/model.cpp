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
#include "y2s/model.hpp"

#include <algorithm>
#include <cmath>

#include "y2s/error.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

constexpr int kPadId = 0;

WordDecoderParams renamed_copy(const WordDecoderParams& src, const std::string& from,
                               const std::string& to) {
  WordDecoderParams out = src;
  for (Parameter* p : out.parameters()) p->name.replace(0, from.size(), to);
  return out;
}

ViewDecoderParams renamed_copy(const ViewDecoderParams& src, const std::string& from,
                               const std::string& to) {
  ViewDecoderParams out = src;
  for (Parameter* p : out.parameters()) p->name.replace(0, from.size(), to);
  return out;
}

void check_mode_fits(const ModelParams& params, AblationMode mode) {
  if (mode == AblationMode::kRP && !params.decoupled()) {
    fail("forward: mode rp needs separate text-branch decoders");
  }
  if (mode_is_coupled(mode) && params.decoupled()) {
    fail("forward: mode " + std::string(to_string(mode)) +
         " shares decoders but the model has separate text-branch decoders");
  }
}

Tensor as_row(const Tensor& t) { return Tensor({1, t.cols()}, t.storage()); }

std::vector<Tensor> rows_of(const Tensor& t) {
  std::vector<Tensor> out;
  for (int r = 0; r < t.rows(); ++r) out.push_back(t.row(r));
  return out;
}

Tensor stack_views(std::span<const Tensor> views) {
  if (views.empty()) fail("expected at least one view");
  const int d = views.front().cols();
  std::vector<Real> data;
  for (const Tensor& v : views) {
    if (v.size() != static_cast<std::size_t>(d)) fail("views must share one dimension");
    data.insert(data.end(), v.storage().begin(), v.storage().end());
  }
  return Tensor({static_cast<int>(views.size()), d}, std::move(data));
}

std::vector<Tensor> values_of(const Tape& tape, const std::vector<Var>& vars) {
  std::vector<Tensor> out;
  for (const Var& v : vars) out.push_back(tape.value(v).row(0));
  return out;
}

}  // namespace

bool needs_decoupled_decoders(AblationMode mode) { return mode == AblationMode::kRP; }

ModelParams ModelParams::zeros(const ModelConfig& config, bool decoupled) {
  validate(config);
  ModelParams p;
  p.config = config;
  const int h = config.hidden_dim;
  p.view_encoder = GruParams::zeros("view_encoder", config.view_dim, h);
  p.word_encoder = GruParams::zeros("word_encoder", config.word_embed_dim, h);
  p.embed_table = Parameter("embed_table", Tensor({config.vocab_size, config.word_embed_dim}));
  p.word_decoder =
      WordDecoderParams::zeros("word_decoder", config.word_embed_dim, h, config.vocab_size);
  p.view_decoder = ViewDecoderParams::zeros("view_decoder", config.view_dim, h);
  p.classifier_w = Parameter("classifier_w", Tensor({config.n_classes, h}));
  p.classifier_b = Parameter("classifier_b", Tensor({config.n_classes}));
  if (decoupled) {
    p.word_decoder_t = renamed_copy(p.word_decoder, "word_decoder", "word_decoder_t");
    p.view_decoder_t = renamed_copy(p.view_decoder, "view_decoder", "view_decoder_t");
  }
  return p;
}

ModelParams ModelParams::create(const ModelConfig& config, bool decoupled, std::uint64_t seed) {
  ModelParams p = zeros(config, false);
  Rng rng(derive_seed(seed, 0x6d6f64656cULL));
  const double k = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  for (Parameter* q : p.parameters()) init_uniform(*q, k, rng);
  if (decoupled) {
    p.word_decoder_t = renamed_copy(p.word_decoder, "word_decoder", "word_decoder_t");
    p.view_decoder_t = renamed_copy(p.view_decoder, "view_decoder", "view_decoder_t");
  }
  return p;
}

WordDecoderParams& ModelParams::word_decoder_for(Branch b) {
  if (b == Branch::kText && word_decoder_t) return *word_decoder_t;
  return word_decoder;
}

ViewDecoderParams& ModelParams::view_decoder_for(Branch b) {
  if (b == Branch::kText && view_decoder_t) return *view_decoder_t;
  return view_decoder;
}

std::vector<Parameter*> ModelParams::parameters() {
  std::vector<Parameter*> out = view_encoder.parameters();
  auto append = [&out](std::vector<Parameter*> more) {
    out.insert(out.end(), more.begin(), more.end());
  };
  append(word_encoder.parameters());
  out.push_back(&embed_table);
  append(word_decoder.parameters());
  append(view_decoder.parameters());
  out.push_back(&classifier_w);
  out.push_back(&classifier_b);
  if (word_decoder_t) append(word_decoder_t->parameters());
  if (view_decoder_t) append(view_decoder_t->parameters());
  return out;
}

std::vector<const Parameter*> ModelParams::parameters() const {
  auto mutable_list = const_cast<ModelParams*>(this)->parameters();
  return {mutable_list.begin(), mutable_list.end()};
}

void ModelParams::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

PairBatch PairBatch::from_pairs(std::span<const Tensor> view_mats,
                                std::span<const std::vector<int>> words,
                                std::span<const int> classes) {
  if (view_mats.empty()) fail("PairBatch: empty batch");
  if (view_mats.size() != words.size() || words.size() != classes.size()) {
    fail("PairBatch: views, words and classes must have equal counts");
  }
  const int n_views = view_mats.front().rows();
  const int dim = view_mats.front().cols();
  const int batch = static_cast<int>(view_mats.size());
  PairBatch out;
  out.views.assign(static_cast<std::size_t>(n_views), Tensor({batch, dim}));
  for (int b = 0; b < batch; ++b) {
    const Tensor& m = view_mats[static_cast<std::size_t>(b)];
    if (m.rows() != n_views || m.cols() != dim) {
      fail("PairBatch: view matrix " + m.shape_str() + " differs from " +
           view_mats.front().shape_str());
    }
    for (int i = 0; i < n_views; ++i) {
      std::copy_n(m.data() + static_cast<std::ptrdiff_t>(i) * dim, dim,
                  out.views[static_cast<std::size_t>(i)].data() +
                      static_cast<std::ptrdiff_t>(b) * dim);
    }
  }
  out.words.assign(words.begin(), words.end());
  out.classes.assign(classes.begin(), classes.end());
  return out;
}

Var embed_shapes(Tape& tape, ModelParams& params, std::span<const Tensor> view_steps) {
  const ModelConfig& cfg = params.config;
  if (static_cast<int>(view_steps.size()) != cfg.n_views) {
    fail("embed_shape: expected " + std::to_string(cfg.n_views) + " views, got " +
         std::to_string(view_steps.size()));
  }
  std::vector<Var> inputs;
  for (const Tensor& v : view_steps) {
    if (v.cols() != cfg.view_dim) {
      fail("embed_shape: view feature " + v.shape_str() + " does not have dimension " +
           std::to_string(cfg.view_dim));
    }
    inputs.push_back(tape.constant(v.rank() == 1 ? as_row(v) : v));
  }
  return encode_sequence(tape, params.view_encoder, inputs);
}

Var embed_texts(Tape& tape, ModelParams& params, std::span<const std::vector<int>> words) {
  if (words.empty()) fail("embed_text: empty batch");
  std::size_t longest = 0;
  std::vector<int> lengths;
  for (const auto& w : words) {
    if (w.empty()) fail("embed_text: empty token sequence");
    for (int id : w) {
      if (id < 0 || id >= params.config.vocab_size) {
        fail("embed_text: token id " + std::to_string(id) + " outside vocabulary of " +
             std::to_string(params.config.vocab_size));
      }
    }
    longest = std::max(longest, w.size());
    lengths.push_back(static_cast<int>(w.size()));
  }
  const Var table = tape.param(params.embed_table);
  std::vector<Var> inputs;
  for (std::size_t j = 0; j < longest; ++j) {
    std::vector<int> ids;
    for (const auto& w : words) ids.push_back(j < w.size() ? w[j] : kPadId);
    inputs.push_back(embedding(table, ids));
  }
  return encode_sequence(tape, params.word_encoder, inputs, lengths);
}

Var classify(Tape& tape, ModelParams& params, Var features) {
  return add_bias(matmul_nt(features, tape.param(params.classifier_w)),
                  tape.param(params.classifier_b));
}

ForwardVars forward(Tape& tape, ModelParams& params, const PairBatch& batch,
                    AblationMode mode) {
  check_mode_fits(params, mode);
  ForwardVars out;
  out.f_s = embed_shapes(tape, params, batch.views);
  out.f_t = embed_texts(tape, params, batch.words);
  const Var table = tape.param(params.embed_table);
  out.tokens = StepTokens::teacher_forced(batch.words, params.word_decoder.bos);
  const ModeTerms terms = mode_terms(mode);
  const int n_views = params.config.n_views;
  if (terms.v2v) {
    out.recon_views = view_decode(tape, params.view_decoder_for(Branch::kShape), out.f_s, n_views);
  }
  if (terms.v2w) {
    out.pred_word_logits = word_decode_teacher_forced(
        tape, params.word_decoder_for(Branch::kShape), table, out.f_s, out.tokens);
  }
  if (terms.w2w) {
    out.recon_word_logits = word_decode_teacher_forced(
        tape, params.word_decoder_for(Branch::kText), table, out.f_t, out.tokens);
  }
  if (terms.w2v) {
    out.pred_views = view_decode(tape, params.view_decoder_for(Branch::kText), out.f_t, n_views);
  }
  if (terms.v2v || terms.w2v) {
    for (const Tensor& v : batch.views) out.gt_views.push_back(tape.constant(v));
  }
  out.class_logits_s = classify(tape, params, out.f_s);
  out.class_logits_t = classify(tape, params, out.f_t);
  return out;
}

Tensor embed_shape(ModelParams& params, std::span<const Tensor> views) {
  Tape tape;
  return tape.value(embed_shapes(tape, params, views)).row(0);
}

Tensor embed_text(ModelParams& params, std::span<const int> words) {
  Tape tape;
  const std::vector<std::vector<int>> batch{std::vector<int>(words.begin(), words.end())};
  return tape.value(embed_texts(tape, params, batch)).row(0);
}

ForwardOutputs forward_pair(ModelParams& params, std::span<const Tensor> views,
                            std::span<const int> words, AblationMode mode) {
  const Tensor mat = stack_views(views);
  const std::vector<std::vector<int>> w{std::vector<int>(words.begin(), words.end())};
  const std::vector<int> cls{0};
  const PairBatch batch = PairBatch::from_pairs(std::span<const Tensor>(&mat, 1), w, cls);
  Tape tape;
  const ForwardVars fv = forward(tape, params, batch, mode);
  ForwardOutputs out;
  out.f_s = tape.value(fv.f_s).row(0);
  out.f_t = tape.value(fv.f_t).row(0);
  const ModeTerms terms = mode_terms(mode);
  if (terms.v2v) out.recon_views = values_of(tape, fv.recon_views);
  if (terms.v2w) out.pred_word_logits = values_of(tape, fv.pred_word_logits);
  if (terms.w2w) out.recon_word_logits = values_of(tape, fv.recon_word_logits);
  if (terms.w2v) out.pred_views = values_of(tape, fv.pred_views);
  out.class_logits_s = tape.value(fv.class_logits_s).row(0);
  out.class_logits_t = tape.value(fv.class_logits_t).row(0);
  return out;
}

std::vector<int> caption(ModelParams& params, std::span<const Tensor> views, int max_len) {
  const Tensor f = embed_shape(params, views);
  return word_decode_greedy(params.word_decoder_for(Branch::kShape), params.embed_table,
                            as_row(f), max_len)
      .front();
}

std::vector<Tensor> embed_shape_batch(ModelParams& params, std::span<const Tensor> view_mats,
                                      int chunk) {
  std::vector<Tensor> out;
  for (std::size_t begin = 0; begin < view_mats.size(); begin += static_cast<std::size_t>(chunk)) {
    const std::size_t end = std::min(view_mats.size(), begin + static_cast<std::size_t>(chunk));
    const auto part = view_mats.subspan(begin, end - begin);
    const std::vector<std::vector<int>> dummy_words(part.size(), std::vector<int>{0});
    const std::vector<int> dummy_classes(part.size(), 0);
    const PairBatch batch = PairBatch::from_pairs(part, dummy_words, dummy_classes);
    Tape tape;
    const Tensor f = tape.value(embed_shapes(tape, params, batch.views));
    for (Tensor& r : rows_of(f)) out.push_back(std::move(r));
  }
  return out;
}

std::vector<Tensor> embed_text_batch(ModelParams& params,
                                     std::span<const std::vector<int>> words, int chunk) {
  std::vector<Tensor> out;
  for (std::size_t begin = 0; begin < words.size(); begin += static_cast<std::size_t>(chunk)) {
    const std::size_t end = std::min(words.size(), begin + static_cast<std::size_t>(chunk));
    Tape tape;
    const Tensor f = tape.value(embed_texts(tape, params, words.subspan(begin, end - begin)));
    for (Tensor& r : rows_of(f)) out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<int>> caption_batch(ModelParams& params,
                                            std::span<const Tensor> view_mats, int max_len,
                                            int chunk) {
  std::vector<std::vector<int>> out;
  const std::vector<Tensor> feats = embed_shape_batch(params, view_mats, chunk);
  for (std::size_t begin = 0; begin < feats.size(); begin += static_cast<std::size_t>(chunk)) {
    const std::size_t end = std::min(feats.size(), begin + static_cast<std::size_t>(chunk));
    std::vector<Real> data;
    for (std::size_t i = begin; i < end; ++i) {
      data.insert(data.end(), feats[i].storage().begin(), feats[i].storage().end());
    }
    const Tensor f({static_cast<int>(end - begin), params.config.hidden_dim}, std::move(data));
    auto caps = word_decode_greedy(params.word_decoder_for(Branch::kShape), params.embed_table,
                                   f, max_len);
    for (auto& c : caps) out.push_back(std::move(c));
  }
  return out;
}

Y2S_NAMESPACE_END
