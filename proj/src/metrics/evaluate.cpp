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
#include "y2s/evaluate.hpp"

#include "y2s/error.hpp"
#include "y2s/trainer.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

Embedding to_embedding(const Tensor& t) { return Embedding(t.values().begin(), t.values().end()); }

}  // namespace

Evaluation evaluate(ModelParams& params, const DatasetSplit& test, const Vocab& vocab,
                    int max_len) {
  if (test.shapes.empty()) fail("evaluate: empty test split");
  if (test.n_views != params.config.n_views || test.view_dim != params.config.view_dim) {
    fail_config("evaluate: test split has " + std::to_string(test.n_views) + " views of dim " +
                std::to_string(test.view_dim) + ", model expects " +
                std::to_string(params.config.n_views) + " of dim " +
                std::to_string(params.config.view_dim));
  }
  if (vocab.size() != params.config.vocab_size) {
    fail_config("evaluate: vocabulary size " + std::to_string(vocab.size()) +
                " does not match model vocab_size " + std::to_string(params.config.vocab_size));
  }
  const TrainingSet data = TrainingSet::from_split(test, vocab);

  std::vector<std::vector<int>> words;
  std::vector<int> caption_owner;
  for (const auto& p : data.pairs) {
    words.push_back(p.words);
    caption_owner.push_back(p.shape);
  }
  std::vector<Embedding> shape_emb;
  for (const Tensor& t : embed_shape_batch(params, data.view_mats)) {
    shape_emb.push_back(to_embedding(t));
  }
  std::vector<Embedding> text_emb;
  for (const Tensor& t : embed_text_batch(params, words)) text_emb.push_back(to_embedding(t));

  const int n_shapes = static_cast<int>(shape_emb.size());
  std::vector<std::vector<int>> captions_of(static_cast<std::size_t>(n_shapes));
  for (std::size_t c = 0; c < caption_owner.size(); ++c) {
    captions_of[static_cast<std::size_t>(caption_owner[c])].push_back(static_cast<int>(c));
  }

  Evaluation out;
  {
    auto orders = rank_retrieval(shape_emb, text_emb);
    std::vector<RankedResult> results;
    for (int s = 0; s < n_shapes; ++s) {
      results.push_back({std::move(orders[static_cast<std::size_t>(s)]),
                         captions_of[static_cast<std::size_t>(s)]});
    }
    out.report.s2t = retrieval_scores(results);
  }
  {
    auto orders = rank_retrieval(text_emb, shape_emb);
    std::vector<RankedResult> results;
    for (std::size_t c = 0; c < orders.size(); ++c) {
      results.push_back({std::move(orders[c]), {caption_owner[c]}});
    }
    out.report.t2s = retrieval_scores(results);
  }

  const auto generated = caption_batch(params, data.view_mats, max_len);
  std::vector<Sentence> candidates;
  std::vector<std::vector<Sentence>> references;
  for (int s = 0; s < n_shapes; ++s) {
    const std::string text = vocab.decode(generated[static_cast<std::size_t>(s)]);
    out.generated.push_back(text);
    candidates.push_back(tokenize(text));
    std::vector<Sentence> refs;
    for (const std::string& c : test.shapes[static_cast<std::size_t>(s)].captions) {
      refs.push_back(tokenize(c));
    }
    references.push_back(std::move(refs));
  }
  out.report.caption = caption_scores(candidates, references);
  return out;
}

Y2S_NAMESPACE_END
