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
#ifndef Y2S_METRICS_HPP_
#define Y2S_METRICS_HPP_

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace y2s {

using Embedding = std::vector<double>;
using Sentence = std::vector<std::string>;

struct RankedResult {
  std::vector<int> order;     // gallery indices, nearest first
  std::vector<int> relevant;  // ground-truth gallery indices, sorted
};

// Euclidean ranking of the gallery for each query; ties go to the lower
// gallery index.
std::vector<std::vector<int>> rank_retrieval(std::span<const Embedding> queries,
                                             std::span<const Embedding> gallery);

// Fraction of queries with at least one relevant item in the top k.
double rr_at_k(std::span<const RankedResult> results, int k);
// Mean binary-relevance NDCG@k with log2(i + 1) discount.
double ndcg_at_k(std::span<const RankedResult> results, int k);

// Sentence BLEU-n: clipped n-gram precisions (clip = max count over
// references), uniform geometric mean over orders 1..n, brevity penalty
// against the closest reference length.
double bleu(const Sentence& candidate, std::span<const Sentence> references, int n);

// LCS-based F-measure, best over references.
double rouge_l(const Sentence& candidate, std::span<const Sentence> references,
               double beta = 1.2);

// CIDEr with document frequencies from a corpus of reference sets: TF-IDF
// n-gram cosine averaged over references, mean over n = 1..4, times 10.
class CiderScorer {
 public:
  explicit CiderScorer(std::span<const std::vector<Sentence>> corpus);

  double score(const Sentence& candidate, std::span<const Sentence> references) const;

 private:
  std::array<std::vector<std::pair<std::string, int>>, 4> df_sorted_;
  double log_corpus_size_ = 0.0;

  int doc_freq(int n, const std::string& gram) const;
};

// Mean CIDEr over candidates; the corpus is the list of reference sets.
double cider(std::span<const Sentence> candidates,
             std::span<const std::vector<Sentence>> references);

struct RetrievalScores {
  double rr1 = 0.0;
  double rr5 = 0.0;
  double ndcg5 = 0.0;
};

struct CaptionScores {
  std::array<double, 4> bleu{};
  double rouge_l = 0.0;
  double cider = 0.0;
};

struct EvalReport {
  RetrievalScores s2t;
  RetrievalScores t2s;
  CaptionScores caption;
};

RetrievalScores retrieval_scores(std::span<const RankedResult> results);
CaptionScores caption_scores(std::span<const Sentence> candidates,
                             std::span<const std::vector<Sentence>> references);

// direction,metric,value rows; METEOR is listed as absent.
std::string report_csv(const EvalReport& r);
// Aligned table: retrieval directions as row groups, metrics as rows, one
// column per labelled report.
std::string report_table(std::span<const std::pair<std::string, EvalReport>> columns);

}  // namespace y2s

#endif  // Y2S_METRICS_HPP_
