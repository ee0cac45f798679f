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
#include "y2s/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "y2s/error.hpp"

namespace y2s {

namespace {

using GramCounts = std::map<std::string, int>;

GramCounts ngram_counts(const Sentence& s, int n) {
  GramCounts out;
  if (static_cast<int>(s.size()) < n) return out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i) {
    std::string g = s[i];
    for (int k = 1; k < n; ++k) {
      g += '\x1f';
      g += s[i + static_cast<std::size_t>(k)];
    }
    ++out[g];
  }
  return out;
}

std::size_t lcs_length(const Sentence& a, const Sentence& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<std::vector<int>> rank_retrieval(std::span<const Embedding> queries,
                                             std::span<const Embedding> gallery) {
  std::vector<std::vector<int>> out;
  out.reserve(queries.size());
  std::vector<std::pair<double, int>> scored(gallery.size());
  for (const Embedding& q : queries) {
    for (std::size_t g = 0; g < gallery.size(); ++g) {
      if (gallery[g].size() != q.size()) {
        fail("rank_retrieval: query dimension " + std::to_string(q.size()) +
             " vs gallery dimension " + std::to_string(gallery[g].size()));
      }
      double d = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double diff = q[k] - gallery[g][k];
        d += diff * diff;
      }
      scored[g] = {d, static_cast<int>(g)};
    }
    std::sort(scored.begin(), scored.end());
    std::vector<int> order;
    order.reserve(scored.size());
    for (const auto& s : scored) order.push_back(s.second);
    out.push_back(std::move(order));
  }
  return out;
}

double rr_at_k(std::span<const RankedResult> results, int k) {
  if (k < 1) fail("rr_at_k: k must be at least 1");
  if (results.empty()) return 0.0;
  int hits = 0;
  for (const RankedResult& r : results) {
    const std::size_t top = std::min(r.order.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < top; ++i) {
      if (std::binary_search(r.relevant.begin(), r.relevant.end(), r.order[i])) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

double ndcg_at_k(std::span<const RankedResult> results, int k) {
  if (k < 1) fail("ndcg_at_k: k must be at least 1");
  if (results.empty()) return 0.0;
  double total = 0.0;
  for (const RankedResult& r : results) {
    const std::size_t top = std::min(r.order.size(), static_cast<std::size_t>(k));
    double dcg = 0.0;
    for (std::size_t i = 0; i < top; ++i) {
      if (std::binary_search(r.relevant.begin(), r.relevant.end(), r.order[i])) {
        dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
      }
    }
    const std::size_t ideal_hits = std::min(r.relevant.size(), static_cast<std::size_t>(k));
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal_hits; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    if (idcg > 0.0) total += dcg / idcg;
  }
  return total / static_cast<double>(results.size());
}

double bleu(const Sentence& candidate, std::span<const Sentence> references, int n) {
  if (n < 1 || n > 4) fail("bleu: order must be in [1, 4]");
  if (references.empty()) fail("bleu: at least one reference required");
  if (candidate.empty()) return 0.0;
  double log_sum = 0.0;
  for (int order = 1; order <= n; ++order) {
    const GramCounts cand = ngram_counts(candidate, order);
    GramCounts max_ref;
    for (const Sentence& ref : references) {
      for (const auto& [g, c] : ngram_counts(ref, order)) max_ref[g] = std::max(max_ref[g], c);
    }
    int clipped = 0;
    int total = 0;
    for (const auto& [g, c] : cand) {
      total += c;
      auto it = max_ref.find(g);
      if (it != max_ref.end()) clipped += std::min(c, it->second);
    }
    if (total == 0 || clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) / total);
  }
  const auto c = static_cast<double>(candidate.size());
  double r = static_cast<double>(references.front().size());
  for (const Sentence& ref : references) {
    const auto len = static_cast<double>(ref.size());
    const double d = std::abs(len - c);
    const double best = std::abs(r - c);
    if (d < best || (d == best && len < r)) r = len;
  }
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * std::exp(log_sum / n);
}

double rouge_l(const Sentence& candidate, std::span<const Sentence> references, double beta) {
  if (references.empty()) fail("rouge_l: at least one reference required");
  if (candidate.empty()) return 0.0;
  double best = 0.0;
  const double b2 = beta * beta;
  for (const Sentence& ref : references) {
    if (ref.empty()) continue;
    const auto lcs = static_cast<double>(lcs_length(candidate, ref));
    if (lcs == 0.0) continue;
    const double p = lcs / static_cast<double>(candidate.size());
    const double r = lcs / static_cast<double>(ref.size());
    best = std::max(best, (1.0 + b2) * p * r / (r + b2 * p));
  }
  return best;
}

CiderScorer::CiderScorer(std::span<const std::vector<Sentence>> corpus) {
  if (corpus.empty()) fail("cider: empty reference corpus");
  log_corpus_size_ = std::log(static_cast<double>(corpus.size()));
  for (int n = 1; n <= 4; ++n) {
    std::map<std::string, int> df;
    for (const auto& refs : corpus) {
      std::set<std::string> grams;
      for (const Sentence& r : refs) {
        for (const auto& kv : ngram_counts(r, n)) grams.insert(kv.first);
      }
      for (const auto& g : grams) ++df[g];
    }
    df_sorted_[static_cast<std::size_t>(n - 1)].assign(df.begin(), df.end());
  }
}

int CiderScorer::doc_freq(int n, const std::string& gram) const {
  const auto& v = df_sorted_[static_cast<std::size_t>(n - 1)];
  auto it = std::lower_bound(v.begin(), v.end(), gram,
                             [](const auto& e, const std::string& g) { return e.first < g; });
  return it != v.end() && it->first == gram ? it->second : 0;
}

double CiderScorer::score(const Sentence& candidate, std::span<const Sentence> references) const {
  if (references.empty()) return 0.0;
  double total = 0.0;
  for (int n = 1; n <= 4; ++n) {
    auto tfidf = [&](const Sentence& s) {
      std::map<std::string, double> vec;
      const GramCounts counts = ngram_counts(s, n);
      int len = 0;
      for (const auto& kv : counts) len += kv.second;
      for (const auto& [g, c] : counts) {
        const double idf = log_corpus_size_ - std::log(std::max(1.0, double(doc_freq(n, g))));
        vec[g] = static_cast<double>(c) / len * idf;
      }
      return vec;
    };
    auto norm = [](const std::map<std::string, double>& v) {
      double s = 0.0;
      for (const auto& kv : v) s += kv.second * kv.second;
      return std::sqrt(s);
    };
    const auto cv = tfidf(candidate);
    const double cn = norm(cv);
    double sum_cos = 0.0;
    for (const Sentence& ref : references) {
      const auto rv = tfidf(ref);
      const double rn = norm(rv);
      if (cn == 0.0 || rn == 0.0) continue;
      double dot = 0.0;
      for (const auto& [g, w] : cv) {
        auto it = rv.find(g);
        if (it != rv.end()) dot += w * it->second;
      }
      sum_cos += dot / (cn * rn);
    }
    total += sum_cos / static_cast<double>(references.size());
  }
  return 10.0 * total / 4.0;
}

double cider(std::span<const Sentence> candidates,
             std::span<const std::vector<Sentence>> references) {
  if (candidates.size() != references.size()) {
    fail("cider: one reference set per candidate required");
  }
  if (candidates.empty()) return 0.0;
  const CiderScorer scorer(references);
  std::vector<double> scores;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores.push_back(scorer.score(candidates[i], references[i]));
  }
  return mean(scores);
}

RetrievalScores retrieval_scores(std::span<const RankedResult> results) {
  return RetrievalScores{rr_at_k(results, 1), rr_at_k(results, 5), ndcg_at_k(results, 5)};
}

CaptionScores caption_scores(std::span<const Sentence> candidates,
                             std::span<const std::vector<Sentence>> references) {
  if (candidates.size() != references.size()) {
    fail("caption_scores: one reference set per candidate required");
  }
  CaptionScores out;
  if (candidates.empty()) return out;
  for (int n = 1; n <= 4; ++n) {
    std::vector<double> v;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      v.push_back(bleu(candidates[i], references[i], n));
    }
    out.bleu[static_cast<std::size_t>(n - 1)] = mean(v);
  }
  std::vector<double> r;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    r.push_back(rouge_l(candidates[i], references[i]));
  }
  out.rouge_l = mean(r);
  out.cider = cider(candidates, references);
  return out;
}

namespace {

struct Row {
  std::string group;
  std::string metric;
  double (*get)(const EvalReport&);
};

const std::vector<Row>& report_rows() {
  static const std::vector<Row> rows = {
      {"S2T", "RR@1", [](const EvalReport& r) { return r.s2t.rr1; }},
      {"S2T", "RR@5", [](const EvalReport& r) { return r.s2t.rr5; }},
      {"S2T", "NDCG@5", [](const EvalReport& r) { return r.s2t.ndcg5; }},
      {"T2S", "RR@1", [](const EvalReport& r) { return r.t2s.rr1; }},
      {"T2S", "RR@5", [](const EvalReport& r) { return r.t2s.rr5; }},
      {"T2S", "NDCG@5", [](const EvalReport& r) { return r.t2s.ndcg5; }},
      {"Caption", "B-1", [](const EvalReport& r) { return r.caption.bleu[0]; }},
      {"Caption", "B-2", [](const EvalReport& r) { return r.caption.bleu[1]; }},
      {"Caption", "B-3", [](const EvalReport& r) { return r.caption.bleu[2]; }},
      {"Caption", "B-4", [](const EvalReport& r) { return r.caption.bleu[3]; }},
      {"Caption", "R", [](const EvalReport& r) { return r.caption.rouge_l; }},
      {"Caption", "C", [](const EvalReport& r) { return r.caption.cider; }},
  };
  return rows;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

}  // namespace

std::string report_csv(const EvalReport& r) {
  std::string out = "direction,metric,value\n";
  for (const Row& row : report_rows()) {
    out += row.group + "," + row.metric + "," + fmt(row.get(r)) + "\n";
  }
  out += "Caption,M,absent\n";
  return out;
}

std::string report_table(std::span<const std::pair<std::string, EvalReport>> columns) {
  const std::size_t w0 = 9;
  const std::size_t w1 = 8;
  std::size_t wc = 10;
  for (const auto& c : columns) wc = std::max(wc, c.first.size() + 2);
  std::string out = pad("", w0) + pad("Metrics", w1);
  for (const auto& c : columns) out += pad(c.first, wc);
  out += "\n";
  std::string last_group;
  for (const Row& row : report_rows()) {
    out += pad(row.group == last_group ? "" : row.group, w0) + pad(row.metric, w1);
    last_group = row.group;
    for (const auto& c : columns) out += pad(fmt(row.get(c.second)), wc);
    out += "\n";
  }
  out += pad("", w0) + pad("M", w1);
  for (std::size_t i = 0; i < columns.size(); ++i) out += pad("absent", wc);
  out += "\n";
  return out;
}

}  // namespace y2s
