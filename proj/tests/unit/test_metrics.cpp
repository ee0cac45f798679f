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
#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "unit/oracles.hpp"
#include "y2s/metrics.hpp"
#include "y2s/rng.hpp"
#include "y2s/synthdata.hpp"

using namespace y2s;

namespace {

Sentence words(const std::string& s) { return tokenize(s); }

std::vector<RankedResult> with_ranks(const std::vector<int>& ranks, int gallery) {
  // query q has its single relevant item at the given 1-based rank
  std::vector<RankedResult> out;
  for (int r : ranks) {
    RankedResult rr;
    for (int i = 0; i < gallery; ++i) rr.order.push_back(i);
    rr.relevant = {r - 1};
    out.push_back(rr);
  }
  return out;
}

// 20 captions over a small word pool, with two references each.
struct CaptionFixture {
  std::vector<Sentence> cands;
  std::vector<std::vector<Sentence>> refs;
};

CaptionFixture caption_fixture() {
  const std::vector<std::string> pool = {"a", "red", "blue", "cube", "small", "large", "shape",
                                         "the", "is", "green"};
  Rng rng(77);
  auto sentence = [&](int len) {
    Sentence s;
    for (int i = 0; i < len; ++i) s.push_back(pool[rng.below(pool.size())]);
    return s;
  };
  CaptionFixture f;
  for (int i = 0; i < 20; ++i) {
    f.cands.push_back(sentence(3 + static_cast<int>(rng.below(5))));
    f.refs.push_back({sentence(4 + static_cast<int>(rng.below(4))),
                      sentence(2 + static_cast<int>(rng.below(6)))});
  }
  // A few exact and partial matches so higher-order n-grams are non-zero.
  f.cands[0] = f.refs[0][0];
  f.cands[1] = f.refs[1][1];
  f.cands[2] = words("a red cube is the shape");
  f.refs[2] = {words("a red cube is a shape"), words("the red cube")};
  return f;
}

}  // namespace

TEST_CASE("rr_at_k") {
  CHECK(rr_at_k(with_ranks({1, 1, 1}, 8), 1) == 1.0);
  CHECK(rr_at_k(with_ranks({6, 7}, 8), 5) == 0.0);
  CHECK(rr_at_k(with_ranks({1, 3, 6, 2}, 8), 5) == doctest::Approx(0.75));
  RankedResult multi;
  multi.order = {4, 0, 2, 1, 3};
  multi.relevant = {1, 2};
  const std::vector<RankedResult> m = {multi};
  CHECK(rr_at_k(m, 2) == 0.0);
  CHECK(rr_at_k(m, 3) == 1.0);
}

TEST_CASE("ndcg_at_k") {
  CHECK(ndcg_at_k(with_ranks({1}, 5), 5) == doctest::Approx(1.0));
  CHECK(ndcg_at_k(with_ranks({2}, 5), 5) == doctest::Approx(1.0 / std::log2(3.0)));
  CHECK(ndcg_at_k(with_ranks({6}, 8), 5) == 0.0);
}

TEST_CASE("rank_retrieval") {
  const std::vector<Embedding> gallery = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}, {1.0, 0.0}};
  const std::vector<Embedding> q = {{1.0, 0.0}, {0.0, 1.9}};
  const auto r = rank_retrieval(q, gallery);
  CHECK(r[0] == std::vector<int>{1, 3, 0, 2});
  CHECK(r[1].front() == 2);
  const std::vector<Embedding> bad = {{1.0}};
  CHECK_THROWS(rank_retrieval(bad, gallery));

  Rng rng(3);
  std::vector<Embedding> qs(10, Embedding(4)), gs(10, Embedding(4));
  for (auto* set : {&qs, &gs}) {
    for (auto& e : *set) {
      for (double& v : e) v = rng.normal();
    }
  }
  const auto got = rank_retrieval(qs, gs);
  for (std::size_t i = 0; i < qs.size(); ++i) CHECK(got[i] == oracle::rank(qs[i], gs));
}

TEST_CASE("bleu") {
  const std::vector<Sentence> same = {words("a red cube")};
  for (int n = 1; n <= 3; ++n) CHECK(bleu(words("a red cube"), same, n) == doctest::Approx(1.0));
  const std::vector<Sentence> other = {words("x y")};
  CHECK(bleu(words("a b"), other, 1) == 0.0);
  const std::vector<Sentence> ab = {words("a b")};
  CHECK(bleu(words("a a b"), ab, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(bleu(Sentence{}, ab, 1) == 0.0);
  // Brevity: c = 2, r = 4 gives exp(1 - 2).
  const std::vector<Sentence> longer = {words("a b c d")};
  CHECK(bleu(words("a b"), longer, 1) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("rouge_l") {
  const std::vector<Sentence> same = {words("a b c")};
  CHECK(rouge_l(words("a b c"), same) == doctest::Approx(1.0));
  const std::vector<Sentence> disjoint = {words("x y")};
  CHECK(rouge_l(words("a b"), disjoint) == 0.0);
  // LCS 3, P = 3/4, R = 1.
  const double p = 0.75, r = 1.0, b2 = 1.44;
  const double f = (1 + b2) * p * r / (r + b2 * p);
  const std::vector<Sentence> acd = {words("a c d")};
  CHECK(rouge_l(words("a b c d"), acd) == doctest::Approx(f).epsilon(1e-12));
  CHECK(f == doctest::Approx(0.8798).epsilon(1e-4));
}

TEST_CASE("cider") {
  const std::vector<std::vector<Sentence>> corpus = {
      {words("a big red cube")}, {words("the blue ball here")}, {words("one green cone")}};
  const CiderScorer scorer(corpus);
  CHECK(scorer.score(words("a big red cube"), corpus[0]) == doctest::Approx(10.0));
  // No 4-grams in a three-word caption, so that order contributes 0.
  CHECK(scorer.score(words("one green cone"), corpus[2]) == doctest::Approx(7.5));
  CHECK(scorer.score(words("zig zag"), corpus[0]) == 0.0);

  const std::vector<Sentence> cands = {words("a red cube"), words("the blue cube"), words("green cone")};
  std::vector<oracle::Sent> oc(cands.begin(), cands.end());
  CHECK(cider(cands, corpus) == doctest::Approx(oracle::cider(oc, corpus)).epsilon(1e-12));
}

TEST_CASE("metrics match the brute-force oracles on a 20-item fixture") {
  const CaptionFixture f = caption_fixture();
  for (std::size_t i = 0; i < f.cands.size(); ++i) {
    for (int n = 1; n <= 4; ++n) {
      CHECK(std::abs(bleu(f.cands[i], f.refs[i], n) - oracle::bleu(f.cands[i], f.refs[i], n)) < 1e-9);
    }
    CHECK(std::abs(rouge_l(f.cands[i], f.refs[i]) - oracle::rouge_l(f.cands[i], f.refs[i])) < 1e-9);
  }
  CHECK(std::abs(cider(f.cands, f.refs) - oracle::cider(f.cands, f.refs)) < 1e-9);
  CHECK(bleu(f.cands[2], f.refs[2], 4) > 0.0);

  Rng rng(8);
  std::vector<Embedding> q(20, Embedding(3)), g(20, Embedding(3));
  for (auto* set : {&q, &g}) {
    for (auto& e : *set) {
      for (double& v : e) v = rng.normal();
    }
  }
  const auto orders = rank_retrieval(q, g);
  std::vector<RankedResult> results;
  std::vector<std::vector<int>> oo;
  std::vector<std::set<int>> rel;
  for (int i = 0; i < 20; ++i) {
    RankedResult r;
    r.order = orders[static_cast<std::size_t>(i)];
    r.relevant = {i, (i + 7) % 20};
    std::sort(r.relevant.begin(), r.relevant.end());
    results.push_back(r);
    oo.push_back(oracle::rank(q[static_cast<std::size_t>(i)], g));
    rel.push_back({i, (i + 7) % 20});
  }
  for (int k : {1, 5, 10}) {
    CHECK(std::abs(rr_at_k(results, k) - oracle::rr_at_k(oo, rel, k)) < 1e-9);
    CHECK(std::abs(ndcg_at_k(results, k) - oracle::ndcg_at_k(oo, rel, k)) < 1e-9);
  }
}

TEST_CASE("caption metrics ignore reference order") {
  const CaptionFixture f = caption_fixture();
  auto swapped = f.refs;
  for (auto& r : swapped) std::reverse(r.begin(), r.end());
  for (std::size_t i = 0; i < f.cands.size(); ++i) {
    CHECK(bleu(f.cands[i], f.refs[i], 4) == bleu(f.cands[i], swapped[i], 4));
    CHECK(rouge_l(f.cands[i], f.refs[i]) == rouge_l(f.cands[i], swapped[i]));
  }
  CHECK(cider(f.cands, f.refs) == doctest::Approx(cider(f.cands, swapped)).epsilon(1e-12));
}

TEST_CASE("report formats") {
  EvalReport r;
  r.s2t = {0.5, 0.75, 0.6};
  r.t2s = {0.25, 1.0, 0.5};
  r.caption.bleu = {0.9, 0.8, 0.7, 0.6};
  r.caption.rouge_l = 0.55;
  r.caption.cider = 3.25;
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("direction,metric,value\n", 0) == 0);
  CHECK(csv.find("S2T,RR@1,0.500000") != std::string::npos);
  CHECK(csv.find("T2S,RR@5,1.000000") != std::string::npos);
  CHECK(csv.find("Caption,B-4,0.600000") != std::string::npos);
  CHECK(csv.find("Caption,C,3.250000") != std::string::npos);
  CHECK(csv.find("Caption,M,absent") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 + 3 + 7);

  const std::vector<std::pair<std::string, EvalReport>> cols = {{"CY+C", r}, {"RP", EvalReport{}}};
  const std::string table = report_table(cols);
  CHECK(table.find("CY+C") != std::string::npos);
  CHECK(table.find("RP") != std::string::npos);
  CHECK(table.find("NDCG@5") != std::string::npos);
  CHECK(table.find("absent") != std::string::npos);
}
