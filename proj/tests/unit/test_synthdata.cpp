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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "y2s/error.hpp"
#include "y2s/synthdata.hpp"

using namespace y2s;

namespace {

int find_id(std::string_view (*name)(int), int count, std::string_view want) {
  for (int i = 0; i < count; ++i) {
    if (name(i) == want) return i;
  }
  return -1;
}

std::string record_line(int id, const std::string& views, const std::string& captions) {
  return "{\"id\":" + std::to_string(id) + ",\"class\":0,\"views\":" + views +
         ",\"captions\":" + captions + "}\n";
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on punctuation") {
  CHECK(tokenize("A Large, red CUBE.") == std::vector<std::string>{"a", "large", "red", "cube"});
  CHECK(tokenize("  ") .empty());
  CHECK(tokenize("it's-red") == std::vector<std::string>{"it", "s", "red"});
}

TEST_CASE("vocabulary") {
  const Vocab v = Vocab::from_grammar();
  CHECK(v.token(Vocab::kPad) == "<pad>");
  CHECK(v.token(Vocab::kBos) == "<bos>");
  CHECK(v.token(Vocab::kEos) == "<eos>");
  CHECK(v.token(Vocab::kUnk) == "<unk>");
  CHECK(v.id("zebra") == Vocab::kUnk);
  const auto ids = v.encode("a large red cube");
  CHECK(ids.back() == Vocab::kEos);
  CHECK(v.decode(ids) == "a large red cube");
  CHECK(Vocab::from_tokens(v.tokens()) == v);
}

TEST_CASE("caption rendering") {
  ShapeSpec s;
  s.class_id = find_id(class_name, kMaxClasses, "cube");
  s.color_id = find_id(color_name, kColorCount, "red");
  s.size_id = find_id(size_name, kSizeCount, "large");
  REQUIRE(s.class_id >= 0);
  REQUIRE(s.color_id >= 0);
  REQUIRE(s.size_id >= 0);
  const Vocab v = Vocab::from_grammar();
  const Caption c = render_caption(s, 0, v);
  CHECK(c.text == "a large red cube");
  const std::vector<int> want = {v.id("a"), v.id("large"), v.id("red"), v.id("cube"), Vocab::kEos};
  CHECK(c.ids == want);
  CHECK(render_caption(s, 0, v).ids == c.ids);
  CHECK_THROWS_AS(render_caption(s, template_count(), v), Error);
}

TEST_CASE("every grammar caption tokenizes without unknown words") {
  const Vocab v = Vocab::from_grammar();
  int checked = 0;
  for (int k = 0; k < kMaxClasses; ++k) {
    for (int c = 0; c < kColorCount; ++c) {
      for (int s = 0; s < kSizeCount; ++s) {
        for (int t = 0; t < template_count(); ++t) {
          const Caption cap = render_caption(ShapeSpec{k, c, s, 0}, t, v);
          for (int id : cap.ids) CHECK(id != Vocab::kUnk);
          ++checked;
        }
      }
    }
  }
  CHECK(checked == kMaxClasses * kColorCount * kSizeCount * template_count());
}

TEST_CASE("view features are deterministic and attribute-sensitive") {
  const SynthConfig cfg;
  const ShapeSpec a{1, 2, 0, 77};
  CHECK(view_features(a, 3, cfg) == view_features(a, 3, cfg));
  CHECK(view_features(a, 3, cfg).size() == static_cast<std::size_t>(cfg.view_dim));
  ShapeSpec b = a;
  b.color_id = 5;
  const auto fa = view_features(a, 0, cfg);
  const auto fb = view_features(b, 0, cfg);
  double d = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) d += (fa[i] - fb[i]) * (fa[i] - fb[i]);
  CHECK(d > 0.0);
  CHECK_THROWS_AS(view_features(a, cfg.n_views, cfg), Error);
  CHECK_THROWS_AS(view_features(a, -1, cfg), Error);
}

TEST_CASE("gen_dataset layout") {
  SynthConfig cfg;
  const Dataset ds = gen_dataset(20, 5, 7, cfg);
  CHECK(ds.train.shapes.size() == 6 * 16);
  CHECK(ds.test.shapes.size() == 6 * 4);
  CHECK(ds.train.n_classes() == 6);
  CHECK(ds.train.n_views == 12);
  CHECK(ds.train.view_dim == 64);
  std::set<std::int64_t> ids;
  for (const auto* split : {&ds.train, &ds.test}) {
    std::set<std::string> caps;
    for (const auto& r : split->shapes) {
      CHECK(r.captions.size() == 5);
      CHECK(r.views.size() == 12u * 64u);
      CHECK(ids.insert(r.id).second);
      for (const auto& c : r.captions) CHECK(caps.insert(c).second);
    }
  }
  CHECK_THROWS_AS(gen_dataset(1, 5, 7, cfg), Error);
}

TEST_CASE("gen_dataset is a pure function of its inputs") {
  SynthConfig cfg;
  cfg.n_classes = 3;
  const Dataset a = gen_dataset(5, 2, 11, cfg);
  const Dataset b = gen_dataset(5, 2, 11, cfg);
  CHECK(to_jsonl(a.train) == to_jsonl(b.train));
  CHECK(to_jsonl(a.test) == to_jsonl(b.test));
  const Dataset c = gen_dataset(5, 2, 12, cfg);
  CHECK(to_jsonl(a.train) != to_jsonl(c.train));
}

TEST_CASE("export then import gives an equal dataset") {
  SynthConfig cfg;
  cfg.n_classes = 4;
  cfg.view_dim = 9;
  const Dataset ds = gen_dataset(6, 3, 5, cfg);
  const std::string path = (std::filesystem::temp_directory_path() / "y2s_unit_split.jsonl").string();
  export_jsonl(ds.train, path);
  const DatasetSplit back = import_features(path);
  CHECK(back == ds.train);
  CHECK(to_jsonl(back) == to_jsonl(ds.train));
  std::filesystem::remove(path);
}

TEST_CASE("import errors are descriptive") {
  auto message = [](const std::string& text) {
    try {
      parse_jsonl(text, "fixture");
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string ok = record_line(1, "[[1,2],[3,4]]", "[\"a red cube\"]");
  CHECK(parse_jsonl(ok).shapes.size() == 1);
  CHECK(message(record_line(1, "[[1,2],[3]]", "[\"x\"]")).find("ragged") != std::string::npos);
  CHECK(message(ok + record_line(2, "[[1,2,3],[4,5,6]]", "[\"x\"]")).find("dimension") != std::string::npos);
  CHECK(message(record_line(1, "[[1,2],[3,4]]", "[]")).find("caption") != std::string::npos);
  CHECK(message("{\"id\":1,\"class\":0,\"views\":[[1]]}\n").find("caption") != std::string::npos);
  CHECK(message(ok + ok).find("duplicate") != std::string::npos);
  CHECK(message(ok + record_line(2, "[[1,2]]", "[\"x\"]")).find("view count") != std::string::npos);
  CHECK(message("{nope\n").find("fixture:1") != std::string::npos);
  CHECK_THROWS_AS(import_features("/nonexistent/y2s.jsonl"), Error);
}

TEST_CASE("negative sampling") {
  Rng rng(3);
  const std::vector<int> classes = {0, 1, 0, 1};
  const auto neg = sample_negatives(classes, rng);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    CHECK(classes[static_cast<std::size_t>(neg[i])] != classes[i]);
  }
  Rng r1(9), r2(9);
  const std::vector<int> mixed = {0, 1, 2, 2, 1, 0, 3};
  CHECK(sample_negatives(mixed, r1) == sample_negatives(mixed, r2));
  const std::vector<int> single = {2, 2, 2};
  CHECK_THROWS_AS(sample_negatives(single, rng), Error);
}

TEST_CASE("negative classes are drawn uniformly over other-class rows") {
  // Anchor of class 0; other rows: one of class 1 and two of class 2, so a
  // uniform row draw picks class 2 twice as often as class 1.
  const std::vector<int> classes = {0, 1, 2, 2};
  Rng rng(2024);
  const int draws = 10000;
  std::map<int, int> counts;
  for (int i = 0; i < draws; ++i) counts[classes[static_cast<std::size_t>(sample_negatives(classes, rng)[0])]]++;
  const double p1 = 1.0 / 3.0;
  const double expected = draws * p1;
  const double sigma = std::sqrt(draws * p1 * (1 - p1));
  CHECK(std::abs(counts[1] - expected) < 3 * sigma);
  CHECK(std::abs(counts[2] - 2 * expected) < 3 * sigma);
}
