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
#ifndef Y2S_SYNTHDATA_HPP_
#define Y2S_SYNTHDATA_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "y2s/rng.hpp"

namespace y2s {

inline constexpr int kMaxClasses = 8;
inline constexpr int kColorCount = 8;
inline constexpr int kSizeCount = 3;

std::string_view class_name(int class_id);
std::string_view color_name(int color_id);
std::string_view size_name(int size_id);

struct SynthConfig {
  int n_classes = 6;
  int n_views = 12;
  int view_dim = 64;
  double noise = 0.1;  // std-dev of the per-instance noise

  bool operator==(const SynthConfig&) const = default;
};

struct ShapeSpec {
  int class_id = 0;
  int color_id = 0;
  int size_id = 0;
  std::uint64_t instance_seed = 0;

  bool operator==(const ShapeSpec&) const = default;
};

// Lowercases and splits on whitespace and punctuation.
std::vector<std::string> tokenize(std::string_view text);

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;

  Vocab();
  // Every word the caption grammar can produce.
  static Vocab from_grammar();
  // Sorted unique tokens of the given captions.
  static Vocab from_captions(std::span<const std::string> captions);
  // Tokens in id order, including the reserved ones.
  static Vocab from_tokens(std::span<const std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  int id(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Token ids followed by eos.
  std::vector<int> encode(std::string_view text) const;
  // Joins tokens with single spaces; stops at eos, skips bos and pad.
  std::string decode(std::span<const int> ids) const;

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  void add(const std::string& token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct Caption {
  std::vector<int> ids;  // ends with eos
  std::string text;
};

// Deterministic per-view feature of a synthetic shape: a class pattern plus
// color and size offsets, a smooth periodic term in the view angle and small
// per-instance noise.
std::vector<float> view_features(const ShapeSpec& spec, int view_index, const SynthConfig& cfg);

int template_count();
std::string render_caption_text(const ShapeSpec& spec, int template_id);
Caption render_caption(const ShapeSpec& spec, int template_id, const Vocab& vocab);

struct ShapeRecord {
  std::int64_t id = 0;
  int class_id = 0;
  bool has_spec = false;  // synthetic records carry their attributes
  ShapeSpec spec;
  std::vector<float> views;  // n_views * view_dim, view-major
  std::vector<std::string> captions;

  bool operator==(const ShapeRecord&) const = default;
};

struct DatasetSplit {
  int n_views = 0;
  int view_dim = 0;
  std::vector<ShapeRecord> shapes;

  int n_classes() const;
  bool operator==(const DatasetSplit&) const = default;
};

struct Dataset {
  DatasetSplit train;
  DatasetSplit test;
};

// n_per_class shapes per class, 80/20 shape-level split per class. Within a
// class, (color, size) combinations are drawn without replacement until
// exhausted so that shapes of one split have distinct descriptions.
Dataset gen_dataset(int n_per_class, int n_captions_per_shape, std::uint64_t seed,
                    const SynthConfig& cfg);

// JSON lines: one shape per line with id, class, views (n_views arrays of
// view_dim floats) and captions; synthetic shapes add color, size and seed.
std::string to_jsonl(const DatasetSplit& split);
void export_jsonl(const DatasetSplit& split, const std::string& path);
DatasetSplit parse_jsonl(std::string_view text, const std::string& source = "<memory>");
DatasetSplit import_features(const std::string& path);

// For each anchor, the batch index of a negative drawn uniformly from rows of
// a different class.
std::vector<int> sample_negatives(std::span<const int> classes, Rng& rng);

}  // namespace y2s

#endif  // Y2S_SYNTHDATA_HPP_
