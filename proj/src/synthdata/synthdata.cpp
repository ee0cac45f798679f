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
#include "y2s/synthdata.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "y2s/error.hpp"

namespace y2s {

namespace {

// Floats parse with strtof and print in shortest float round-trip form.
using fjson = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t,
                                   std::uint64_t, float>;

constexpr std::array<std::string_view, kMaxClasses> kClasses = {
    "cube", "sphere", "cylinder", "cone", "pyramid", "torus", "prism", "capsule"};
constexpr std::array<std::string_view, kColorCount> kColors = {
    "red", "green", "blue", "yellow", "white", "black", "purple", "orange"};
constexpr std::array<std::string_view, kSizeCount> kSizes = {"small", "medium", "large"};

// {S} size, {C} color, {K} class.
constexpr std::array<std::string_view, 6> kTemplates = {
    "a {S} {C} {K}",
    "the {K} is {C} and {S}",
    "a {C} {K} that is {S}",
    "this is a {S} {K} colored {C}",
    "a {K} in {C} with a {S} size",
    "{S} {C} {K} shape",
};

// Fixed stream tags for the generator's constant patterns.
constexpr std::uint64_t kPatternSeed = 0x5933534551ULL;
enum : std::uint64_t {
  kTagClass = 1,
  kTagColor,
  kTagSize,
  kTagAmplitude,
  kTagPhase,
  kTagNoise,
  kTagCombo,
  kTagInstance,
  kTagSplit,
  kTagTemplates,
};

std::vector<double> pattern(std::uint64_t tag, std::uint64_t id, int dim, double scale) {
  Rng rng(derive_seed(kPatternSeed, tag, id));
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

void check_spec(const ShapeSpec& s) {
  if (s.class_id < 0 || s.class_id >= kMaxClasses) fail("shape spec: class id out of range");
  if (s.color_id < 0 || s.color_id >= kColorCount) fail("shape spec: color id out of range");
  if (s.size_id < 0 || s.size_id >= kSizeCount) fail("shape spec: size id out of range");
}

int index_of(std::span<const std::string_view> names, std::string_view s) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == s) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

std::string_view class_name(int class_id) {
  if (class_id < 0 || class_id >= kMaxClasses) fail("class id out of range");
  return kClasses[static_cast<std::size_t>(class_id)];
}
std::string_view color_name(int color_id) {
  if (color_id < 0 || color_id >= kColorCount) fail("color id out of range");
  return kColors[static_cast<std::size_t>(color_id)];
}
std::string_view size_name(int size_id) {
  if (size_id < 0 || size_id >= kSizeCount) fail("size id out of range");
  return kSizes[static_cast<std::size_t>(size_id)];
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || std::ispunct(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Vocab::Vocab() {
  for (const char* t : {"<pad>", "<bos>", "<eos>", "<unk>"}) add(t);
}

void Vocab::add(const std::string& token) {
  if (index_.count(token)) fail("vocab: duplicate token '" + token + "'");
  index_.emplace(token, static_cast<int>(tokens_.size()));
  tokens_.push_back(token);
}

Vocab Vocab::from_grammar() {
  std::set<std::string> words;
  for (std::string_view t : kTemplates) {
    for (auto& w : tokenize(t)) {
      if (w != "s" && w != "c" && w != "k") words.insert(w);
    }
  }
  for (auto n : kClasses) words.emplace(n);
  for (auto n : kColors) words.emplace(n);
  for (auto n : kSizes) words.emplace(n);
  Vocab v;
  for (const auto& w : words) v.add(w);
  return v;
}

Vocab Vocab::from_captions(std::span<const std::string> captions) {
  std::set<std::string> words;
  for (const auto& c : captions) {
    for (auto& w : tokenize(c)) words.insert(std::move(w));
  }
  Vocab v;
  for (const auto& w : words) {
    if (!v.contains(w)) v.add(w);
  }
  return v;
}

Vocab Vocab::from_tokens(std::span<const std::string> tokens) {
  Vocab v;
  if (tokens.size() < 4) fail("vocab: reserved tokens missing");
  for (std::size_t i = 0; i < 4; ++i) {
    if (tokens[i] != v.tokens_[i]) fail("vocab: reserved token mismatch at id " + std::to_string(i));
  }
  for (std::size_t i = 4; i < tokens.size(); ++i) v.add(tokens[i]);
  return v;
}

int Vocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocab::contains(std::string_view token) const {
  return index_.count(std::string(token)) != 0;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || id >= size()) fail("vocab: id " + std::to_string(id) + " out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocab::encode(std::string_view text) const {
  std::vector<int> ids;
  for (const auto& w : tokenize(text)) ids.push_back(id(w));
  ids.push_back(kEos);
  return ids;
}

std::string Vocab::decode(std::span<const int> ids) const {
  std::string out;
  for (int i : ids) {
    if (i == kEos) break;
    if (i == kBos || i == kPad) continue;
    if (!out.empty()) out += ' ';
    out += token(i);
  }
  return out;
}

std::vector<float> view_features(const ShapeSpec& spec, int view_index, const SynthConfig& cfg) {
  check_spec(spec);
  if (view_index < 0 || view_index >= cfg.n_views) {
    fail("view_features: view index " + std::to_string(view_index) + " outside [0, " +
         std::to_string(cfg.n_views) + ")");
  }
  const int d = cfg.view_dim;
  const auto base = pattern(kTagClass, static_cast<std::uint64_t>(spec.class_id), d, 1.0);
  const auto color = pattern(kTagColor, static_cast<std::uint64_t>(spec.color_id), d, 0.6);
  const auto size = pattern(kTagSize, static_cast<std::uint64_t>(spec.size_id), d, 0.6);
  const auto amp = pattern(kTagAmplitude, static_cast<std::uint64_t>(spec.class_id), d, 0.5);
  const auto phase =
      pattern(kTagPhase, static_cast<std::uint64_t>(spec.class_id), d, std::numbers::pi);
  Rng noise(derive_seed(spec.instance_seed, kTagNoise, static_cast<std::uint64_t>(view_index)));
  const double angle = 2.0 * std::numbers::pi * view_index / cfg.n_views;
  std::vector<float> out(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double periodic = amp[k] * std::cos(angle + phase[k]);
    out[k] = static_cast<float>(base[k] + color[k] + size[k] + periodic +
                                cfg.noise * noise.normal());
  }
  return out;
}

int template_count() { return static_cast<int>(kTemplates.size()); }

std::string render_caption_text(const ShapeSpec& spec, int template_id) {
  check_spec(spec);
  if (template_id < 0 || template_id >= template_count()) fail("caption template out of range");
  std::string out;
  const std::string_view t = kTemplates[static_cast<std::size_t>(template_id)];
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '{' && i + 2 < t.size() && t[i + 2] == '}') {
      switch (t[i + 1]) {
        case 'S': out += size_name(spec.size_id); break;
        case 'C': out += color_name(spec.color_id); break;
        case 'K': out += class_name(spec.class_id); break;
        default: fail("caption template: bad placeholder");
      }
      i += 2;
    } else {
      out += t[i];
    }
  }
  return out;
}

Caption render_caption(const ShapeSpec& spec, int template_id, const Vocab& vocab) {
  Caption c;
  c.text = render_caption_text(spec, template_id);
  c.ids = vocab.encode(c.text);
  return c;
}

int DatasetSplit::n_classes() const {
  int n = 0;
  for (const auto& s : shapes) n = std::max(n, s.class_id + 1);
  return n;
}

Dataset gen_dataset(int n_per_class, int n_captions_per_shape, std::uint64_t seed,
                    const SynthConfig& cfg) {
  if (n_per_class < 2) fail("gen_dataset: need at least 2 shapes per class");
  if (n_captions_per_shape < 1) fail("gen_dataset: need at least one caption per shape");
  if (cfg.n_classes < 1 || cfg.n_classes > kMaxClasses) {
    fail("gen_dataset: class count must be in [1, " + std::to_string(kMaxClasses) + "]");
  }
  if (cfg.n_views < 1 || cfg.view_dim < 1) fail("gen_dataset: view shape must be positive");
  Dataset ds;
  ds.train.n_views = ds.test.n_views = cfg.n_views;
  ds.train.view_dim = ds.test.view_dim = cfg.view_dim;
  const int n_test = std::max(1, static_cast<int>(std::lround(0.2 * n_per_class)));
  for (int c = 0; c < cfg.n_classes; ++c) {
    const auto cu = static_cast<std::uint64_t>(c);
    std::vector<std::pair<int, int>> combos;
    for (int col = 0; col < kColorCount; ++col) {
      for (int sz = 0; sz < kSizeCount; ++sz) combos.emplace_back(col, sz);
    }
    Rng combo_rng(derive_seed(seed, kTagCombo, cu));
    combo_rng.shuffle(combos);
    std::vector<int> order(static_cast<std::size_t>(n_per_class));
    for (int k = 0; k < n_per_class; ++k) order[static_cast<std::size_t>(k)] = k;
    Rng split_rng(derive_seed(seed, kTagSplit, cu));
    split_rng.shuffle(order);
    std::vector<bool> is_test(static_cast<std::size_t>(n_per_class), false);
    for (int k = 0; k < n_test; ++k) is_test[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = true;

    for (int k = 0; k < n_per_class; ++k) {
      const auto ku = static_cast<std::uint64_t>(k);
      ShapeRecord rec;
      rec.id = static_cast<std::int64_t>(c) * n_per_class + k;
      rec.class_id = c;
      rec.has_spec = true;
      const auto& combo = combos[static_cast<std::size_t>(k) % combos.size()];
      rec.spec = ShapeSpec{c, combo.first, combo.second, derive_seed(seed, kTagInstance, cu, ku)};
      for (int i = 0; i < cfg.n_views; ++i) {
        const auto f = view_features(rec.spec, i, cfg);
        rec.views.insert(rec.views.end(), f.begin(), f.end());
      }
      std::vector<int> templates(static_cast<std::size_t>(template_count()));
      for (int t = 0; t < template_count(); ++t) templates[static_cast<std::size_t>(t)] = t;
      Rng tmpl_rng(derive_seed(seed, kTagTemplates, cu, ku));
      tmpl_rng.shuffle(templates);
      for (int j = 0; j < n_captions_per_shape; ++j) {
        rec.captions.push_back(
            render_caption_text(rec.spec, templates[static_cast<std::size_t>(j) % templates.size()]));
      }
      (is_test[static_cast<std::size_t>(k)] ? ds.test : ds.train).shapes.push_back(std::move(rec));
    }
  }
  return ds;
}

std::string to_jsonl(const DatasetSplit& split) {
  std::string out;
  for (const ShapeRecord& s : split.shapes) {
    fjson j;
    j["id"] = s.id;
    j["class"] = s.class_id;
    if (s.has_spec) {
      j["class_name"] = std::string(class_name(s.spec.class_id));
      j["color"] = std::string(color_name(s.spec.color_id));
      j["size"] = std::string(size_name(s.spec.size_id));
      j["seed"] = s.spec.instance_seed;
    }
    fjson views = fjson::array();
    for (int i = 0; i < split.n_views; ++i) {
      fjson row = fjson::array();
      for (int k = 0; k < split.view_dim; ++k) {
        row.push_back(s.views[static_cast<std::size_t>(i) * split.view_dim + k]);
      }
      views.push_back(std::move(row));
    }
    j["views"] = std::move(views);
    j["captions"] = s.captions;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void export_jsonl(const DatasetSplit& split, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail_io("cannot open " + path + " for writing");
  const std::string text = to_jsonl(split);
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) fail_io("write failed for " + path);
}

DatasetSplit parse_jsonl(std::string_view text, const std::string& source) {
  DatasetSplit split;
  std::unordered_set<std::int64_t> seen;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    fjson j;
    try {
      j = fjson::parse(line);
    } catch (const std::exception& e) {
      fail(where + "invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) fail(where + "expected a JSON object");
    for (const char* key : {"id", "class", "views"}) {
      if (!j.contains(key)) fail(where + "missing field '" + key + "'");
    }
    if (!j.contains("captions") || !j["captions"].is_array() || j["captions"].empty()) {
      fail(where + "missing captions");
    }
    ShapeRecord rec;
    try {
      rec.id = j["id"].get<std::int64_t>();
      rec.class_id = j["class"].get<int>();
    } catch (const std::exception&) {
      fail(where + "id and class must be integers");
    }
    if (rec.class_id < 0) fail(where + "class must be non-negative");
    if (!seen.insert(rec.id).second) fail(where + "duplicate shape id " + std::to_string(rec.id));
    const fjson& views = j["views"];
    if (!views.is_array() || views.empty()) fail(where + "views must be a non-empty array");
    const int n_views = static_cast<int>(views.size());
    for (const fjson& row : views) {
      if (!row.is_array() || row.empty()) fail(where + "each view must be a non-empty array");
      const int dim = static_cast<int>(row.size());
      if (split.view_dim == 0) split.view_dim = dim;
      if (dim != split.view_dim) {
        fail(where + "ragged view features: dimension " + std::to_string(dim) + " vs " +
             std::to_string(split.view_dim));
      }
      for (const fjson& x : row) {
        if (!x.is_number()) fail(where + "view features must be numbers");
        rec.views.push_back(x.get<float>());
      }
    }
    if (split.n_views == 0) split.n_views = n_views;
    if (n_views != split.n_views) {
      fail(where + "view count " + std::to_string(n_views) + " differs from " +
           std::to_string(split.n_views));
    }
    for (const fjson& c : j["captions"]) {
      if (!c.is_string() || c.get<std::string>().empty()) fail(where + "captions must be non-empty strings");
      rec.captions.push_back(c.get<std::string>());
    }
    if (j.contains("color") && j.contains("size") && j.contains("seed")) {
      const int color = index_of(kColors, j["color"].get<std::string>());
      const int size = index_of(kSizes, j["size"].get<std::string>());
      if (color >= 0 && size >= 0 && rec.class_id < kMaxClasses) {
        rec.has_spec = true;
        rec.spec = ShapeSpec{rec.class_id, color, size, j["seed"].get<std::uint64_t>()};
      }
    }
    split.shapes.push_back(std::move(rec));
  }
  if (split.shapes.empty()) fail(source + ": no shapes found");
  return split;
}

DatasetSplit import_features(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_io("cannot open dataset file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_jsonl(ss.str(), path);
}

std::vector<int> sample_negatives(std::span<const int> classes, Rng& rng) {
  std::vector<int> out;
  out.reserve(classes.size());
  for (std::size_t a = 0; a < classes.size(); ++a) {
    std::vector<int> candidates;
    for (std::size_t b = 0; b < classes.size(); ++b) {
      if (classes[b] != classes[a]) candidates.push_back(static_cast<int>(b));
    }
    if (candidates.empty()) {
      fail("sample_negatives: triplets need at least two classes in a batch");
    }
    out.push_back(candidates[static_cast<std::size_t>(rng.below(candidates.size()))]);
  }
  return out;
}

}  // namespace y2s
