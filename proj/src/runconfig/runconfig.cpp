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
#include "y2s/runconfig.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "y2s/error.hpp"

namespace y2s {

namespace {

constexpr unsigned kData = kCmdGenData | kCmdImport | kCmdTrain | kCmdEval | kCmdCaption;
constexpr unsigned kWeights = kCmdTrain | kCmdGradCheck;

const char* const kWeightNames[8] = {"alpha", "beta", "gamma", "delta",
                                     "phi",   "varphi", "psi", "mu"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_int(std::string_view s, long long& out) {
  const char* end = s.data() + s.size();
  auto r = std::from_chars(s.data(), end, out);
  return r.ec == std::errc() && r.ptr == end && !s.empty();
}

bool parse_real(std::string_view s, double& out) {
  if (s.empty()) return false;
  std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size() && std::isfinite(out);
}

bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no" || s == "off") {
    out = false;
    return true;
  }
  return false;
}

// Shortest text that parses back to the same double.
std::string fmt_real(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

bool in_choices(const char* choices, std::string_view v) {
  std::string_view c(choices);
  while (!c.empty()) {
    const auto bar = c.find('|');
    if (c.substr(0, bar) == v) return true;
    if (bar == std::string_view::npos) break;
    c.remove_prefix(bar + 1);
  }
  return false;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "gen-data") return kCmdGenData;
  if (name == "import") return kCmdImport;
  if (name == "train") return kCmdTrain;
  if (name == "eval") return kCmdEval;
  if (name == "caption") return kCmdCaption;
  if (name == "grad-check") return kCmdGradCheck;
  return std::nullopt;
}

const std::vector<KeyInfo>& key_registry() {
  using K = KeyKind;
  static const std::vector<KeyInfo> keys = {
      {"data", "dir", "data-dir", K::kString, kData, "", "dataset directory (train.jsonl, test.jsonl)"},
      {"data", "classes", "classes", K::kInt, kCmdGenData, "", "number of synthetic classes (2-8)"},
      {"data", "per_class", "per-class", K::kInt, kCmdGenData, "", "shapes per class"},
      {"data", "captions", "captions", K::kInt, kCmdGenData, "", "captions per shape"},
      {"data", "views", "views", K::kInt, kCmdGenData, "", "views per shape"},
      {"data", "view_dim", "view-dim", K::kInt, kCmdGenData, "", "per-view feature size"},
      {"data", "noise", "noise", K::kReal, kCmdGenData, "", "per-instance feature noise"},
      {"data", "import_train", "import-train", K::kString, kCmdImport, "", "JSON-lines training split to import"},
      {"data", "import_test", "import-test", K::kString, kCmdImport, "", "JSON-lines test split to import"},
      {"model", "hidden", "hidden", K::kInt, kCmdTrain, "", "GRU hidden size"},
      {"model", "embed", "embed", K::kInt, kCmdTrain, "", "word embedding size"},
      {"train", "mode", "mode", K::kChoice, kWeights, "rec|pre|rp|cs|ct|cy", "decoder arrangement"},
      {"train", "constraints", "constraints", K::kChoice, kWeights, "none|c1|c1c2|c", "constraint set"},
      {"train", "preset", "preset", K::kChoice, kWeights, "prim|shap", "balance-weight preset"},
      {"train", "alpha", "alpha", K::kReal, kWeights, "", "weight of view reconstruction"},
      {"train", "beta", "beta", K::kReal, kWeights, "", "weight of shape-to-word prediction"},
      {"train", "gamma", "gamma", K::kReal, kWeights, "", "weight of word reconstruction"},
      {"train", "delta", "delta", K::kReal, kWeights, "", "weight of word-to-view prediction"},
      {"train", "phi", "phi", K::kReal, kWeights, "", "weight of the class constraint"},
      {"train", "varphi", "varphi", K::kReal, kWeights, "", "weight of the triplet constraint"},
      {"train", "psi", "psi", K::kReal, kWeights, "", "weight of the joint-embedding constraint"},
      {"train", "mu", "mu", K::kReal, kWeights, "", "triplet margin"},
      {"train", "optimizer", "optimizer", K::kChoice, kCmdTrain, "adam|sgd", "optimizer"},
      {"train", "lr", "lr", K::kReal, kCmdTrain, "", "learning rate"},
      {"train", "beta1", "adam-beta1", K::kReal, kCmdTrain, "", "Adam first-moment decay"},
      {"train", "beta2", "adam-beta2", K::kReal, kCmdTrain, "", "Adam second-moment decay"},
      {"train", "eps", "adam-eps", K::kReal, kCmdTrain, "", "Adam epsilon"},
      {"train", "epochs", "epochs", K::kInt, kCmdTrain, "", "passes over all training pairs"},
      {"train", "batch_size", "batch-size", K::kInt, kCmdTrain, "", "pairs per step"},
      {"train", "strict_triplet", "strict-triplet", K::kBool, kWeights, "", "use the triplet hinge with the negative distance added"},
      {"train", "record_time", "record-time", K::kBool, kCmdTrain, "", "write wall-clock seconds to the log"},
      {"train", "checkpoint", "checkpoint", K::kString, kCmdTrain | kCmdEval | kCmdCaption, "", "checkpoint path"},
      {"train", "log", "log", K::kString, kCmdTrain, "", "training log CSV path"},
      {"eval", "max_len", "max-len", K::kInt, kCmdEval | kCmdCaption, "", "maximum generated caption length"},
      {"eval", "report", "report", K::kString, kCmdEval, "", "report path prefix (.csv and .txt)"},
      {"eval", "shapes", "shapes", K::kString, kCmdCaption, "", "comma-separated shape ids (default: all)"},
      {"eval", "split", "split", K::kChoice, kCmdCaption, "train|test", "split the shape ids refer to"},
      {"gradcheck", "tolerance", "tolerance", K::kReal, kCmdGradCheck, "", "maximum relative error"},
      {"gradcheck", "precision", "precision", K::kChoice, kCmdGradCheck, "double|float", "arithmetic of the check"},
      {"gradcheck", "inject_fault", "inject-fault", K::kBool, kCmdGradCheck, "", "flip the sigmoid backward rule (self-test of the checker)"},
      {"run", "seed", "seed", K::kInt, kCmdAll, "", "master seed"},
      {"run", "force", "force", K::kBool, kCmdGenData | kCmdImport | kCmdTrain | kCmdEval, "", "overwrite existing outputs"},
  };
  return keys;
}

std::string dotted_name(const KeyInfo& k) { return std::string(k.section) + "." + k.name; }

const KeyInfo* find_key(std::string_view dotted) {
  for (const KeyInfo& k : key_registry()) {
    if (dotted_name(k) == dotted) return &k;
  }
  return nullptr;
}

const KeyInfo* find_flag(std::string_view flag) {
  for (const KeyInfo& k : key_registry()) {
    if (flag == k.flag) return &k;
  }
  return nullptr;
}

BalanceWeights RunConfig::weights() const {
  BalanceWeights w = preset_weights(preset).value_or(prim_weights());
  double* fields[8] = {&w.alpha, &w.beta, &w.gamma, &w.delta, &w.phi, &w.varphi, &w.psi, &w.mu};
  for (int i = 0; i < 8; ++i) {
    if (weight_override[i]) *fields[i] = *weight_override[i];
  }
  return w;
}

void RunConfig::set(const KeyInfo& key, std::string_view raw, std::vector<std::string>& errors) {
  const std::string value = trim(raw);
  const std::string name = dotted_name(key);
  auto bad = [&](const char* what) {
    errors.push_back(name + ": " + what + ", got '" + value + "'");
  };
  long long i = 0;
  double r = 0.0;
  bool b = false;
  switch (key.kind) {
    case KeyKind::kInt:
      if (!parse_int(value, i)) return bad("expected an integer");
      if (name != "run.seed" && (i < -2147483647LL || i > 2147483647LL)) {
        return bad("integer out of range");
      }
      break;
    case KeyKind::kReal:
      if (!parse_real(value, r)) return bad("expected a finite number");
      break;
    case KeyKind::kBool:
      if (!parse_bool(value, b)) return bad("expected true or false");
      break;
    case KeyKind::kChoice:
      if (!in_choices(key.choices, value)) {
        errors.push_back(name + ": expected one of " + key.choices + ", got '" + value + "'");
        return;
      }
      break;
    case KeyKind::kString:
      break;
  }
  const int n = static_cast<int>(i);
  if (name == "data.dir") data_dir = value;
  else if (name == "data.classes") synth.n_classes = n;
  else if (name == "data.per_class") per_class = n;
  else if (name == "data.captions") captions = n;
  else if (name == "data.views") synth.n_views = n;
  else if (name == "data.view_dim") synth.view_dim = n;
  else if (name == "data.noise") synth.noise = r;
  else if (name == "data.import_train") import_train = value;
  else if (name == "data.import_test") import_test = value;
  else if (name == "model.hidden") hidden_dim = n;
  else if (name == "model.embed") word_embed_dim = n;
  else if (name == "train.mode") train.mode = *parse_mode(value);
  else if (name == "train.constraints") train.constraints = *parse_constraints(value);
  else if (name == "train.preset") preset = value;
  else if (name == "train.optimizer")
    train.optimizer = value == "sgd" ? OptimizerKind::kSgd : OptimizerKind::kAdam;
  else if (name == "train.lr") train.learning_rate = r;
  else if (name == "train.beta1") train.adam_beta1 = r;
  else if (name == "train.beta2") train.adam_beta2 = r;
  else if (name == "train.eps") train.adam_eps = r;
  else if (name == "train.epochs") train.epochs = n;
  else if (name == "train.batch_size") train.batch_size = n;
  else if (name == "train.strict_triplet") train.strict_triplet = b;
  else if (name == "train.record_time") train.record_time = b;
  else if (name == "train.checkpoint") checkpoint = value;
  else if (name == "train.log") log = value;
  else if (name == "eval.max_len") max_len = n;
  else if (name == "eval.report") report = value;
  else if (name == "eval.shapes") shapes = value;
  else if (name == "eval.split") split = value;
  else if (name == "gradcheck.tolerance") tolerance = r;
  else if (name == "gradcheck.precision") precision = value;
  else if (name == "gradcheck.inject_fault") inject_fault = b;
  else if (name == "run.seed") {
    if (i < 0) return bad("expected a non-negative integer");
    train.seed = static_cast<std::uint64_t>(i);
  } else if (name == "run.force") force = b;
  else {
    for (int w = 0; w < 8; ++w) {
      if (name == std::string("train.") + kWeightNames[w]) {
        weight_override[w] = r;
        return;
      }
    }
    errors.push_back(name + ": no setter");
  }
}

std::string RunConfig::get(const KeyInfo& key) const {
  const std::string name = dotted_name(key);
  const BalanceWeights w = weights();
  const double wv[8] = {w.alpha, w.beta, w.gamma, w.delta, w.phi, w.varphi, w.psi, w.mu};
  for (int i = 0; i < 8; ++i) {
    if (name == std::string("train.") + kWeightNames[i]) return fmt_real(wv[i]);
  }
  auto tf = [](bool v) { return std::string(v ? "true" : "false"); };
  if (name == "data.dir") return data_dir;
  if (name == "data.classes") return std::to_string(synth.n_classes);
  if (name == "data.per_class") return std::to_string(per_class);
  if (name == "data.captions") return std::to_string(captions);
  if (name == "data.views") return std::to_string(synth.n_views);
  if (name == "data.view_dim") return std::to_string(synth.view_dim);
  if (name == "data.noise") return fmt_real(synth.noise);
  if (name == "data.import_train") return import_train;
  if (name == "data.import_test") return import_test;
  if (name == "model.hidden") return std::to_string(hidden_dim);
  if (name == "model.embed") return std::to_string(word_embed_dim);
  if (name == "train.mode") return std::string(to_string(train.mode));
  if (name == "train.constraints") return std::string(to_string(train.constraints));
  if (name == "train.preset") return preset;
  if (name == "train.optimizer") return train.optimizer == OptimizerKind::kSgd ? "sgd" : "adam";
  if (name == "train.lr") return fmt_real(train.learning_rate);
  if (name == "train.beta1") return fmt_real(train.adam_beta1);
  if (name == "train.beta2") return fmt_real(train.adam_beta2);
  if (name == "train.eps") return fmt_real(train.adam_eps);
  if (name == "train.epochs") return std::to_string(train.epochs);
  if (name == "train.batch_size") return std::to_string(train.batch_size);
  if (name == "train.strict_triplet") return tf(train.strict_triplet);
  if (name == "train.record_time") return tf(train.record_time);
  if (name == "train.checkpoint") return checkpoint;
  if (name == "train.log") return log;
  if (name == "eval.max_len") return std::to_string(max_len);
  if (name == "eval.report") return report;
  if (name == "eval.shapes") return shapes;
  if (name == "eval.split") return split;
  if (name == "gradcheck.tolerance") return fmt_real(tolerance);
  if (name == "gradcheck.precision") return precision;
  if (name == "gradcheck.inject_fault") return tf(inject_fault);
  if (name == "run.seed") return std::to_string(train.seed);
  if (name == "run.force") return tf(force);
  fail("config: no getter for " + name);
}

std::string RunConfig::to_text() const {
  std::string out;
  std::string section;
  for (const KeyInfo& k : key_registry()) {
    if (section != k.section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += std::string(k.name) + " = " + get(k) + "\n";
  }
  return out;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_config_text(RunConfig& cfg, std::string_view text, const std::string& source) {
  std::vector<std::string> errors;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        errors.push_back(where + "malformed section header '" + s + "'");
        continue;
      }
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      bool known = false;
      for (const KeyInfo& k : key_registry()) known = known || section == k.section;
      if (!known) errors.push_back(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (section.empty()) {
      errors.push_back(where + "key '" + key + "' outside any section");
      continue;
    }
    const KeyInfo* info = find_key(section + "." + key);
    if (info == nullptr) {
      errors.push_back(where + "unknown key '" + key + "' in [" + section + "]");
      continue;
    }
    std::vector<std::string> errs;
    cfg.set(*info, value, errs);
    for (auto& e : errs) errors.push_back(where + e);
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  - " + e;
    fail_config(msg);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail_io("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

void validate(const RunConfig& cfg, Command cmd) {
  std::vector<std::string> p;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) p.push_back(msg);
  };
  if (cmd != kCmdGradCheck) need(!cfg.data_dir.empty(), "data.dir must not be empty");
  if (cmd == kCmdGenData) {
    need(cfg.synth.n_classes >= 2 && cfg.synth.n_classes <= kMaxClasses,
         "data.classes must be in [2, " + std::to_string(kMaxClasses) + "]");
    need(cfg.per_class >= 2,
         "data.per_class must be at least 2 (each class needs a training and a test shape)");
    need(cfg.per_class <= kColorCount * kSizeCount * 2,
         "data.per_class must be at most " + std::to_string(kColorCount * kSizeCount * 2));
    need(cfg.captions >= 1 && cfg.captions <= template_count(),
         "data.captions must be in [1, " + std::to_string(template_count()) + "]");
    need(cfg.synth.n_views >= 1, "data.views must be positive");
    need(cfg.synth.view_dim >= 1, "data.view_dim must be positive");
    need(cfg.synth.noise >= 0.0, "data.noise must be non-negative");
  }
  if (cmd == kCmdImport) {
    need(!cfg.import_train.empty(), "data.import_train is required");
    need(!cfg.import_test.empty(), "data.import_test is required");
  }
  if (cmd == kCmdTrain) {
    need(cfg.hidden_dim >= 1, "model.hidden must be positive");
    need(cfg.word_embed_dim >= 1, "model.embed must be positive");
    need(cfg.train.learning_rate > 0.0, "train.lr must be positive");
    need(cfg.train.epochs >= 0, "train.epochs must be non-negative");
    need(cfg.train.batch_size >= 1, "train.batch_size must be positive");
    need(!(uses_c2(cfg.train.constraints) && cfg.train.batch_size < 2),
         "train.batch_size must be at least 2 with the triplet constraint");
    need(cfg.train.adam_beta1 >= 0.0 && cfg.train.adam_beta1 < 1.0,
         "train.beta1 must be in [0, 1)");
    need(cfg.train.adam_beta2 >= 0.0 && cfg.train.adam_beta2 < 1.0,
         "train.beta2 must be in [0, 1)");
    need(cfg.train.adam_eps > 0.0, "train.eps must be positive");
    need(!cfg.checkpoint.empty(), "train.checkpoint must not be empty");
    need(!cfg.log.empty(), "train.log must not be empty");
  }
  if (cmd == kCmdTrain || cmd == kCmdGradCheck) {
    const BalanceWeights w = cfg.weights();
    const double wv[8] = {w.alpha, w.beta, w.gamma, w.delta, w.phi, w.varphi, w.psi, w.mu};
    for (int i = 0; i < 8; ++i) {
      need(wv[i] >= 0.0, std::string("train.") + kWeightNames[i] + " must be non-negative");
    }
  }
  if (cmd == kCmdEval || cmd == kCmdCaption) {
    need(cfg.max_len >= 1, "eval.max_len must be positive");
    need(!cfg.checkpoint.empty(), "train.checkpoint must not be empty");
  }
  if (cmd == kCmdEval) need(!cfg.report.empty(), "eval.report must not be empty");
  if (cmd == kCmdGradCheck) need(cfg.tolerance > 0.0, "gradcheck.tolerance must be positive");
  if (!p.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : p) msg += "\n  - " + e;
    fail_config(msg);
  }
}

std::string manifest_text(const RunConfig& cfg, std::string_view command) {
  std::string out = "# y2seq run manifest\n";
  out += "command = " + std::string(command) + "\n";
  out += "seed = " + std::to_string(cfg.train.seed) + "\n";
  out += "config_hash = " + cfg.hash() + "\n\n";
  out += cfg.to_text();
  return out;
}

}  // namespace y2s
