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
#ifndef Y2S_RUNCONFIG_HPP_
#define Y2S_RUNCONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "y2s/config.hpp"
#include "y2s/synthdata.hpp"

namespace y2s {

// Subcommands a key applies to (bit mask).
enum Command : unsigned {
  kCmdGenData = 1u << 0,
  kCmdImport = 1u << 1,
  kCmdTrain = 1u << 2,
  kCmdEval = 1u << 3,
  kCmdCaption = 1u << 4,
  kCmdGradCheck = 1u << 5,
  kCmdAll = 0x3fu,
};

std::optional<Command> parse_command(std::string_view name);

enum class KeyKind { kInt, kReal, kBool, kString, kChoice };

struct KeyInfo {
  const char* section;
  const char* name;  // key inside its section
  const char* flag;  // long option without dashes
  KeyKind kind;
  unsigned commands;
  const char* choices;  // "|"-separated for kChoice
  const char* help;
};

// Every configuration key. Keys and flags are in one-to-one correspondence.
const std::vector<KeyInfo>& key_registry();
const KeyInfo* find_key(std::string_view dotted);  // "section.name"
const KeyInfo* find_flag(std::string_view flag);
std::string dotted_name(const KeyInfo& k);

struct RunConfig {
  // [data]
  std::string data_dir = "data";
  SynthConfig synth;
  int per_class = 20;
  int captions = 5;
  std::string import_train;
  std::string import_test;
  // [model]
  int hidden_dim = 128;
  int word_embed_dim = 512;
  // [train]
  TrainConfig train;
  std::string preset = "prim";
  std::string checkpoint = "model.ckpt";
  std::string log = "train_log.csv";
  // [eval]
  int max_len = 20;
  std::string report = "report";
  std::string shapes;  // caption: comma-separated shape ids, empty = all test shapes
  std::string split = "test";
  // [gradcheck]
  double tolerance = 1e-3;
  std::string precision = "double";
  bool inject_fault = false;
  // [run]
  bool force = false;

  // Resolves the preset, then applies explicitly set weight keys.
  BalanceWeights weights() const;

  // Sets one key from text; appends a message to `errors` on failure.
  void set(const KeyInfo& key, std::string_view value, std::vector<std::string>& errors);
  std::string get(const KeyInfo& key) const;

  // Canonical text form: every key in registry order, grouped by section.
  std::string to_text() const;
  // FNV-1a 64 of to_text(), hex.
  std::string hash() const;

  std::optional<double> weight_override[8];
};

// Parses "[section]" headers, "key = value" lines, '#' or ';' comments.
// Unknown sections or keys and malformed values are collected; throws a
// config error listing all of them.
void apply_config_text(RunConfig& cfg, std::string_view text, const std::string& source);
void apply_config_file(RunConfig& cfg, const std::string& path);

// Checks cross-field constraints for a command; throws a config error
// listing every violation.
void validate(const RunConfig& cfg, Command cmd);

// seed, config hash and the canonical config.
std::string manifest_text(const RunConfig& cfg, std::string_view command);

}  // namespace y2s

#endif  // Y2S_RUNCONFIG_HPP_
