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
// Command-line front end. Every option maps to one configuration key; the
// values are handed to the library as text so the file and the flags share
// one parser.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "y2seq/y2seq.h"

namespace {

constexpr int kExitConfig = 2;

const char* const kCommands[][2] = {
    {"gen-data", "generate the synthetic dataset"},
    {"import", "import externally computed view features"},
    {"train", "train a model and write a checkpoint and log"},
    {"eval", "retrieval and captioning report on the test split"},
    {"caption", "greedy captions next to the ground truth"},
    {"grad-check", "finite-difference check of every gradient"},
};

struct Key {
  y2seq_key_info info;
  std::size_t index;
};

std::vector<Key> all_keys() {
  std::vector<Key> keys;
  for (std::size_t i = 0; i < y2seq_key_count(); ++i) {
    Key k{};
    k.index = i;
    if (y2seq_key_at(i, &k.info) == Y2SEQ_OK) keys.push_back(k);
  }
  return keys;
}

std::string key_table(const std::vector<Key>& keys) {
  std::string out = "Configuration keys and their flags:\n";
  for (const Key& k : keys) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-24s --%s\n", k.info.key, k.info.flag);
    out += buf;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Key> keys = all_keys();

  CLI::App app{"Joint shape and text embeddings from coupled sequence-to-sequence models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", y2seq_version());
  app.footer(key_table(keys));

  std::string config_path;
  // values[command][flag] holds the text of each flag given.
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, CLI::App*> subs;

  for (const auto& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd[0], cmd[1]);
    subs[cmd[0]] = sub;
    sub->add_option("--config", config_path, "configuration file ([section] key = value)");
    for (const Key& k : keys) {
      if (!y2seq_key_applies(k.index, cmd[0])) continue;
      std::string& slot = values[cmd[0]][k.info.flag];
      std::string help = k.info.help;
      if (k.info.choices[0] != '\0') help += " {" + std::string(k.info.choices) + "}";
      help += " [" + std::string(k.info.key) + ", default: " + k.info.default_value + "]";
      CLI::Option* opt = nullptr;
      if (k.info.kind == Y2SEQ_KEY_BOOL) {
        opt = sub->add_flag("--" + std::string(k.info.flag) + "{true}", slot, help);
      } else {
        opt = sub->add_option("--" + std::string(k.info.flag), slot, help);
      }
      options[cmd[0]][k.info.flag] = opt;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }

  y2seq_config* cfg = nullptr;
  if (y2seq_config_create(&cfg) != Y2SEQ_OK) {
    std::fprintf(stderr, "error: %s\n", y2seq_last_error());
    return 1;
  }
  int status = Y2SEQ_OK;
  if (!config_path.empty()) {
    status = y2seq_config_load_file(cfg, config_path.c_str());
    if (status != Y2SEQ_OK) {
      std::fprintf(stderr, "error: %s\n", y2seq_last_error());
      y2seq_config_free(cfg);
      return status;
    }
  }
  std::string problems;
  for (const Key& k : keys) {
    auto it = options[command].find(k.info.flag);
    if (it == options[command].end() || it->second->count() == 0) continue;
    if (y2seq_config_set(cfg, k.info.key, values[command][k.info.flag].c_str()) != Y2SEQ_OK) {
      std::string msg = y2seq_last_error();
      const std::string prefix = "invalid configuration:\n";
      if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
      problems += msg + "\n";
    }
  }
  if (!problems.empty()) {
    std::fprintf(stderr, "error: invalid configuration:\n%s", problems.c_str());
    y2seq_config_free(cfg);
    return kExitConfig;
  }

  status = y2seq_run(cfg, command.c_str());
  if (status != Y2SEQ_OK) std::fprintf(stderr, "error: %s\n", y2seq_last_error());
  y2seq_config_free(cfg);
  return status;
}
