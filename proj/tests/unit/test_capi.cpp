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
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "y2seq/y2seq.h"

namespace fs = std::filesystem;

namespace {

void collect(const char* text, void* user) { *static_cast<std::string*>(user) += text; }

struct Session {
  y2seq_config* cfg = nullptr;
  std::string output;
  fs::path dir;

  explicit Session(const std::string& name) {
    dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    REQUIRE(y2seq_config_create(&cfg) == Y2SEQ_OK);
    y2seq_config_set_output(cfg, collect, &output);
    const std::vector<std::pair<const char*, std::string>> small = {
        {"data.dir", (dir / "data").string()},
        {"classes", "2"},
        {"per-class", "3"},
        {"captions", "2"},
        {"views", "3"},
        {"view-dim", "4"},
        {"hidden", "6"},
        {"embed", "4"},
        {"epochs", "2"},
        {"batch-size", "4"},
        {"record-time", "false"},
        {"checkpoint", (dir / "model.ckpt").string()},
        {"log", (dir / "log.csv").string()},
        {"report", (dir / "report").string()},
        {"max-len", "6"},
    };
    for (const auto& [k, v] : small) REQUIRE(y2seq_config_set(cfg, k, v.c_str()) == Y2SEQ_OK);
  }
  ~Session() {
    y2seq_config_free(cfg);
    fs::remove_all(dir);
  }
};

}  // namespace

TEST_CASE("key registry through the C API") {
  const size_t n = y2seq_key_count();
  CHECK(n > 30);
  y2seq_key_info info;
  REQUIRE(y2seq_key_at(0, &info) == Y2SEQ_OK);
  CHECK(std::string(info.key).find('.') != std::string::npos);
  CHECK(y2seq_key_at(n, &info) == Y2SEQ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(y2seq_last_error()).size() > 0);
  bool any_train = false;
  for (size_t i = 0; i < n; ++i) any_train = any_train || y2seq_key_applies(i, "train");
  CHECK(any_train);
  CHECK(std::string(y2seq_version()).size() > 0);
}

TEST_CASE("config set and get by key or flag") {
  y2seq_config* cfg = nullptr;
  REQUIRE(y2seq_config_create(&cfg) == Y2SEQ_OK);
  CHECK(y2seq_config_set(cfg, "train.lr", "0.5") == Y2SEQ_OK);
  CHECK(std::string(y2seq_config_get(cfg, "lr")) == "0.5");
  CHECK(y2seq_config_set(cfg, "adam-beta1", "0.8") == Y2SEQ_OK);
  CHECK(std::string(y2seq_config_get(cfg, "train.beta1")) == "0.8");
  CHECK(y2seq_config_set(cfg, "train.warp", "1") == Y2SEQ_ERR_CONFIG);
  CHECK(std::string(y2seq_last_error()).find("warp") != std::string::npos);
  CHECK(y2seq_config_set(cfg, "epochs", "many") == Y2SEQ_ERR_CONFIG);
  CHECK(y2seq_config_load_file(cfg, "/nonexistent/y2seq.cfg") == Y2SEQ_ERR_IO);
  CHECK(std::string(y2seq_config_text(cfg)).find("[train]") != std::string::npos);
  CHECK(y2seq_run(cfg, "dance") == Y2SEQ_ERR_INVALID_ARGUMENT);
  y2seq_config_free(cfg);
}

TEST_CASE("commands end to end in a temporary directory") {
  Session s("y2seq_capi_unit");
  REQUIRE(y2seq_cmd_gen_data(s.cfg) == Y2SEQ_OK);
  CHECK(fs::exists(s.dir / "data" / "train.jsonl"));
  CHECK(fs::exists(s.dir / "data" / "manifest.txt"));

  CHECK(y2seq_cmd_gen_data(s.cfg) == Y2SEQ_ERR_IO);
  CHECK(std::string(y2seq_last_error()).find("--force") != std::string::npos);
  REQUIRE(y2seq_config_set(s.cfg, "force", "true") == Y2SEQ_OK);
  CHECK(y2seq_cmd_gen_data(s.cfg) == Y2SEQ_OK);

  REQUIRE(y2seq_cmd_train(s.cfg) == Y2SEQ_OK);
  CHECK(fs::exists(s.dir / "model.ckpt"));
  CHECK(fs::exists(s.dir / "log.csv"));
  REQUIRE(y2seq_cmd_eval(s.cfg) == Y2SEQ_OK);
  CHECK(fs::exists(s.dir / "report.csv"));
  CHECK(s.output.find("RR@1") != std::string::npos);

  REQUIRE(y2seq_config_set(s.cfg, "shapes", "999999") == Y2SEQ_OK);
  CHECK(y2seq_cmd_caption(s.cfg) == Y2SEQ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(y2seq_last_error()).find("999999") != std::string::npos);
  REQUIRE(y2seq_config_set(s.cfg, "shapes", "") == Y2SEQ_OK);
  CHECK(y2seq_cmd_caption(s.cfg) == Y2SEQ_OK);

  y2seq_model* model = nullptr;
  REQUIRE(y2seq_model_load((s.dir / "model.ckpt").string().c_str(), &model) == Y2SEQ_OK);
  CHECK(y2seq_model_n_views(model) == 3);
  CHECK(y2seq_model_view_dim(model) == 4);
  REQUIRE(y2seq_model_embedding_dim(model) == 6);
  std::vector<float> views(12, 0.25f);
  std::vector<float> emb(6);
  CHECK(y2seq_model_embed_shape(model, views.data(), views.size(), emb.data(), emb.size()) == Y2SEQ_OK);
  CHECK(y2seq_model_embed_shape(model, views.data(), 5, emb.data(), emb.size()) ==
        Y2SEQ_ERR_INVALID_ARGUMENT);
  CHECK(y2seq_model_embed_text(model, "a red cube", emb.data(), emb.size()) == Y2SEQ_OK);
  CHECK(y2seq_model_embed_text(model, "a red cube", emb.data(), 2) == Y2SEQ_ERR_INVALID_ARGUMENT);
  CHECK(y2seq_model_caption(model, views.data(), views.size(), 5) != nullptr);
  y2seq_model_free(model);
  CHECK(y2seq_model_load((s.dir / "missing.ckpt").string().c_str(), &model) == Y2SEQ_ERR_IO);
}

TEST_CASE("grad check passes and catches an injected fault") {
  y2seq_config* cfg = nullptr;
  REQUIRE(y2seq_config_create(&cfg) == Y2SEQ_OK);
  std::string out;
  y2seq_config_set_output(cfg, collect, &out);
  CHECK(y2seq_cmd_grad_check(cfg) == Y2SEQ_OK);
  CHECK(out.find("PASS") != std::string::npos);
  REQUIRE(y2seq_config_set(cfg, "inject-fault", "true") == Y2SEQ_OK);
  CHECK(y2seq_cmd_grad_check(cfg) == Y2SEQ_ERR_NUMERIC);
  y2seq_config_free(cfg);
}
