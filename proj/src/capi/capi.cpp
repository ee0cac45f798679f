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
#include "y2seq/y2seq.h"

#include <cstdio>
#include <new>
#include <string>

#include "commands.hpp"
#include "y2s/error.hpp"
#include "y2s/model.hpp"
#include "y2s/synthdata.hpp"

struct y2seq_config {
  y2s::RunConfig cfg;
  std::string scratch;
  y2seq_output_fn out_fn = nullptr;
  void* out_user = nullptr;
};

struct y2seq_model {
  y2s::Checkpoint ckpt;
  y2s::Vocab vocab;
  std::string scratch;
};

namespace {

thread_local std::string g_last_error;

y2seq_status set_error(y2seq_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
y2seq_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return Y2SEQ_OK;
  } catch (const y2s::Error& e) {
    return set_error(static_cast<y2seq_status>(static_cast<int>(e.kind())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(Y2SEQ_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return set_error(Y2SEQ_ERR_INVALID_ARGUMENT, e.what());
  } catch (...) {
    return set_error(Y2SEQ_ERR_INVALID_ARGUMENT, "unknown error");
  }
}

const y2s::KeyInfo* lookup(const char* key) {
  if (key == nullptr) return nullptr;
  std::string k(key);
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  if (const y2s::KeyInfo* info = y2s::find_key(k)) return info;
  return y2s::find_flag(k);
}

y2s::commands::Output output_of(y2seq_config* c) {
  return [c](const std::string& text) {
    if (c->out_fn != nullptr) {
      c->out_fn(text.c_str(), c->out_user);
    } else {
      std::fputs(text.c_str(), stdout);
      std::fflush(stdout);
    }
  };
}

std::vector<y2s::Tensor> view_tensors(const y2seq_model* m, const float* views, size_t n) {
  const int nv = m->ckpt.params.config.n_views;
  const int d = m->ckpt.params.config.view_dim;
  if (views == nullptr || n != static_cast<size_t>(nv) * static_cast<size_t>(d)) {
    y2s::fail("expected " + std::to_string(nv) + " x " + std::to_string(d) + " view values, got " +
              std::to_string(n));
  }
  std::vector<y2s::Tensor> out;
  for (int v = 0; v < nv; ++v) {
    out.emplace_back(std::vector<int>{d},
                     std::vector<float>(views + static_cast<size_t>(v) * d,
                                        views + static_cast<size_t>(v + 1) * d));
  }
  return out;
}

void copy_embedding(const y2s::Tensor& t, float* out, size_t out_len) {
  if (out == nullptr || out_len != t.size()) {
    y2s::fail("output buffer must hold " + std::to_string(t.size()) + " floats");
  }
  for (size_t i = 0; i < t.size(); ++i) out[i] = t[i];
}

}  // namespace

extern "C" {

const char* y2seq_last_error(void) { return g_last_error.c_str(); }

const char* y2seq_version(void) { return "0.1.0"; }

size_t y2seq_key_count(void) { return y2s::key_registry().size(); }

y2seq_status y2seq_key_at(size_t index, y2seq_key_info* out) {
  return guarded([&] {
    const auto& keys = y2s::key_registry();
    if (out == nullptr || index >= keys.size()) y2s::fail("key index out of range");
    static thread_local std::vector<std::string> dotted;
    static thread_local std::vector<std::string> defaults;
    if (dotted.empty()) {
      const y2s::RunConfig def;
      for (const auto& k : keys) {
        dotted.push_back(y2s::dotted_name(k));
        defaults.push_back(def.get(k));
      }
    }
    const y2s::KeyInfo& k = keys[index];
    out->key = dotted[index].c_str();
    out->flag = k.flag;
    out->kind = static_cast<int>(k.kind);
    out->choices = k.choices;
    out->help = k.help;
    out->default_value = defaults[index].c_str();
  });
}

int y2seq_key_applies(size_t index, const char* command) {
  const auto& keys = y2s::key_registry();
  if (index >= keys.size() || command == nullptr) return 0;
  const auto cmd = y2s::parse_command(command);
  return cmd && (keys[index].commands & *cmd) != 0u ? 1 : 0;
}

y2seq_status y2seq_config_create(y2seq_config** out) {
  return guarded([&] {
    if (out == nullptr) y2s::fail("null output pointer");
    *out = new y2seq_config();
  });
}

void y2seq_config_free(y2seq_config* cfg) { delete cfg; }

y2seq_status y2seq_config_load_file(y2seq_config* cfg, const char* path) {
  return guarded([&] {
    if (cfg == nullptr || path == nullptr) y2s::fail("null argument");
    y2s::apply_config_file(cfg->cfg, path);
  });
}

y2seq_status y2seq_config_set(y2seq_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    if (cfg == nullptr || value == nullptr) y2s::fail("null argument");
    const y2s::KeyInfo* info = lookup(key);
    if (info == nullptr) {
      y2s::fail_config(std::string("unknown configuration key '") + (key ? key : "") + "'");
    }
    std::vector<std::string> errors;
    cfg->cfg.set(*info, value, errors);
    if (!errors.empty()) {
      std::string msg = "invalid configuration:";
      for (const auto& e : errors) msg += "\n  - " + e;
      y2s::fail_config(msg);
    }
  });
}

const char* y2seq_config_get(y2seq_config* cfg, const char* key) {
  const y2s::KeyInfo* info = lookup(key);
  if (cfg == nullptr || info == nullptr) {
    set_error(Y2SEQ_ERR_INVALID_ARGUMENT, std::string("unknown configuration key '") +
                                              (key ? key : "") + "'");
    return nullptr;
  }
  cfg->scratch = cfg->cfg.get(*info);
  return cfg->scratch.c_str();
}

const char* y2seq_config_text(y2seq_config* cfg) {
  if (cfg == nullptr) return nullptr;
  cfg->scratch = cfg->cfg.to_text();
  return cfg->scratch.c_str();
}

void y2seq_config_set_output(y2seq_config* cfg, y2seq_output_fn fn, void* user) {
  if (cfg == nullptr) return;
  cfg->out_fn = fn;
  cfg->out_user = user;
}

#define Y2SEQ_COMMAND(cname, fn)                                     \
  y2seq_status cname(y2seq_config* cfg) {                            \
    return guarded([&] {                                             \
      if (cfg == nullptr) y2s::fail("null configuration");           \
      y2s::commands::fn(cfg->cfg, output_of(cfg));                   \
    });                                                              \
  }

Y2SEQ_COMMAND(y2seq_cmd_gen_data, gen_data)
Y2SEQ_COMMAND(y2seq_cmd_import, import)
Y2SEQ_COMMAND(y2seq_cmd_train, train)
Y2SEQ_COMMAND(y2seq_cmd_eval, eval)
Y2SEQ_COMMAND(y2seq_cmd_caption, caption)
Y2SEQ_COMMAND(y2seq_cmd_grad_check, grad_check)

#undef Y2SEQ_COMMAND

y2seq_status y2seq_run(y2seq_config* cfg, const char* command) {
  const auto cmd = command ? y2s::parse_command(command) : std::nullopt;
  if (!cmd) {
    return set_error(Y2SEQ_ERR_INVALID_ARGUMENT,
                     std::string("unknown command '") + (command ? command : "") + "'");
  }
  switch (*cmd) {
    case y2s::kCmdGenData: return y2seq_cmd_gen_data(cfg);
    case y2s::kCmdImport: return y2seq_cmd_import(cfg);
    case y2s::kCmdTrain: return y2seq_cmd_train(cfg);
    case y2s::kCmdEval: return y2seq_cmd_eval(cfg);
    case y2s::kCmdCaption: return y2seq_cmd_caption(cfg);
    case y2s::kCmdGradCheck: return y2seq_cmd_grad_check(cfg);
    default: break;
  }
  return set_error(Y2SEQ_ERR_INVALID_ARGUMENT, "unknown command");
}

y2seq_status y2seq_model_load(const char* checkpoint_path, y2seq_model** out) {
  return guarded([&] {
    if (checkpoint_path == nullptr || out == nullptr) y2s::fail("null argument");
    y2s::Checkpoint ckpt = y2s::load_checkpoint(checkpoint_path);
    y2s::Vocab vocab = y2s::Vocab::from_tokens(ckpt.vocab);
    *out = new y2seq_model{std::move(ckpt), std::move(vocab), {}};
  });
}

void y2seq_model_free(y2seq_model* model) { delete model; }

size_t y2seq_model_embedding_dim(const y2seq_model* model) {
  return model ? static_cast<size_t>(model->ckpt.params.config.hidden_dim) : 0;
}

size_t y2seq_model_n_views(const y2seq_model* model) {
  return model ? static_cast<size_t>(model->ckpt.params.config.n_views) : 0;
}

size_t y2seq_model_view_dim(const y2seq_model* model) {
  return model ? static_cast<size_t>(model->ckpt.params.config.view_dim) : 0;
}

y2seq_status y2seq_model_embed_shape(y2seq_model* model, const float* views, size_t n_values,
                                     float* out, size_t out_len) {
  return guarded([&] {
    if (model == nullptr) y2s::fail("null model");
    const auto v = view_tensors(model, views, n_values);
    copy_embedding(y2s::embed_shape(model->ckpt.params, v), out, out_len);
  });
}

y2seq_status y2seq_model_embed_text(y2seq_model* model, const char* text, float* out,
                                    size_t out_len) {
  return guarded([&] {
    if (model == nullptr || text == nullptr) y2s::fail("null argument");
    const std::vector<int> ids = model->vocab.encode(text);
    copy_embedding(y2s::embed_text(model->ckpt.params, ids), out, out_len);
  });
}

const char* y2seq_model_caption(y2seq_model* model, const float* views, size_t n_values,
                                int max_len) {
  const y2seq_status s = guarded([&] {
    if (model == nullptr) y2s::fail("null model");
    const auto v = view_tensors(model, views, n_values);
    model->scratch = model->vocab.decode(y2s::caption(model->ckpt.params, v, max_len));
  });
  return s == Y2SEQ_OK ? model->scratch.c_str() : nullptr;
}

}  // extern "C"
