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
#ifndef Y2SEQ_Y2SEQ_H_
#define Y2SEQ_Y2SEQ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(Y2SEQ_BUILDING)
#define Y2SEQ_API __attribute__((visibility("default")))
#else
#define Y2SEQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum y2seq_status {
  Y2SEQ_OK = 0,
  Y2SEQ_ERR_INVALID_ARGUMENT = 1,
  Y2SEQ_ERR_CONFIG = 2,
  Y2SEQ_ERR_NUMERIC = 3,
  Y2SEQ_ERR_IO = 4
} y2seq_status;

/* Message of the last failed call on this thread; empty after success. */
Y2SEQ_API const char* y2seq_last_error(void);
Y2SEQ_API const char* y2seq_version(void);

/* ---- run configuration ------------------------------------------------ */

typedef struct y2seq_config y2seq_config;

typedef enum y2seq_key_kind {
  Y2SEQ_KEY_INT = 0,
  Y2SEQ_KEY_REAL = 1,
  Y2SEQ_KEY_BOOL = 2,
  Y2SEQ_KEY_STRING = 3,
  Y2SEQ_KEY_CHOICE = 4
} y2seq_key_kind;

typedef struct y2seq_key_info {
  const char* key;      /* "section.name" */
  const char* flag;     /* long option without leading dashes */
  int kind;             /* y2seq_key_kind */
  const char* choices;  /* "a|b|c" for choice keys, else "" */
  const char* help;
  const char* default_value;
} y2seq_key_info;

Y2SEQ_API size_t y2seq_key_count(void);
Y2SEQ_API y2seq_status y2seq_key_at(size_t index, y2seq_key_info* out);
/* Nonzero when the key is meaningful for the named subcommand. */
Y2SEQ_API int y2seq_key_applies(size_t index, const char* command);

Y2SEQ_API y2seq_status y2seq_config_create(y2seq_config** out);
Y2SEQ_API void y2seq_config_free(y2seq_config* cfg);
/* Merges a "[section] key = value" file; all problems are reported at once. */
Y2SEQ_API y2seq_status y2seq_config_load_file(y2seq_config* cfg, const char* path);
/* Sets one key by dotted name or by flag name. */
Y2SEQ_API y2seq_status y2seq_config_set(y2seq_config* cfg, const char* key, const char* value);
/* Current value as text; the pointer stays valid until the next call on cfg. */
Y2SEQ_API const char* y2seq_config_get(y2seq_config* cfg, const char* key);
/* Canonical text of every key. Valid until the next call on cfg. */
Y2SEQ_API const char* y2seq_config_text(y2seq_config* cfg);

/* ---- commands ----------------------------------------------------------- */

/* Receives human-readable command output; defaults to stdout. */
typedef void (*y2seq_output_fn)(const char* text, void* user);
Y2SEQ_API void y2seq_config_set_output(y2seq_config* cfg, y2seq_output_fn fn, void* user);

Y2SEQ_API y2seq_status y2seq_cmd_gen_data(y2seq_config* cfg);
Y2SEQ_API y2seq_status y2seq_cmd_import(y2seq_config* cfg);
Y2SEQ_API y2seq_status y2seq_cmd_train(y2seq_config* cfg);
Y2SEQ_API y2seq_status y2seq_cmd_eval(y2seq_config* cfg);
Y2SEQ_API y2seq_status y2seq_cmd_caption(y2seq_config* cfg);
Y2SEQ_API y2seq_status y2seq_cmd_grad_check(y2seq_config* cfg);
/* Dispatches by subcommand name ("gen-data", "train", ...). */
Y2SEQ_API y2seq_status y2seq_run(y2seq_config* cfg, const char* command);

/* ---- trained models ----------------------------------------------------- */

typedef struct y2seq_model y2seq_model;

Y2SEQ_API y2seq_status y2seq_model_load(const char* checkpoint_path, y2seq_model** out);
Y2SEQ_API void y2seq_model_free(y2seq_model* model);
Y2SEQ_API size_t y2seq_model_embedding_dim(const y2seq_model* model);
Y2SEQ_API size_t y2seq_model_n_views(const y2seq_model* model);
Y2SEQ_API size_t y2seq_model_view_dim(const y2seq_model* model);

/* views: n_views * view_dim floats, view-major. out: embedding_dim floats. */
Y2SEQ_API y2seq_status y2seq_model_embed_shape(y2seq_model* model, const float* views,
                                               size_t n_values, float* out, size_t out_len);
/* Tokenizes the text with the checkpoint vocabulary. */
Y2SEQ_API y2seq_status y2seq_model_embed_text(y2seq_model* model, const char* text, float* out,
                                              size_t out_len);
/* Greedy caption; the returned string lives until the next call on model. */
Y2SEQ_API const char* y2seq_model_caption(y2seq_model* model, const float* views,
                                          size_t n_values, int max_len);

#ifdef __cplusplus
}
#endif

#endif /* Y2SEQ_Y2SEQ_H_ */
