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
#include "y2s/seqnets.hpp"

#include <algorithm>
#include <cmath>

#include "y2s/error.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

Parameter zero_param(const std::string& name, std::vector<int> shape) {
  return Parameter(name, Tensor(std::move(shape)));
}

void check_rows(const char* op, const Tensor& t, int expected_cols) {
  if (t.cols() != expected_cols) {
    fail(std::string(op) + ": expected width " + std::to_string(expected_cols) + ", got " +
         t.shape_str());
  }
}

}  // namespace

void init_uniform(Parameter& p, double k, Rng& rng) {
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    p.value[i] = static_cast<Real>(rng.uniform(-k, k));
  }
}

GruParams GruParams::zeros(const std::string& prefix, int input_dim, int hidden_dim) {
  if (input_dim <= 0 || hidden_dim <= 0) fail("GruParams: dimensions must be positive");
  GruParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.w_z = zero_param(prefix + ".w_z", {hidden_dim, input_dim});
  p.u_z = zero_param(prefix + ".u_z", {hidden_dim, hidden_dim});
  p.b_z = zero_param(prefix + ".b_z", {hidden_dim});
  p.w_r = zero_param(prefix + ".w_r", {hidden_dim, input_dim});
  p.u_r = zero_param(prefix + ".u_r", {hidden_dim, hidden_dim});
  p.b_r = zero_param(prefix + ".b_r", {hidden_dim});
  p.w_h = zero_param(prefix + ".w_h", {hidden_dim, input_dim});
  p.u_h = zero_param(prefix + ".u_h", {hidden_dim, hidden_dim});
  p.b_h = zero_param(prefix + ".b_h", {hidden_dim});
  return p;
}

GruParams GruParams::random(const std::string& prefix, int input_dim, int hidden_dim,
                            Rng& rng) {
  GruParams p = zeros(prefix, input_dim, hidden_dim);
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (Parameter* q : p.parameters()) init_uniform(*q, k, rng);
  return p;
}

std::vector<Parameter*> GruParams::parameters() {
  return {&w_z, &u_z, &b_z, &w_r, &u_r, &b_r, &w_h, &u_h, &b_h};
}

WordDecoderParams WordDecoderParams::zeros(const std::string& prefix, int embed_dim,
                                           int hidden_dim, int vocab_size) {
  if (vocab_size <= 0) fail("WordDecoderParams: vocabulary must be non-empty");
  WordDecoderParams p;
  p.gru = GruParams::zeros(prefix + ".gru", embed_dim, hidden_dim);
  p.out_w = zero_param(prefix + ".out_w", {vocab_size, hidden_dim});
  p.out_b = zero_param(prefix + ".out_b", {vocab_size});
  return p;
}

WordDecoderParams WordDecoderParams::random(const std::string& prefix, int embed_dim,
                                            int hidden_dim, int vocab_size, Rng& rng) {
  WordDecoderParams p = zeros(prefix, embed_dim, hidden_dim, vocab_size);
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (Parameter* q : p.parameters()) init_uniform(*q, k, rng);
  return p;
}

std::vector<Parameter*> WordDecoderParams::parameters() {
  std::vector<Parameter*> out = gru.parameters();
  out.push_back(&out_w);
  out.push_back(&out_b);
  return out;
}

ViewDecoderParams ViewDecoderParams::zeros(const std::string& prefix, int view_dim,
                                           int hidden_dim) {
  ViewDecoderParams p;
  p.gru = GruParams::zeros(prefix + ".gru", view_dim, hidden_dim);
  p.out_w = zero_param(prefix + ".out_w", {view_dim, hidden_dim});
  p.out_b = zero_param(prefix + ".out_b", {view_dim});
  return p;
}

ViewDecoderParams ViewDecoderParams::random(const std::string& prefix, int view_dim,
                                            int hidden_dim, Rng& rng) {
  ViewDecoderParams p = zeros(prefix, view_dim, hidden_dim);
  const double k = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (Parameter* q : p.parameters()) init_uniform(*q, k, rng);
  return p;
}

std::vector<Parameter*> ViewDecoderParams::parameters() {
  std::vector<Parameter*> out = gru.parameters();
  out.push_back(&out_w);
  out.push_back(&out_b);
  return out;
}

StepTokens StepTokens::teacher_forced(std::span<const std::vector<int>> seqs, int bos) {
  if (seqs.empty()) fail("StepTokens: empty batch");
  StepTokens st;
  std::size_t longest = 0;
  for (const auto& s : seqs) {
    if (s.empty()) fail("StepTokens: empty token sequence");
    longest = std::max(longest, s.size());
    st.lengths.push_back(static_cast<int>(s.size()));
  }
  const std::size_t batch = seqs.size();
  st.inputs.assign(longest, std::vector<int>(batch, bos));
  st.targets.assign(longest, std::vector<int>(batch, -1));
  for (std::size_t b = 0; b < batch; ++b) {
    const auto& s = seqs[b];
    for (std::size_t j = 0; j < s.size(); ++j) {
      st.targets[j][b] = s[j];
      st.inputs[j][b] = j == 0 ? bos : s[j - 1];
    }
  }
  return st;
}

Var gru_step(Tape& tape, GruParams& p, Var x, Var h) {
  const Tensor& xv = tape.value(x);
  const Tensor& hv = tape.value(h);
  check_rows("gru_step input", xv, p.input_dim);
  check_rows("gru_step state", hv, p.hidden_dim);
  if (xv.rows() != hv.rows()) {
    fail("gru_step: batch mismatch " + xv.shape_str() + " vs " + hv.shape_str());
  }
  auto affine = [&](Parameter& w, Parameter& u, Parameter& b, Var state) {
    return add_bias(add(matmul_nt(x, tape.param(w)), matmul_nt(state, tape.param(u))),
                    tape.param(b));
  };
  const Var z = sigmoid(affine(p.w_z, p.u_z, p.b_z, h));
  const Var r = sigmoid(affine(p.w_r, p.u_r, p.b_r, h));
  const Var cand = tanh(affine(p.w_h, p.u_h, p.b_h, mul(r, h)));
  // (1 - z) * h + z * cand == h + z * (cand - h)
  return add(h, mul(z, sub(cand, h)));
}

namespace {

Tensor as_row(const Tensor& t) {
  return t.rank() == 1 ? Tensor({1, t.cols()}, t.storage()) : t;
}

}  // namespace

Tensor gru_step(GruParams& p, const Tensor& x, const Tensor& h) {
  Tape tape;
  const Var out = gru_step(tape, p, tape.constant(as_row(x)), tape.constant(as_row(h)));
  Tensor v = tape.value(out);
  if (x.rank() == 1) v = v.row(0);
  return v;
}

Var encode_sequence(Tape& tape, GruParams& p, std::span<const Var> inputs,
                    std::span<const int> lengths) {
  if (inputs.empty()) fail("encode_sequence: empty input sequence");
  const int batch = tape.value(inputs.front()).rows();
  if (!lengths.empty() && static_cast<int>(lengths.size()) != batch) {
    fail("encode_sequence: one length per batch row required");
  }
  Var h = tape.constant(Tensor({batch, p.hidden_dim}));
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    const Var next = gru_step(tape, p, inputs[t], h);
    bool all_active = true;
    for (int len : lengths) all_active = all_active && static_cast<int>(t) < len;
    if (all_active) {
      h = next;
      continue;
    }
    Tensor mask({batch, p.hidden_dim});
    for (int b = 0; b < batch; ++b) {
      const Real m = static_cast<int>(t) < lengths[static_cast<std::size_t>(b)] ? 1 : 0;
      for (int k = 0; k < p.hidden_dim; ++k) mask.at(b, k) = m;
    }
    h = add(h, mul(tape.constant(std::move(mask)), sub(next, h)));
  }
  return h;
}

Tensor encode_sequence(GruParams& p, std::span<const Tensor> inputs) {
  Tape tape;
  std::vector<Var> vars;
  for (const Tensor& t : inputs) vars.push_back(tape.constant(as_row(t)));
  const Var out = encode_sequence(tape, p, vars);
  Tensor v = tape.value(out);
  if (!inputs.empty() && inputs.front().rank() == 1) v = v.row(0);
  return v;
}

std::vector<Var> word_decode_teacher_forced(Tape& tape, WordDecoderParams& p, Var embed_table,
                                            Var features, const StepTokens& tokens) {
  const Tensor& fv = tape.value(features);
  check_rows("word_decode_teacher_forced features", fv, p.gru.hidden_dim);
  if (static_cast<int>(tokens.lengths.size()) != fv.rows()) {
    fail("word_decode_teacher_forced: token batch does not match feature rows");
  }
  const int vocab = p.vocab_size();
  for (const auto& step : tokens.targets) {
    for (int id : step) {
      if (id >= vocab) {
        fail("word_decode_teacher_forced: token id " + std::to_string(id) +
             " outside vocabulary of " + std::to_string(vocab));
      }
    }
  }
  const Var out_w = tape.param(p.out_w);
  const Var out_b = tape.param(p.out_b);
  std::vector<Var> logits;
  Var h = features;
  for (int j = 0; j < tokens.steps(); ++j) {
    const Var x = embedding(embed_table, tokens.inputs[static_cast<std::size_t>(j)]);
    h = gru_step(tape, p.gru, x, h);
    logits.push_back(add_bias(matmul_nt(h, out_w), out_b));
  }
  return logits;
}

std::vector<std::vector<int>> word_decode_greedy(WordDecoderParams& p, Parameter& embed_table,
                                                 const Tensor& features, int max_len) {
  if (max_len < 1) fail("word_decode_greedy: max_len must be at least 1");
  check_rows("word_decode_greedy features", features, p.gru.hidden_dim);
  const int batch = features.rows();
  std::vector<std::vector<int>> out(static_cast<std::size_t>(batch));
  std::vector<bool> done(static_cast<std::size_t>(batch), false);
  std::vector<int> prev(static_cast<std::size_t>(batch), p.bos);
  Tensor h = as_row(features);
  for (int step = 0; step < max_len; ++step) {
    Tape tape;
    const Var x = embedding(tape.param(embed_table), prev);
    const Var hv = gru_step(tape, p.gru, x, tape.constant(h));
    const Var logits = add_bias(matmul_nt(hv, tape.param(p.out_w)), tape.param(p.out_b));
    const Tensor& lv = tape.value(logits);
    bool all_done = true;
    for (int b = 0; b < batch; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      if (done[bi]) continue;
      // Lowest id wins ties.
      int best = 0;
      for (int c = 1; c < lv.cols(); ++c) {
        if (lv.at(b, c) > lv.at(b, best)) best = c;
      }
      if (best == p.eos) {
        done[bi] = true;
      } else {
        out[bi].push_back(best);
        prev[bi] = best;
        all_done = false;
      }
    }
    if (all_done) break;
    h = tape.value(hv);
  }
  return out;
}

std::vector<Var> view_decode(Tape& tape, ViewDecoderParams& p, Var features, int n_views) {
  if (n_views < 1) fail("view_decode: n_views must be at least 1");
  const Tensor& fv = tape.value(features);
  check_rows("view_decode features", fv, p.gru.hidden_dim);
  const int batch = fv.rows();
  const Var out_w = tape.param(p.out_w);
  const Var out_b = tape.param(p.out_b);
  std::vector<Var> views;
  Var h = features;
  Var x = tape.constant(Tensor({batch, p.view_dim()}));
  for (int i = 0; i < n_views; ++i) {
    h = gru_step(tape, p.gru, x, h);
    x = add_bias(matmul_nt(h, out_w), out_b);
    views.push_back(x);
  }
  return views;
}

Y2S_NAMESPACE_END
