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
#include "y2s/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "y2s/error.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

constexpr std::uint64_t kTrainStream = 0x747261696eULL;

bool spans_two_classes(std::span<const int> classes) {
  return std::any_of(classes.begin(), classes.end(),
                     [&](int c) { return c != classes.front(); });
}

bool spans_two_classes(const TrainingSet& data, const std::vector<int>& batch) {
  for (int i : batch) {
    if (data.pairs[static_cast<std::size_t>(i)].class_id !=
        data.pairs[static_cast<std::size_t>(batch.front())].class_id) {
      return true;
    }
  }
  return false;
}

}  // namespace

void sgd_step(std::span<Parameter* const> params, double lr) {
  const auto step = static_cast<Real>(lr);
  for (Parameter* p : params) {
    if (!p->grad.same_shape(p->value)) fail("sgd_step: grad shape drifted for " + p->name);
    for (std::size_t i = 0; i < p->value.size(); ++i) p->value[i] -= step * p->grad[i];
  }
}

Adam::Adam(std::span<Parameter* const> params, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const Parameter* p : params) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void Adam::step(std::span<Parameter* const> params) {
  if (params.size() != m_.size()) fail("adam: parameter list does not match optimizer state");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, t_);
  const double c2 = 1.0 - std::pow(beta2_, t_);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    if (!p.value.same_shape(m) || !p.grad.same_shape(m)) {
      fail("adam: shape drift for parameter " + p.name);
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double g = p.grad[i];
      const double mi = beta1_ * m[i] + (1.0 - beta1_) * g;
      const double vi = beta2_ * v[i] + (1.0 - beta2_) * g * g;
      m[i] = static_cast<Real>(mi);
      v[i] = static_cast<Real>(vi);
      const double update = lr_ * (mi / c1) / (std::sqrt(vi / c2) + eps_);
      p.value[i] = static_cast<Real>(p.value[i] - update);
    }
  }
}

TrainingSet TrainingSet::from_split(const DatasetSplit& split, const Vocab& vocab) {
  if (split.shapes.empty()) fail("training set: split has no shapes");
  TrainingSet ts;
  for (std::size_t s = 0; s < split.shapes.size(); ++s) {
    const ShapeRecord& rec = split.shapes[s];
    std::vector<Real> data(rec.views.begin(), rec.views.end());
    ts.view_mats.emplace_back(std::vector<int>{split.n_views, split.view_dim}, std::move(data));
    ts.shape_classes.push_back(rec.class_id);
    for (const std::string& c : rec.captions) {
      ts.pairs.push_back(Pair{static_cast<int>(s), vocab.encode(c), rec.class_id});
    }
  }
  ts.n_classes = split.n_classes();
  return ts;
}

PairBatch make_batch(const TrainingSet& data, std::span<const int> pair_indices) {
  std::vector<Tensor> mats;
  std::vector<std::vector<int>> words;
  std::vector<int> classes;
  for (int i : pair_indices) {
    const TrainingSet::Pair& p = data.pairs.at(static_cast<std::size_t>(i));
    mats.push_back(data.view_mats[static_cast<std::size_t>(p.shape)]);
    words.push_back(p.words);
    classes.push_back(p.class_id);
  }
  return PairBatch::from_pairs(mats, words, classes);
}

BatchObjective batch_objective(Tape& tape, ModelParams& params, const PairBatch& batch,
                               std::span<const int> negatives, const TrainConfig& cfg) {
  const ForwardVars fv = forward(tape, params, batch, cfg.mode);
  const auto coef = objective_coefficients(cfg.weights, cfg.mode, cfg.constraints);
  const ModeTerms terms = mode_terms(cfg.mode);
  std::array<Var, kLossCount> comp{};
  if (terms.v2v) comp[kV2V] = l_v2v(fv.recon_views, fv.gt_views);
  if (terms.v2w) comp[kV2W] = l_v2w(fv.pred_word_logits, fv.tokens);
  if (terms.w2w) comp[kW2W] = l_w2w(fv.recon_word_logits, fv.tokens);
  if (terms.w2v) comp[kW2V] = l_w2v(fv.pred_views, fv.gt_views);
  if (uses_c1(cfg.constraints)) comp[kC1] = l_c1(fv.class_logits_s, fv.class_logits_t, batch.classes);
  if (uses_c2(cfg.constraints) && !negatives.empty()) {
    if (static_cast<int>(negatives.size()) != batch.size()) {
      fail("batch_objective: one negative per anchor required");
    }
    const Var fs_neg = embedding(fv.f_s, negatives);
    const Var ft_neg = embedding(fv.f_t, negatives);
    comp[kC2] = l_c2_triplet(fv.f_s, fv.f_t, fs_neg, ft_neg, cfg.weights.mu,
                             cfg.strict_triplet);
  }
  if (uses_c3(cfg.constraints)) comp[kC3] = l_c3(fv.f_s, fv.f_t);

  const double inv_b = 1.0 / batch.size();
  BatchObjective out;
  Var total;
  for (int k = 0; k < kLossCount; ++k) {
    if (!comp[static_cast<std::size_t>(k)].valid()) continue;
    const Var c = comp[static_cast<std::size_t>(k)];
    out.values[k] = static_cast<double>(tape.value(c).item()) * inv_b;
    const Var weighted = scale(c, static_cast<Real>(coef[static_cast<std::size_t>(k)] * inv_b));
    total = total.valid() ? add(total, weighted) : weighted;
  }
  if (!total.valid()) total = tape.constant(Tensor::scalar(0));
  out.total = total;
  out.total_value = tape.value(total).item();
  return out;
}

std::string TrainLog::to_csv() const {
  std::string out = "epoch";
  for (int k = 0; k < kLossCount; ++k) out += std::string(",") + loss_name(k);
  out += ",total,seconds\n";
  char buf[64];
  for (const EpochLog& r : rows) {
    out += std::to_string(r.epoch);
    for (int k = 0; k < kLossCount; ++k) {
      std::snprintf(buf, sizeof buf, ",%.9g", r.losses[k]);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.9g,%.3f\n", r.total, r.seconds);
    out += buf;
  }
  return out;
}

void TrainLog::write_csv(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail_io("cannot open " + path + " for writing");
  const std::string text = to_csv();
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) fail_io("write failed for " + path);
}

std::vector<std::vector<int>> epoch_batches(const TrainingSet& data, int batch_size,
                                            bool stratify, Rng& rng) {
  if (batch_size < 1) fail("epoch_batches: batch size must be positive");
  std::vector<int> order;
  if (stratify) {
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(std::max(data.n_classes, 1)));
    for (std::size_t i = 0; i < data.pairs.size(); ++i) {
      by_class[static_cast<std::size_t>(data.pairs[i].class_id)].push_back(static_cast<int>(i));
    }
    std::vector<int> class_order;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      rng.shuffle(by_class[c]);
      class_order.push_back(static_cast<int>(c));
    }
    rng.shuffle(class_order);
    std::vector<std::size_t> cursor(by_class.size(), 0);
    while (order.size() < data.pairs.size()) {
      for (int c : class_order) {
        auto& list = by_class[static_cast<std::size_t>(c)];
        auto& cur = cursor[static_cast<std::size_t>(c)];
        if (cur < list.size()) order.push_back(list[cur++]);
      }
    }
  } else {
    order.resize(data.pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);
  }
  std::vector<std::vector<int>> batches;
  for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(order.size(), i + static_cast<std::size_t>(batch_size));
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  if (stratify) {
    // Trailing batches can run out of classes when class sizes differ; fold
    // them into their predecessor.
    for (std::size_t i = 1; i < batches.size();) {
      if (!spans_two_classes(data, batches[i])) {
        batches[i - 1].insert(batches[i - 1].end(), batches[i].begin(), batches[i].end());
        batches.erase(batches.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
  }
  return batches;
}

void validate(const TrainConfig& cfg) {
  std::vector<std::string> problems;
  if (!(cfg.learning_rate > 0.0)) problems.push_back("learning_rate must be positive");
  if (cfg.epochs < 0) problems.push_back("epochs must be non-negative");
  if (cfg.batch_size < 1) problems.push_back("batch_size must be positive");
  if (uses_c2(cfg.constraints) && cfg.batch_size < 2) {
    problems.push_back("batch_size must be at least 2 when the triplet constraint is enabled");
  }
  const BalanceWeights& w = cfg.weights;
  for (double v : {w.alpha, w.beta, w.gamma, w.delta, w.phi, w.varphi, w.psi, w.mu}) {
    if (!(v >= 0.0)) {
      problems.push_back("balance weights and margin must be non-negative");
      break;
    }
  }
  if (cfg.optimizer == OptimizerKind::kAdam) {
    if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0) ||
        !(cfg.adam_beta2 >= 0.0 && cfg.adam_beta2 < 1.0)) {
      problems.push_back("adam betas must lie in [0, 1)");
    }
    if (!(cfg.adam_eps > 0.0)) problems.push_back("adam eps must be positive");
  }
  if (!problems.empty()) {
    std::string msg = "invalid training configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    fail_config(msg);
  }
}

TrainLog train(ModelParams& params, const TrainingSet& data, const TrainConfig& cfg,
               const EpochHook& on_epoch) {
  validate(cfg);
  if (data.pairs.empty()) fail("train: empty training set");
  if (data.n_classes > params.config.n_classes) {
    fail("train: data has " + std::to_string(data.n_classes) + " classes, model " +
         std::to_string(params.config.n_classes));
  }
  for (const auto& p : data.pairs) {
    for (int id : p.words) {
      if (id < 0 || id >= params.config.vocab_size) {
        fail("train: token id outside the model vocabulary");
      }
    }
  }
  const auto plist = params.parameters();
  Adam adam(plist, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
  Rng rng(derive_seed(cfg.seed, kTrainStream));
  // A single-class training set has no (s-, t-) pairs, so the triplet term
  // stays inactive; the CLI rejects that combination up front.
  const bool triplets =
      uses_c2(cfg.constraints) &&
      std::set<int>(data.shape_classes.begin(), data.shape_classes.end()).size() >= 2;
  TrainLog log;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const auto batches = epoch_batches(data, cfg.batch_size, triplets, rng);
    EpochLog row;
    row.epoch = epoch;
    double seen = 0.0;
    for (const auto& idx : batches) {
      const PairBatch batch = make_batch(data, idx);
      std::vector<int> negatives;
      if (triplets && spans_two_classes(batch.classes)) {
        negatives = sample_negatives(batch.classes, rng);
      }
      Tape tape;
      const BatchObjective obj = batch_objective(tape, params, batch, negatives, cfg);
      for (int k = 0; k < kLossCount; ++k) {
        if (!std::isfinite(obj.values[k])) {
          fail_numeric(std::string("train: non-finite ") + loss_name(k) + " at epoch " +
                       std::to_string(epoch));
        }
      }
      if (!std::isfinite(obj.total_value)) {
        fail_numeric("train: non-finite total objective at epoch " + std::to_string(epoch));
      }
      params.zero_grad();
      tape.backward(obj.total);
      if (cfg.optimizer == OptimizerKind::kAdam) {
        adam.step(plist);
      } else {
        sgd_step(plist, cfg.learning_rate);
      }
      const double n = batch.size();
      for (int k = 0; k < kLossCount; ++k) row.losses[k] += obj.values[k] * n;
      row.total += obj.total_value * n;
      seen += n;
    }
    for (int k = 0; k < kLossCount; ++k) row.losses[k] /= seen;
    row.total /= seen;
    if (cfg.record_time) {
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    log.rows.push_back(row);
    if (on_epoch) on_epoch(epoch, params);
  }
  return log;
}

Y2S_NAMESPACE_END
