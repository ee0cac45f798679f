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
#ifndef Y2S_TRAINER_HPP_
#define Y2S_TRAINER_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "y2s/config.hpp"
#include "y2s/losses.hpp"
#include "y2s/model.hpp"
#include "y2s/synthdata.hpp"

Y2S_NAMESPACE_BEGIN

// theta <- theta - lr * grad
void sgd_step(std::span<Parameter* const> params, double lr);

class Adam {
 public:
  Adam(std::span<Parameter* const> params, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);

  // Bias-corrected update from each parameter's current grad.
  void step(std::span<Parameter* const> params);
  int steps_taken() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

// Training view of a split: one [n_views, view_dim] matrix per shape and one
// (shape, caption) pair per caption.
struct TrainingSet {
  struct Pair {
    int shape = 0;
    std::vector<int> words;
    int class_id = 0;
  };
  std::vector<Tensor> view_mats;
  std::vector<int> shape_classes;
  std::vector<Pair> pairs;
  int n_classes = 0;

  static TrainingSet from_split(const DatasetSplit& split, const Vocab& vocab);
};

PairBatch make_batch(const TrainingSet& data, std::span<const int> pair_indices);

struct BatchObjective {
  Var total;
  LossValues values;  // batch means of each component; 0 when not active
  double total_value = 0.0;
};

// Forward pass plus the weighted sum of active components. `negatives[b]` is the batch row
// used as (s-, t-) for anchor b; pass an empty span to skip the triplet term.
// Components are averaged over the batch.
BatchObjective batch_objective(Tape& tape, ModelParams& params, const PairBatch& batch,
                               std::span<const int> negatives, const TrainConfig& cfg);

struct EpochLog {
  int epoch = 0;
  LossValues losses;
  double total = 0.0;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochLog> rows;

  // epoch,l_v2v,l_v2w,l_w2w,l_w2v,l_c1,l_c2,l_c3,total,seconds
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

// Orders pair indices for one epoch. With `stratify`, classes are interleaved
// so every batch of two or more pairs spans at least two classes.
std::vector<std::vector<int>> epoch_batches(const TrainingSet& data, int batch_size,
                                            bool stratify, Rng& rng);

using EpochHook = std::function<void(int epoch, ModelParams& params)>;

// Minimizes the total objective with the configured optimizer. Throws a
// numeric y2s::Error naming the first non-finite loss component.
TrainLog train(ModelParams& params, const TrainingSet& data, const TrainConfig& cfg,
               const EpochHook& on_epoch = {});

// Throws y2s::Error(kConfig) listing every violated constraint.
void validate(const TrainConfig& cfg);

Y2S_NAMESPACE_END

#endif  // Y2S_TRAINER_HPP_
