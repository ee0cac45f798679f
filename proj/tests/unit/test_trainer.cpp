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
#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "y2s/error.hpp"
#include "y2s/trainer.hpp"

using namespace y2s;

namespace {

struct Fixture {
  Dataset ds;
  Vocab vocab;
  TrainingSet data;
  ModelConfig mc;
};

Fixture small_fixture(int classes = 3, int per_class = 5) {
  SynthConfig sc;
  sc.n_classes = classes;
  sc.n_views = 3;
  sc.view_dim = 6;
  Fixture f;
  f.ds = gen_dataset(per_class, 2, 4, sc);
  std::vector<std::string> caps;
  for (const auto& r : f.ds.train.shapes) caps.insert(caps.end(), r.captions.begin(), r.captions.end());
  f.vocab = Vocab::from_captions(caps);
  f.data = TrainingSet::from_split(f.ds.train, f.vocab);
  f.mc.view_dim = 6;
  f.mc.n_views = 3;
  f.mc.hidden_dim = 8;
  f.mc.word_embed_dim = 5;
  f.mc.vocab_size = f.vocab.size();
  f.mc.n_classes = classes;
  return f;
}

}  // namespace

TEST_CASE("sgd step") {
  Parameter p("p", Tensor::scalar(1.0f));
  p.grad[0] = 2.0f;
  std::vector<Parameter*> ps = {&p};
  sgd_step(ps, 0.1);
  CHECK(p.value[0] == doctest::Approx(0.8));
  p.grad[0] = 0.0f;
  sgd_step(ps, 0.1);
  CHECK(p.value[0] == doctest::Approx(0.8));
}

TEST_CASE("adam first step moves by about the learning rate") {
  Parameter p("p", Tensor::vector({1.0f, -2.0f, 0.5f}));
  p.grad.fill(1.0f);
  std::vector<Parameter*> ps = {&p};
  Adam adam(ps, 1e-3);
  adam.step(ps);
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  const double step = 1e-3 * 1.0 / (1.0 + 1e-8);
  CHECK(p.value[0] == doctest::Approx(1.0 - step).epsilon(1e-6));
  CHECK(p.value[1] == doctest::Approx(-2.0 - step).epsilon(1e-6));
  CHECK(adam.steps_taken() == 1);

  Parameter q("q", Tensor::vector({3.0f}));
  std::vector<Parameter*> qs = {&q};
  Adam zero(qs, 1e-3);
  zero.step(qs);
  CHECK(q.value[0] == 3.0f);
}

TEST_CASE("epoch batches cover every pair once and mix classes") {
  Fixture f = small_fixture();
  Rng rng(5);
  const auto batches = epoch_batches(f.data, 4, true, rng);
  std::multiset<int> seen;
  for (const auto& b : batches) {
    seen.insert(b.begin(), b.end());
    if (b.size() >= 2) {
      std::set<int> cls;
      for (int i : b) cls.insert(f.data.pairs[static_cast<std::size_t>(i)].class_id);
      CHECK(cls.size() >= 2);
    }
  }
  CHECK(seen.size() == f.data.pairs.size());
  CHECK(std::set<int>(seen.begin(), seen.end()).size() == f.data.pairs.size());
}

TEST_CASE("training configuration problems are listed together") {
  TrainConfig tc;
  tc.learning_rate = -1.0;
  tc.epochs = -2;
  tc.batch_size = 1;
  try {
    validate(tc);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
    const std::string msg = e.what();
    CHECK(msg.find("learning_rate") != std::string::npos);
    CHECK(msg.find("epochs") != std::string::npos);
    CHECK(msg.find("triplet") != std::string::npos);
  }
}

TEST_CASE("zero epochs leave the model unchanged") {
  Fixture f = small_fixture();
  ModelParams p = ModelParams::create(f.mc, false, 3);
  const ModelParams init = ModelParams::create(f.mc, false, 3);
  TrainConfig tc;
  tc.epochs = 0;
  const TrainLog log = train(p, f.data, tc);
  CHECK(log.rows.empty());
  const auto a = p.parameters();
  const auto b = init.parameters();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i]->value == b[i]->value);
}

TEST_CASE("training lowers the objective and is reproducible") {
  Fixture f = small_fixture();
  TrainConfig tc;
  tc.epochs = 6;
  tc.batch_size = 8;
  tc.learning_rate = 5e-3;
  tc.record_time = false;
  ModelParams p1 = ModelParams::create(f.mc, false, 3);
  ModelParams p2 = ModelParams::create(f.mc, false, 3);
  const TrainLog l1 = train(p1, f.data, tc);
  const TrainLog l2 = train(p2, f.data, tc);
  REQUIRE(l1.rows.size() == 6);
  CHECK(l1.rows.back().total < l1.rows.front().total);
  CHECK(l1.to_csv() == l2.to_csv());
  CHECK(l1.to_csv().rfind("epoch,l_v2v,l_v2w,l_w2w,l_w2v,l_c1,l_c2,l_c3,total,seconds\n", 0) == 0);
  const auto a = p1.parameters();
  const auto b = p2.parameters();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i]->value == b[i]->value);
}

TEST_CASE("coupled decoders stay single storage through training") {
  Fixture f = small_fixture();
  for (AblationMode m : {AblationMode::kCS, AblationMode::kCT, AblationMode::kCY}) {
    ModelParams p = ModelParams::create(f.mc, false, 4);
    TrainConfig tc;
    tc.mode = m;
    tc.epochs = 1;
    tc.batch_size = 4;
    train(p, f.data, tc);
    CHECK(&p.word_decoder_for(Branch::kShape) == &p.word_decoder_for(Branch::kText));
    CHECK(p.parameters().size() == ModelParams::zeros(f.mc, false).parameters().size());
  }
}

TEST_CASE("a non-finite loss is reported by component") {
  Fixture f = small_fixture();
  f.data.view_mats[0][0] = std::numeric_limits<float>::quiet_NaN();
  ModelParams p = ModelParams::create(f.mc, false, 3);
  TrainConfig tc;
  tc.epochs = 1;
  try {
    train(p, f.data, tc);
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
    CHECK(std::string(e.what()).find("l_v2v") != std::string::npos);
  }
}

TEST_CASE("single-class data trains without the triplet term") {
  Fixture f = small_fixture(2, 3);
  TrainingSet one;
  one.view_mats = {f.data.view_mats[0]};
  one.shape_classes = {f.data.shape_classes[0]};
  one.pairs = {f.data.pairs[0]};
  one.pairs[0].shape = 0;
  one.n_classes = f.data.n_classes;
  ModelParams p = ModelParams::create(f.mc, false, 3);
  TrainConfig tc;
  tc.epochs = 2;
  tc.record_time = false;
  const TrainLog log = train(p, one, tc);
  CHECK(log.rows.back().losses[kC2] == 0.0);
}
