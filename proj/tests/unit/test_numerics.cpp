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
// Numerics in double precision so finite differences are tight.
#define Y2S_REAL_DOUBLE 1

#include <cmath>

#include "doctest.h"
#include "y2s/autodiff.hpp"
#include "y2s/error.hpp"
#include "y2s/finite_diff.hpp"
#include "y2s/rng.hpp"

using namespace y2s;

namespace {

Parameter random_param(const char* name, std::vector<int> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = scale * rng.normal();
  return Parameter(name, std::move(t));
}

// Compares backward() against central differences for every parameter.
double check(std::vector<Parameter*> params, const std::function<Var(Tape&)>& build) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    tape.backward(build(tape));
  }
  double worst = 0.0;
  for (Parameter* p : params) {
    const Tensor fd = finite_diff(
        [&] {
          Tape t;
          return static_cast<double>(t.value(build(t)).item());
        },
        *p, 1e-5);
    worst = std::max(worst, max_relative_error(p->grad, fd));
  }
  return worst;
}

}  // namespace

TEST_CASE("matmul of a 2x2 by a column") {
  Tape t;
  const Var a = t.constant(Tensor::matrix(2, 2, {1, 2, 3, 4}));
  const Var b = t.constant(Tensor::matrix(2, 1, {1, 1}));
  const Tensor& c = t.value(matmul(a, b));
  CHECK(c.shape() == std::vector<int>{2, 1});
  CHECK(c[0] == 3.0);
  CHECK(c[1] == 7.0);
}

TEST_CASE("matmul matches a triple loop") {
  Rng rng(11);
  Parameter a = random_param("a", {3, 5}, rng);
  Parameter b = random_param("b", {5, 4}, rng);
  Tape t;
  const Tensor& c = t.value(matmul(t.param(a), t.param(b)));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 5; ++k) s += a.value.at(i, k) * b.value.at(k, j);
      CHECK(c.at(i, j) == doctest::Approx(s).epsilon(1e-12));
    }
  }
  const Tensor& d = t.value(matmul_nt(t.param(a), t.param(a)));
  CHECK(d.shape() == std::vector<int>{3, 3});
  CHECK(d.at(1, 2) == doctest::Approx(d.at(2, 1)).epsilon(1e-12));
}

TEST_CASE("shape mismatches name the op and both shapes") {
  Tape t;
  const Var a = t.constant(Tensor({2, 3}));
  const Var b = t.constant(Tensor({2, 3}));
  try {
    matmul(a, b);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("matmul") != std::string::npos);
    CHECK(msg.find("[2x3]") != std::string::npos);
  }
  CHECK_THROWS_AS(add(a, t.constant(Tensor({3, 2}))), Error);
}

TEST_CASE("elementary values") {
  Tape t;
  CHECK(t.value(sigmoid(t.constant(Tensor::scalar(0.0)))).item() == 0.5);
  CHECK(t.value(sq_norm(t.constant(Tensor({4})))).item() == 0.0);
  const Tensor big = t.value(sigmoid(t.constant(Tensor::vector({-800.0, 800.0}))));
  CHECK(big[0] == 0.0);
  CHECK(big[1] == 1.0);
}

TEST_CASE("backward on simple scalars") {
  Parameter x("x", Tensor::scalar(3.0));
  {
    Tape t;
    const Var v = t.param(x);
    t.backward(mul(v, v));
  }
  CHECK(x.grad.item() == doctest::Approx(6.0));

  Parameter y("y", Tensor::scalar(0.0));
  {
    Tape t;
    t.backward(sigmoid(t.param(y)));
  }
  CHECK(y.grad.item() == doctest::Approx(0.25));
}

TEST_CASE("backward rejects a non-scalar loss") {
  Parameter x("x", Tensor::vector({1.0, 2.0}));
  Tape t;
  CHECK_THROWS_AS(t.backward(t.param(x)), Error);
}

TEST_CASE("parameter gradients accumulate across backward calls") {
  Parameter x("x", Tensor::scalar(2.0));
  for (int i = 0; i < 2; ++i) {
    Tape t;
    t.backward(scale(t.param(x), 3.0));
  }
  CHECK(x.grad.item() == doctest::Approx(6.0));
}

TEST_CASE("a parameter used twice on one tape gets both contributions") {
  Parameter x("x", Tensor::vector({1.0, -2.0}));
  Tape t;
  const Var a = t.param(x);
  const Var b = t.param(x);
  CHECK(a.id == b.id);
  t.backward(sum(mul(a, b)));
  CHECK(x.grad[0] == doctest::Approx(2.0));
  CHECK(x.grad[1] == doctest::Approx(-4.0));
}

TEST_CASE("squared norm of Wx matches finite differences") {
  Rng rng(3);
  Parameter w = random_param("w", {3, 3}, rng);
  Parameter x = random_param("x", {3, 1}, rng);
  const double err = check({&w, &x}, [&](Tape& t) { return sq_norm(matmul(t.param(w), t.param(x))); });
  CHECK(err < 1e-6);
}

TEST_CASE("every op passes a finite-difference check") {
  Rng rng(5);
  Parameter a = random_param("a", {3, 4}, rng);
  Parameter b = random_param("b", {3, 4}, rng);
  Parameter bias = random_param("bias", {4}, rng);
  Parameter w = random_param("w", {2, 4}, rng);
  Parameter table = random_param("table", {5, 4}, rng);
  std::vector<Parameter*> all = {&a, &b, &bias, &w, &table};

  SUBCASE("add sub mul scale") {
    CHECK(check(all, [&](Tape& t) {
            return sum(mul(add(t.param(a), scale(t.param(b), 0.7)),
                           sub(t.param(a), add_scalar(t.param(b), 0.3))));
          }) < 1e-6);
  }
  SUBCASE("bias and transposed product") {
    CHECK(check(all, [&](Tape& t) {
            return sq_norm(matmul_nt(add_bias(t.param(a), t.param(bias)), t.param(w)));
          }) < 1e-6);
  }
  SUBCASE("nonlinearities") {
    CHECK(check(all, [&](Tape& t) {
            return sum(mul(sigmoid(t.param(a)), tanh(t.param(b))));
          }) < 1e-6);
  }
  SUBCASE("relu away from the kink") {
    CHECK(check(all, [&](Tape& t) { return sum(mul(relu(t.param(a)), t.param(b))); }) < 1e-6);
  }
  SUBCASE("cross entropy with padding and weights") {
    const std::vector<int> targets = {1, -1, 3};
    const std::vector<double> weights = {0.5, 1.0, 2.0};
    CHECK(check(all, [&](Tape& t) {
            return softmax_cross_entropy(t.param(a), targets, weights);
          }) < 1e-6);
  }
  SUBCASE("row norms, mean") {
    CHECK(check(all, [&](Tape& t) {
            return mean(mul(row_sq_norm(t.param(a)), row_sq_norm(t.param(b))));
          }) < 1e-6);
  }
  SUBCASE("concat and slice") {
    CHECK(check(all, [&](Tape& t) {
            const std::vector<Var> rows = {t.param(a), t.param(b)};
            const std::vector<Var> cols = {t.param(a), t.param(b)};
            const Var r = concat(rows, 0);
            const Var c = concat(cols, 1);
            return add(sq_norm(slice(r, 0, 2, 5)), sum(mul(slice(c, 1, 3, 7), t.param(b))));
          }) < 1e-6);
  }
  SUBCASE("embedding gather with repeats") {
    const std::vector<int> ids = {4, 0, 4};
    CHECK(check(all, [&](Tape& t) {
            return sum(mul(embedding(t.param(table), ids), t.param(a)));
          }) < 1e-6);
  }
}

TEST_CASE("cross entropy value equals explicit log-softmax") {
  Tape t;
  const Tensor logits = Tensor::matrix(2, 3, {1.0, 2.0, 0.5, -1.0, 0.0, 3.0});
  const std::vector<int> targets = {2, 0};
  const double got = t.value(softmax_cross_entropy(t.constant(logits), targets)).item();
  double want = 0.0;
  for (int r = 0; r < 2; ++r) {
    double z = 0.0;
    for (int c = 0; c < 3; ++c) z += std::exp(logits.at(r, c));
    want -= std::log(std::exp(logits.at(r, targets[static_cast<std::size_t>(r)])) / z);
  }
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("finite_diff basics") {
  Parameter x("x", Tensor::scalar(3.0));
  const Tensor g = finite_diff([&] { return x.value[0] * x.value[0]; }, x, 1e-3);
  CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(x.value[0] == 3.0);

  Parameter c("c", Tensor::vector({1.0, 2.0}));
  const Tensor z = finite_diff([] { return 4.0; }, c);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
}

TEST_CASE("finite_diff restores the parameter bit-exactly") {
  Rng rng(9);
  Parameter p = random_param("p", {4, 3}, rng);
  const Tensor before = p.value;
  finite_diff([&] { return p.value[5] * 2.0; }, p, 0.1);
  CHECK(p.value == before);
}

TEST_CASE("joint embedding distance: backward and finite differences agree") {
  Rng rng(21);
  Parameter fs = random_param("fs", {8}, rng);
  Parameter ft = random_param("ft", {8}, rng);
  CHECK(check({&fs, &ft}, [&](Tape& t) { return sq_norm(sub(t.param(fs), t.param(ft))); }) < 1e-6);
}

TEST_CASE("relative error floor") {
  CHECK(relative_error(1.0, 1.0) == 0.0);
  CHECK(relative_error(0.0, 1e-9) == doctest::Approx(1e-3));
  CHECK(relative_error(2.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("the sigmoid fault hook is caught") {
  Rng rng(2);
  Parameter a = random_param("a", {2, 3}, rng);
  testing::set_fault(testing::Fault::kFlipSigmoidBackward);
  const double err = check({&a}, [&](Tape& t) { return sum(sigmoid(t.param(a))); });
  testing::set_fault(testing::Fault::kNone);
  CHECK(err > 1.0);
}
