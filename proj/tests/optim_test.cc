// optim_test.cc

// Copyright 2026  The editnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "editnet/errors.h"
#include "editnet/optim.h"
#include "test_util.h"

namespace editnet {
namespace {

TEST_CASE("half-cosine schedule") {
  CHECK(CosineLr(0, 100, 1e-3) == 1e-3);
  CHECK(CosineLr(50, 100, 1e-3) == doctest::Approx(5e-4).epsilon(1e-14));
  CHECK(CosineLr(99, 100, 1e-3) > 0.0);
  double prev = 1.0;
  for (int t = 0; t < 100; ++t) {
    const double lr = CosineLr(t, 100, 1.0);
    CHECK(lr <= prev);
    CHECK(lr == doctest::Approx(0.5 * (1 + std::cos(std::numbers::pi * t / 100.0))));
    prev = lr;
  }
  CHECK_THROWS_AS(CosineLr(0, 0, 1.0), UsageError);
  CHECK_THROWS_AS(CosineLr(100, 100, 1.0), UsageError);
}

// Scalar Adam with coupled L2, written out one element at a time.
struct ScalarAdam {
  double m = 0, v = 0;
  int t = 0;
  void Step(double& w, double g, double lr, const AdamOptions& o) {
    ++t;
    const double gd = g + o.weight_decay * w;
    m = o.beta1 * m + (1.0 - o.beta1) * gd;
    v = o.beta2 * v + (1.0 - o.beta2) * (gd * gd);
    const double mhat = m / (1.0 - std::pow(o.beta1, t));
    const double vhat = v / (1.0 - std::pow(o.beta2, t));
    w -= lr * mhat / (std::sqrt(vhat) + o.eps);
  }
};

TEST_CASE("Adam agrees bit for bit with the scalar recurrence") {
  Rng rng(1);
  Matrix w = rng.NormalMatrix(3, 4);
  Matrix g(3, 4);
  std::vector<ParamRef> params{{"w", &w, &g}};
  std::vector<double> ref(w.data(), w.data() + w.size());
  std::vector<ScalarAdam> oracle(w.size());
  AdamOptions opts;
  opts.weight_decay = 1e-3;
  AdamState state;
  for (int step = 0; step < 5; ++step) {
    g = rng.NormalMatrix(3, 4);
    const double lr = CosineLr(step, 5, 1e-3);
    AdamStep(params, state, lr, opts);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      oracle[i].Step(ref[i], g.data()[i], lr, opts);
      CHECK(w.data()[i] == ref[i]);
    }
  }
  CHECK(state.step == 5);
}

TEST_CASE("first Adam step moves each weight by about lr against the gradient") {
  Matrix w = Matrix::Zero(1, 3);
  Matrix g(1, 3);
  g << 2.0, -0.5, 1e-3;
  std::vector<ParamRef> params{{"w", &w, &g}};
  AdamState state;
  AdamStep(params, state, 0.01, AdamOptions{});
  CHECK(w(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(w(0, 1) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(w(0, 2) == doctest::Approx(-0.01).epsilon(1e-4));
}

TEST_CASE("Adam rejects non-finite gradients without touching anything") {
  Matrix w = Matrix::Ones(1, 2);
  Matrix g(1, 2);
  g << 1.0, std::nan("");
  std::vector<ParamRef> params{{"w", &w, &g}};
  AdamState state;
  CHECK_THROWS_AS(AdamStep(params, state, 0.1, AdamOptions{}), NumericalError);
  CHECK(w == Matrix::Ones(1, 2));
  CHECK(state.step == 0);
}

}  // namespace
}  // namespace editnet
