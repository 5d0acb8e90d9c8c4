// losses_test.cc

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
#include <vector>

#include "doctest.h"
#include "editnet/losses.h"
#include "test_util.h"

namespace editnet {
namespace {

using testing::MaxRelError;
using testing::NumericGradient;

// Per-dimension closed form 1/2 (var + (mu - p)^2 - 1 - log var).
double KlOracle(const Matrix& mu, const Matrix& lv, const Vector& p) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < mu.rows(); ++n) {
    for (Eigen::Index j = 0; j < mu.cols(); ++j) {
      const double var = std::exp(lv(n, j));
      const double d = mu(n, j) - p(j);
      total += 0.5 * (var + d * d - 1.0 - lv(n, j));
    }
  }
  return total / mu.rows();
}

double CosineOracle(const Vector& a, const Vector& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  const double u = std::min(std::max(1.0 - c, 1e-7), 2.0);
  return std::max(0.0, -std::log(u));
}

TEST_CASE("reconstruction loss") {
  Rng rng(1);
  const Matrix x = rng.NormalMatrix(4, 6);
  CHECK(ReconstructionLoss(x, x) == 0.0);
  Matrix xhat = rng.NormalMatrix(4, 6);
  double want = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    want += std::pow(x.data()[i] - xhat.data()[i], 2);
  }
  CHECK(ReconstructionLoss(x, xhat) == doctest::Approx(want / 4).epsilon(1e-14));
  Matrix g;
  ReconstructionLoss(x, xhat, &g);
  auto f = [&]() { return ReconstructionLoss(x, xhat); };
  CHECK(MaxRelError(g, NumericGradient(f, xhat)) < 1e-4);
}

TEST_CASE("KL identities") {
  const Matrix zero = Matrix::Zero(3, 5);
  Rng rng(2);
  const Matrix mu = rng.NormalMatrix(3, 5);
  CHECK(KlLoss(mu, zero, Vector(mu.row(0))) >= 0.0);
  // mu equal to the prior, unit variance.
  const Vector p = rng.NormalMatrix(1, 5).row(0);
  Matrix at_prior(3, 5);
  at_prior.rowwise() = p;
  CHECK(KlLoss(at_prior, zero, p) == 0.0);
  // One latent dimension shifted by one.
  CHECK(KlLoss(Matrix::Ones(1, 1), Matrix::Zero(1, 1), Vector::Zero(1)) == 0.5);
}

TEST_CASE("KL matches the per-dimension closed form") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix mu = rng.NormalMatrix(4, 3);
    const Matrix lv = rng.NormalMatrix(4, 3);
    const Vector p = rng.NormalMatrix(1, 3).row(0);
    CHECK(KlLoss(mu, lv, p) == doctest::Approx(KlOracle(mu, lv, p)).epsilon(1e-12));
  }
}

TEST_CASE("KL is non-negative on random inputs") {
  Rng rng(4);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vector p = 3.0 * rng.NormalMatrix(1, 4).row(0);
    // Odd trials sit near the minimum, where cancellation could go negative.
    const double scale = i % 2 ? std::pow(10.0, -rng.Uniform(0.0, 8.0)) : 3.0;
    const Matrix mu = p + scale * rng.NormalMatrix(1, 4);
    const Matrix lv = scale * rng.NormalMatrix(1, 4);
    worst = std::min(worst, KlLoss(mu, lv, p));
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("KL gradients match finite differences") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix mu = rng.NormalMatrix(3, 4);
    Matrix lv = rng.NormalMatrix(3, 4);
    Matrix p = rng.NormalMatrix(1, 4);
    Matrix gmu, glv;
    Vector gp;
    KlLoss(mu, lv, p.row(0), &gmu, &glv, &gp);
    auto f = [&]() { return KlLoss(mu, lv, p.row(0)); };
    CHECK(MaxRelError(gmu, NumericGradient(f, mu)) < 1e-4);
    CHECK(MaxRelError(glv, NumericGradient(f, lv)) < 1e-4);
    CHECK(MaxRelError(Matrix(gp), NumericGradient(f, p)) < 1e-4);
  }
}

TEST_CASE("cosine pair loss values") {
  Vector a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  CHECK(CosinePairLoss(a, b) == 0.0);
  CHECK(CosinePairLoss(a, -a) == 0.0);
  // cos = 1 - 1/e gives exactly one nat.
  const double c = 1.0 - std::exp(-1.0);
  Vector d(2);
  d << c, std::sqrt(1.0 - c * c);
  CHECK(std::abs(CosinePairLoss(a, d) - 1.0) < 1e-9);
  // Identical directions hit the floor.
  CHECK(CosinePairLoss(a, 3.0 * a) == doctest::Approx(-std::log(1e-7)).epsilon(1e-15));
}

TEST_CASE("cosine batch loss of two identical rows") {
  Matrix t(2, 3);
  t << 1, 2, 3, 1, 2, 3;
  Matrix gt, gs;
  const double loss = CosineBatchLoss(t, Matrix(0, 3), &gt, &gs);
  CHECK(loss == doctest::Approx(16.118095650958319).epsilon(1e-12));
  // Outside the clamp's active range no gradient flows.
  CHECK(gt.isZero(0.0));
}

TEST_CASE("cosine batch loss enumerates the right pairs") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix t = rng.NormalMatrix(5, 4);
    const Matrix s = rng.NormalMatrix(3, 4);
    std::vector<double> terms;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) terms.push_back(CosineOracle(t.row(i), t.row(j)));
      for (int j = 0; j < 3; ++j) terms.push_back(CosineOracle(t.row(i), s.row(j)));
    }
    double want = 0.0;
    for (double v : terms) want += v;
    want /= static_cast<double>(terms.size());
    CHECK(terms.size() == 10 + 15);
    CHECK(CosineBatchLoss(t, s) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("cosine batch gradients match finite differences") {
  Rng rng(7);
  int checked = 0;
  while (checked < 100) {
    Matrix t = rng.NormalMatrix(4, 5);
    Matrix s = rng.NormalMatrix(3, 5);
    // Skip draws with a cosine near the relu kink at zero.
    bool near_kink = false;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) near_kink |= std::abs(t.row(i).normalized().dot(t.row(j).normalized())) < 1e-3;
      }
      for (int j = 0; j < 3; ++j) {
        near_kink |= std::abs(t.row(i).normalized().dot(s.row(j).normalized())) < 1e-3;
      }
    }
    if (near_kink) continue;
    Matrix gt, gs;
    CosineBatchLoss(t, s, &gt, &gs);
    auto f = [&]() { return CosineBatchLoss(t, s); };
    CHECK(MaxRelError(gt, NumericGradient(f, t)) < 1e-4);
    CHECK(MaxRelError(gs, NumericGradient(f, s)) < 1e-4);
    ++checked;
  }
}

TEST_CASE("total loss adds the parts") {
  const LossBreakdown b = TotalLoss(1.0, 2.0, 0.25, 0.5, 0.125);
  CHECK(b.rec == 3.0);
  CHECK(b.kl == 0.75);
  CHECK(b.cos == 0.125);
  CHECK(b.total == 3.875);
}

}  // namespace
}  // namespace editnet
