// baselines_test.cc

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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "editnet/baselines.h"
#include "editnet/errors.h"
#include "test_util.h"

namespace editnet {
namespace {

DomainStats Stats1(double mean, double std) {
  DomainStats s;
  s.mean = Vector::Constant(1, mean);
  s.std = Vector::Constant(1, std);
  s.count = 2;
  return s;
}

double FrobeniusRel(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / b.norm();
}

// Points (+-a, 0), (0, +-b): zero mean, sample covariance diag(2a^2/3, 2b^2/3).
Matrix Cross(double var_x, double var_y) {
  const double a = std::sqrt(1.5 * var_x);
  const double b = std::sqrt(1.5 * var_y);
  Matrix m(4, 2);
  m << a, 0, -a, 0, 0, b, 0, -b;
  return m;
}

TEST_CASE("stats hand case and degenerate channel") {
  Matrix x(2, 2);
  x << 0, 0, 2, 2;
  const DomainStats s = ComputeStats(x);
  CHECK(s.mean(0) == 1.0);
  CHECK(s.mean(1) == 1.0);
  CHECK(s.std(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s.count == 2);
  const DomainStats c = ComputeStats(Matrix::Constant(5, 3, 4.0));
  CHECK(c.std(1) == kStdFloor);
  CHECK(Standardize(Matrix::Constant(1, 3, 4.0), c).isZero(0.0));
  CHECK_THROWS_AS(ComputeStats(Matrix::Ones(1, 3)), UsageError);
}

TEST_CASE("stats match a two-pass oracle and ignore row order") {
  Rng rng(1);
  const Matrix x = 3.0 * rng.NormalMatrix(1000, 8) + Matrix::Constant(1000, 8, 5.0);
  const DomainStats s = ComputeStats(x);
  for (Eigen::Index j = 0; j < 8; ++j) {
    double mean = 0;
    for (Eigen::Index i = 0; i < 1000; ++i) mean += x(i, j);
    mean /= 1000;
    double ss = 0;
    for (Eigen::Index i = 0; i < 1000; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
    CHECK(std::abs(s.mean(j) - mean) < 1e-12 * std::abs(mean));
    CHECK(std::abs(s.std(j) - std::sqrt(ss / 999)) < 1e-12 * std::sqrt(ss / 999));
  }
  const auto perm = rng.Permutation(1000);
  Matrix shuffled(1000, 8);
  for (Eigen::Index i = 0; i < 1000; ++i) shuffled.row(i) = x.row(perm[i]);
  const DomainStats t = ComputeStats(shuffled);
  CHECK((t.mean - s.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((t.std - s.std).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("baseline hand cases") {
  const Matrix x = Matrix::Constant(1, 1, 5.0);
  const DomainStats tar = Stats1(3, 2);
  const DomainStats src = Stats1(10, 4);
  CHECK(BaselineTransfer(BaselineKind::kCenter, x, tar, src)(0, 0) == 2.0);
  CHECK(BaselineTransfer(BaselineKind::kCenterShift, x, tar, src)(0, 0) == 12.0);
  CHECK(BaselineTransfer(BaselineKind::kStandardize, x, tar, src)(0, 0) == 1.0);
  CHECK(BaselineTransfer(BaselineKind::kStandardizeRecolor, x, tar, src)(0, 0) == 14.0);
  CHECK(BaselineTransfer(BaselineKind::kCenter, x, Stats1(0, 2), src)(0, 0) == 5.0);
  CHECK(ParseBaselineKind("standardize_recolor") == BaselineKind::kStandardizeRecolor);
  CHECK_THROWS_AS(ParseBaselineKind("coral2"), UsageError);
}

TEST_CASE("baselines are affine and standardize_recolor inverts") {
  Rng rng(2);
  const Matrix a = 2.0 * rng.NormalMatrix(50, 6);
  const Matrix b = rng.NormalMatrix(50, 6) + Matrix::Constant(50, 6, 1.0);
  const DomainStats tar = ComputeStats(a);
  const DomainStats src = ComputeStats(b);
  const Matrix x = rng.NormalMatrix(4, 6);
  const Matrix y = rng.NormalMatrix(4, 6);
  for (BaselineKind k : {BaselineKind::kCenter, BaselineKind::kCenterShift,
                         BaselineKind::kStandardize, BaselineKind::kStandardizeRecolor}) {
    auto f = [&](const Matrix& m) { return BaselineTransfer(k, m, tar, src); };
    const Matrix f0 = f(Matrix::Zero(4, 6));
    const Matrix lhs = f(1.5 * x - 0.5 * y) - f0;
    const Matrix rhs = 1.5 * (f(x) - f0) - 0.5 * (f(y) - f0);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
  const Matrix there = BaselineTransfer(BaselineKind::kStandardizeRecolor, x, tar, src);
  const Matrix back = BaselineTransfer(BaselineKind::kStandardizeRecolor, there, src, tar);
  CHECK((back - x).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((BaselineTransfer(BaselineKind::kStandardizeRecolor, x, tar, tar) - x)
            .cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Destandardize(Standardize(x, tar), tar) - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("CORAL diagonal closed form") {
  const CoralTransform t = FitCoral(Cross(4, 1), Cross(1, 4), 0.0);
  Matrix w(2, 2), c(2, 2);
  w << 0.5, 0, 0, 1;
  c << 1, 0, 0, 2;
  CHECK((t.whitening - w).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((t.coloring - c).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("CORAL recolors target covariance to the source covariance") {
  Rng rng(3);
  const Matrix mix_t = rng.NormalMatrix(4, 4);
  const Matrix mix_s = rng.NormalMatrix(4, 4);
  const Matrix tar = rng.NormalMatrix(5000, 4) * mix_t + Matrix::Constant(5000, 4, 2.0);
  const Matrix src = rng.NormalMatrix(5000, 4) * mix_s;
  const CoralTransform t = FitCoral(tar, src, 0.0);
  CHECK(FrobeniusRel(Covariance(ApplyCoral(t, tar)), Covariance(src)) < 1e-9);
  // A fresh target draw lands on the generating source covariance.
  const Matrix tar_new = rng.NormalMatrix(5000, 4) * mix_t + Matrix::Constant(5000, 4, 2.0);
  const double rel =
      FrobeniusRel(Covariance(ApplyCoral(t, tar_new)), mix_s.transpose() * mix_s);
  CHECK(rel < 0.05);
  // Training-data invariants.
  const Matrix eye = Matrix::Identity(4, 4);
  CHECK(FrobeniusRel(t.whitening * Covariance(tar) * t.whitening.transpose(), eye) < 1e-6);
  CHECK(FrobeniusRel(t.coloring * t.coloring.transpose(), Covariance(src)) < 1e-6);
  const Vector mean = ApplyCoral(t, tar).colwise().mean();
  CHECK((mean - src.colwise().mean()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("CORAL inverse and identity") {
  Rng rng(4);
  const Matrix tar = rng.NormalMatrix(200, 3) * rng.NormalMatrix(3, 3);
  const Matrix src = rng.NormalMatrix(200, 3) * rng.NormalMatrix(3, 3);
  const CoralTransform t = FitCoral(tar, src, 0.0);
  CoralTransform inv = t;
  inv.whitening = t.coloring.inverse();
  inv.coloring = t.whitening.inverse();
  std::swap(inv.target_mean, inv.source_mean);
  const Matrix x = rng.NormalMatrix(1, 3);
  CHECK((ApplyCoral(inv, ApplyCoral(t, x)) - x).cwiseAbs().maxCoeff() < 1e-8);

  CoralTransform id = t;
  id.whitening = Matrix::Identity(3, 3);
  id.coloring = Matrix::Identity(3, 3);
  id.source_mean = id.target_mean;
  CHECK((ApplyCoral(id, x) - x).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("a growing ridge pulls CORAL toward a pure mean shift") {
  Rng rng(5);
  const Matrix tar = rng.NormalMatrix(300, 4) * rng.NormalMatrix(4, 4);
  const Matrix src = rng.NormalMatrix(300, 4) * rng.NormalMatrix(4, 4);
  const Matrix eye = Matrix::Identity(4, 4);
  double prev = 1e300;
  for (double ridge : {0.1, 10.0, 1000.0}) {
    const CoralTransform t = FitCoral(tar, src, ridge);
    const double dist = (t.whitening * t.coloring - eye).norm();
    CHECK(dist < prev);
    prev = dist;
  }
}

TEST_CASE("default ridge and failure modes") {
  Rng rng(6);
  const Matrix tar = 2.0 * rng.NormalMatrix(50, 5);
  const Matrix src = rng.NormalMatrix(50, 5);
  const CoralTransform t = FitCoral(tar, src);
  CHECK(t.ridge_tar == doctest::Approx(1e-4 * Covariance(tar).trace() / 5));
  CHECK(t.ridge_src == doctest::Approx(1e-4 * Covariance(src).trace() / 5));
  Matrix bad = tar;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(FitCoral(bad, src), NumericalError);
  CHECK_THROWS_AS(ApplyCoral(t, Matrix::Ones(2, 4)), FormatError);
}

TEST_CASE("symmetric powers") {
  Rng rng(7);
  const Matrix a = rng.NormalMatrix(5, 5);
  const Matrix s = a * a.transpose() + Matrix::Identity(5, 5);
  const Matrix r = SymmetricPower(s, 0.5);
  CHECK(FrobeniusRel(r * r, s) < 1e-12);
  CHECK(FrobeniusRel(SymmetricPower(s, -0.5) * r, Matrix::Identity(5, 5)) < 1e-12);
  // Rank-deficient input: eigenvalues are floored, result stays finite.
  const Matrix v = rng.NormalMatrix(5, 1);
  CHECK(SymmetricPower(v * v.transpose(), -0.5).allFinite());
}

}  // namespace
}  // namespace editnet
