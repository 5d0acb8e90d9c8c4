// nn_test.cc

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
#include <stdexcept>

#include "doctest.h"
#include "editnet/errors.h"
#include "editnet/nn.h"
#include "test_util.h"

namespace editnet {
namespace {

using testing::MaxRelError;
using testing::NumericGradient;

Matrix NaiveLinear(const Matrix& x, const Matrix& w, const Matrix& b) {
  Matrix y(x.rows(), w.cols());
  for (Eigen::Index n = 0; n < x.rows(); ++n) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      double acc = b(0, j);
      for (Eigen::Index i = 0; i < x.cols(); ++i) acc += x(n, i) * w(i, j);
      y(n, j) = acc;
    }
  }
  return y;
}

// Random shape in [lo, hi].
Eigen::Index Dim(Rng& rng, int lo, int hi) {
  return lo + static_cast<Eigen::Index>(rng.UniformInt(hi - lo + 1));
}

// Keep inputs at least `gap` away from the ReLU kink.
Matrix AwayFromZero(Matrix x, double gap) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double& v = x.data()[i];
    if (std::abs(v) < gap) v = v < 0 ? v - gap : v + gap;
  }
  return x;
}

TEST_CASE("linear forward matches a triple loop") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    LinearLayer l(Dim(rng, 1, 9), Dim(rng, 1, 9));
    l.weight = rng.NormalMatrix(l.InputDim(), l.OutputDim());
    l.bias = rng.NormalMatrix(1, l.OutputDim());
    const Matrix x = rng.NormalMatrix(Dim(rng, 1, 7), l.InputDim());
    const Matrix got = l.Forward(x);
    const Matrix want = NaiveLinear(x, l.weight, l.bias);
    for (Eigen::Index i = 0; i < got.size(); ++i) {
      CHECK(std::abs(got.data()[i] - want.data()[i]) <=
            1e-12 * std::max(1.0, std::abs(want.data()[i])));
    }
  }
}

TEST_CASE("sum of identity linear has unit bias gradient") {
  LinearLayer l(3, 3);
  l.weight = Matrix::Identity(3, 3);
  l.bias.setZero();
  const Matrix x = Matrix::Constant(1, 3, 0.5);
  l.ZeroGrad();
  l.Backward(x, Matrix::Ones(1, 3));
  CHECK(l.grad_bias == Matrix::Ones(1, 3));
}

TEST_CASE("linear gradients match finite differences over random shapes") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    LinearLayer l(Dim(rng, 1, 8), Dim(rng, 1, 8));
    l.weight = rng.NormalMatrix(l.InputDim(), l.OutputDim());
    l.bias = rng.NormalMatrix(1, l.OutputDim());
    Matrix x = rng.NormalMatrix(Dim(rng, 1, 6), l.InputDim());
    const Matrix r = rng.NormalMatrix(x.rows(), l.OutputDim());
    auto loss = [&]() { return (l.Forward(x).array() * r.array()).sum(); };
    l.ZeroGrad();
    const Matrix gx = l.Backward(x, r);
    const Matrix gw = l.grad_weight;
    const Matrix gb = l.grad_bias;
    CHECK(MaxRelError(gx, NumericGradient(loss, x)) < 1e-4);
    CHECK(MaxRelError(gw, NumericGradient(loss, l.weight)) < 1e-4);
    CHECK(MaxRelError(gb, NumericGradient(loss, l.bias)) < 1e-4);
  }
}

TEST_CASE("activation values") {
  Matrix v(1, 3);
  v << -1, 0, 2;
  Matrix want(1, 3);
  want << 0, 0, 2;
  CHECK(Relu(v) == want);
  CHECK(Tanh(Matrix::Zero(1, 1))(0, 0) == 0.0);
  const Matrix big = Tanh(Matrix::Constant(1, 2, 50.0));
  CHECK(big(0, 0) <= 1.0);
  CHECK(Tanh(Matrix::Constant(1, 1, 3.0))(0, 0) < Tanh(Matrix::Constant(1, 1, 4.0))(0, 0));
  // Subgradient at the kink and slope of tanh at zero.
  CHECK(ReluBackward(Matrix::Zero(1, 1), Matrix::Ones(1, 1))(0, 0) == 0.0);
  CHECK(TanhBackward(Tanh(Matrix::Zero(1, 1)), Matrix::Ones(1, 1))(0, 0) == 1.0);
}

TEST_CASE("activation gradients match finite differences") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix x = AwayFromZero(rng.NormalMatrix(Dim(rng, 1, 6), Dim(rng, 1, 8)), 1e-2);
    const Matrix r = rng.NormalMatrix(x.rows(), x.cols());
    auto relu_loss = [&]() { return (Relu(x).array() * r.array()).sum(); };
    auto tanh_loss = [&]() { return (Tanh(x).array() * r.array()).sum(); };
    const Matrix g_relu = ReluBackward(x, r);
    const Matrix g_tanh = TanhBackward(Tanh(x), r);
    CHECK(MaxRelError(g_relu, NumericGradient(relu_loss, x)) < 1e-4);
    CHECK(MaxRelError(g_tanh, NumericGradient(tanh_loss, x)) < 1e-4);
  }
}

TEST_CASE("batch norm train mode normalizes each channel") {
  Rng rng(17);
  BatchNormLayer bn(5);
  const Matrix x = 3.0 * rng.NormalMatrix(32, 5) + Matrix::Constant(32, 5, 2.0);
  BatchNormCache cache;
  const Matrix y = bn.ForwardTrain(x, &cache);
  for (Eigen::Index j = 0; j < 5; ++j) {
    const double mean = y.col(j).mean();
    const double var = (y.col(j).array() - mean).square().mean();
    CHECK(std::abs(mean) < 1e-6);
    CHECK(std::abs(var - 1.0) < 1e-5);
  }
}

TEST_CASE("batch norm running statistics follow the momentum rule") {
  Rng rng(19);
  BatchNormLayer bn(3);
  bn.momentum = 0.1;
  Matrix rm = Matrix::Zero(1, 3);
  Matrix rv = Matrix::Ones(1, 3);
  for (int step = 0; step < 4; ++step) {
    const Matrix x = rng.NormalMatrix(10, 3);
    BatchNormCache cache;
    bn.ForwardTrain(x, &cache);
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double mean = x.col(j).mean();
      const double var = (x.col(j).array() - mean).square().sum() / 10.0;
      rm(0, j) = 0.9 * rm(0, j) + 0.1 * mean;
      rv(0, j) = 0.9 * rv(0, j) + 0.1 * var;
    }
    CHECK((bn.running_mean - rm).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((bn.running_var - rv).cwiseAbs().maxCoeff() < 1e-15);
  }
  // Probes can leave the running statistics alone.
  const Matrix before = bn.running_mean;
  BatchNormCache cache;
  bn.ForwardTrain(rng.NormalMatrix(10, 3), &cache, false);
  CHECK(BitEqual(bn.running_mean, before));
}

TEST_CASE("batch norm eval mode uses the running statistics") {
  BatchNormLayer bn(2);
  bn.running_mean << 1.0, -2.0;
  bn.running_var << 4.0, 0.25;
  bn.gamma << 2.0, 1.0;
  bn.beta << 0.5, 0.0;
  Matrix x(1, 2);
  x << 3.0, -1.0;
  const Matrix y = bn.Forward(x);
  CHECK(y(0, 0) == doctest::Approx(2.0 * 2.0 / std::sqrt(4.0 + 1e-5) + 0.5).epsilon(1e-14));
  CHECK(y(0, 1) == doctest::Approx(1.0 / std::sqrt(0.25 + 1e-5)).epsilon(1e-14));
}

TEST_CASE("batch norm gradients match finite differences") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    BatchNormLayer bn(Dim(rng, 1, 6));
    bn.gamma = rng.NormalMatrix(1, bn.Width());
    bn.beta = rng.NormalMatrix(1, bn.Width());
    Matrix x = rng.NormalMatrix(Dim(rng, 2, 8), bn.Width());
    const Matrix r = rng.NormalMatrix(x.rows(), bn.Width());
    auto loss = [&]() {
      BatchNormCache c;
      return (bn.ForwardTrain(x, &c, false).array() * r.array()).sum();
    };
    BatchNormCache cache;
    bn.ForwardTrain(x, &cache, false);
    bn.ZeroGrad();
    const Matrix gx = bn.Backward(cache, r);
    const Matrix gg = bn.grad_gamma;
    const Matrix gb = bn.grad_beta;
    CHECK(MaxRelError(gx, NumericGradient(loss, x)) < 1e-4);
    CHECK(MaxRelError(gg, NumericGradient(loss, bn.gamma)) < 1e-4);
    CHECK(MaxRelError(gb, NumericGradient(loss, bn.beta)) < 1e-4);
  }
}

TEST_CASE("batch norm refuses misuse") {
  BatchNormLayer bn(2);
  BatchNormCache cache;
  CHECK_THROWS_AS(bn.Backward(cache, Matrix::Ones(3, 2)), std::logic_error);
  CHECK_THROWS_AS(bn.ForwardTrain(Matrix::Ones(1, 2), &cache), UsageError);
}

TEST_CASE("initializers") {
  Rng rng(29);
  LinearLayer he(400, 300);
  he.InitHeNormal(rng);
  const double var = he.weight.array().square().mean();
  CHECK(var == doctest::Approx(2.0 / 400).epsilon(0.02));
  CHECK(he.bias.isZero(0.0));
  LinearLayer uni(64, 200);
  uni.InitFanInUniform(rng);
  CHECK(uni.weight.cwiseAbs().maxCoeff() <= 1.0 / 8.0);
  CHECK(uni.weight.array().square().mean() == doctest::Approx(1.0 / (3 * 64)).epsilon(0.03));
  CHECK(uni.bias.isZero(0.0));
}

TEST_CASE("concat label appends the one-hot to every row") {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  Vector c(2);
  c << 0, 1;
  Matrix want(2, 4);
  want << 1, 2, 0, 1, 3, 4, 0, 1;
  CHECK(ConcatLabel(x, c) == want);
}

}  // namespace
}  // namespace editnet
