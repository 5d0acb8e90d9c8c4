// nn.cc

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

#include "editnet/nn.h"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "editnet/errors.h"

namespace editnet {

void CheckFinite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw NumericalError("non-finite value in " + std::string(what));
  }
}

void CheckFinite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    throw NumericalError("non-finite value in " + std::string(what));
  }
}

void CheckCols(const Matrix& m, Eigen::Index cols, std::string_view what) {
  if (m.cols() != cols) {
    std::ostringstream os;
    os << what << ": expected " << cols << " columns, got " << m.cols();
    throw FormatError(os.str());
  }
}

bool BitEqual(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return a.size() == 0 ||
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

LinearLayer::LinearLayer(Eigen::Index in, Eigen::Index out)
    : weight(Matrix::Zero(in, out)),
      bias(Matrix::Zero(1, out)),
      grad_weight(Matrix::Zero(in, out)),
      grad_bias(Matrix::Zero(1, out)) {}

void LinearLayer::InitHeNormal(Rng& rng) {
  const double std = std::sqrt(2.0 / static_cast<double>(InputDim()));
  weight = rng.NormalMatrix(InputDim(), OutputDim()) * std;
  bias.setZero();
}

void LinearLayer::InitFanInUniform(Rng& rng) {
  const double a = 1.0 / std::sqrt(static_cast<double>(InputDim()));
  for (Eigen::Index i = 0; i < weight.size(); ++i) {
    weight.data()[i] = rng.Uniform(-a, a);
  }
  bias.setZero();
}

Matrix LinearLayer::Forward(const Matrix& x) const {
  CheckCols(x, InputDim(), "linear layer input");
  Matrix y = x * weight;
  y.rowwise() += bias.row(0);
  return y;
}

Matrix LinearLayer::Backward(const Matrix& x, const Matrix& grad_out) {
  CheckCols(x, InputDim(), "linear layer input");
  CheckCols(grad_out, OutputDim(), "linear layer upstream gradient");
  grad_weight.noalias() += x.transpose() * grad_out;
  grad_bias += grad_out.colwise().sum();
  return grad_out * weight.transpose();
}

void LinearLayer::ZeroGrad() {
  grad_weight.setZero();
  grad_bias.setZero();
}

BatchNormLayer::BatchNormLayer(Eigen::Index width)
    : gamma(Matrix::Ones(1, width)),
      beta(Matrix::Zero(1, width)),
      running_mean(Matrix::Zero(1, width)),
      running_var(Matrix::Ones(1, width)),
      grad_gamma(Matrix::Zero(1, width)),
      grad_beta(Matrix::Zero(1, width)) {}

Matrix BatchNormLayer::Forward(const Matrix& x) const {
  CheckCols(x, Width(), "batch-norm input");
  CheckFinite(x, "batch-norm input");
  const Vector scale =
      gamma.row(0).array() / (running_var.row(0).array() + epsilon).sqrt();
  const Vector shift =
      beta.row(0).array() - running_mean.row(0).array() * scale.array();
  Matrix y = x.array().rowwise() * scale.array();
  y.rowwise() += shift;
  return y;
}

Matrix BatchNormLayer::ForwardTrain(const Matrix& x, BatchNormCache* cache,
                                    bool track_running) {
  CheckCols(x, Width(), "batch-norm input");
  CheckFinite(x, "batch-norm input");
  if (x.rows() < 2) {
    throw UsageError("batch-norm in train mode needs at least 2 rows");
  }
  const double n = static_cast<double>(x.rows());
  const Vector mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - mean;
  const Vector var = centered.array().square().colwise().sum() / n;
  const Vector inv_std = (var.array() + epsilon).rsqrt();
  Matrix normalized = centered.array().rowwise() * inv_std.array();

  if (track_running) {
    running_mean = (1.0 - momentum) * running_mean + momentum * mean;
    running_var = (1.0 - momentum) * running_var + momentum * var;
  }

  Matrix y = normalized.array().rowwise() * gamma.row(0).array();
  y.rowwise() += beta.row(0);
  if (cache != nullptr) {
    cache->normalized = std::move(normalized);
    cache->inv_std = inv_std;
    cache->valid = true;
  }
  return y;
}

Matrix BatchNormLayer::Forward(const Matrix& x, Mode mode,
                               BatchNormCache* cache) {
  return mode == Mode::kTrain ? ForwardTrain(x, cache) : Forward(x);
}

Matrix BatchNormLayer::Backward(const BatchNormCache& cache,
                                const Matrix& grad_out) {
  if (!cache.valid) {
    throw std::logic_error("batch-norm backward called before forward");
  }
  CheckCols(grad_out, Width(), "batch-norm upstream gradient");
  const Matrix& xhat = cache.normalized;
  const double n = static_cast<double>(xhat.rows());
  grad_gamma += (grad_out.array() * xhat.array()).colwise().sum().matrix();
  grad_beta += grad_out.colwise().sum();

  // dx = inv_std / n * (n * g - sum(g) - xhat * sum(g * xhat)), g = dy * gamma
  const Matrix g = grad_out.array().rowwise() * gamma.row(0).array();
  const Vector sum_g = g.colwise().sum();
  const Vector sum_gx = (g.array() * xhat.array()).colwise().sum();
  Matrix dx = (n * g).rowwise() - sum_g;
  dx -= (xhat.array().rowwise() * sum_gx.array()).matrix();
  dx = dx.array().rowwise() * (cache.inv_std.array() / n);
  return dx;
}

void BatchNormLayer::ZeroGrad() {
  grad_gamma.setZero();
  grad_beta.setZero();
}

Matrix Relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix Tanh(const Matrix& x) { return x.array().tanh(); }

Matrix Activate(Activation kind, const Matrix& x) {
  return kind == Activation::kRelu ? Relu(x) : Tanh(x);
}

Matrix ReluBackward(const Matrix& input, const Matrix& grad_out) {
  return (input.array() > 0.0).select(grad_out, 0.0);
}

Matrix TanhBackward(const Matrix& output, const Matrix& grad_out) {
  return grad_out.array() * (1.0 - output.array().square());
}

Matrix ConcatLabel(const Matrix& x, const Vector& one_hot) {
  Matrix out(x.rows(), x.cols() + one_hot.size());
  out.leftCols(x.cols()) = x;
  out.rightCols(one_hot.size()).rowwise() = one_hot;
  return out;
}

}  // namespace editnet
