// baselines.cc

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

#include "editnet/baselines.h"

#include <Eigen/Eigenvalues>
#include <string>

#include "editnet/errors.h"

namespace editnet {

DomainStats ComputeStats(const Matrix& x, double std_floor) {
  if (x.rows() < 2) {
    throw UsageError("statistics need at least 2 rows, got " +
                     std::to_string(x.rows()));
  }
  CheckFinite(x, "statistics input");
  DomainStats s;
  s.count = static_cast<std::uint64_t>(x.rows());
  s.mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - s.mean;
  s.std = (centered.array().square().colwise().sum() /
           static_cast<double>(x.rows() - 1))
              .sqrt()
              .max(std_floor);
  return s;
}

Matrix Standardize(const Matrix& x, const DomainStats& stats) {
  CheckCols(x, stats.dim(), "standardize");
  Matrix y = x.rowwise() - stats.mean;
  return y.array().rowwise() / stats.std.array();
}

Matrix Destandardize(const Matrix& x, const DomainStats& stats) {
  CheckCols(x, stats.dim(), "destandardize");
  Matrix y = x.array().rowwise() * stats.std.array();
  y.rowwise() += stats.mean;
  return y;
}

BaselineKind ParseBaselineKind(std::string_view name) {
  if (name == "center") return BaselineKind::kCenter;
  if (name == "center_shift") return BaselineKind::kCenterShift;
  if (name == "standardize") return BaselineKind::kStandardize;
  if (name == "standardize_recolor") return BaselineKind::kStandardizeRecolor;
  throw UsageError("unknown baseline '" + std::string(name) + "'");
}

std::string_view BaselineName(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kCenter: return "center";
    case BaselineKind::kCenterShift: return "center_shift";
    case BaselineKind::kStandardize: return "standardize";
    case BaselineKind::kStandardizeRecolor: return "standardize_recolor";
  }
  return "center";
}

Matrix BaselineTransfer(BaselineKind kind, const Matrix& x,
                        const DomainStats& tar, const DomainStats& src) {
  CheckCols(x, tar.dim(), "baseline transfer (target stats)");
  CheckCols(x, src.dim(), "baseline transfer (source stats)");
  Matrix y = x.rowwise() - tar.mean;
  switch (kind) {
    case BaselineKind::kCenter:
      break;
    case BaselineKind::kCenterShift:
      y.rowwise() += src.mean;
      break;
    case BaselineKind::kStandardize:
      y = y.array().rowwise() / tar.std.array();
      break;
    case BaselineKind::kStandardizeRecolor:
      y = y.array().rowwise() * (src.std.array() / tar.std.array());
      y.rowwise() += src.mean;
      break;
  }
  return y;
}

Matrix Covariance(const Matrix& x) {
  if (x.rows() < 2) throw UsageError("covariance needs at least 2 rows");
  const Matrix centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

Matrix SymmetricPower(const Matrix& s, double power) {
  if (!s.allFinite()) {
    throw NumericalError("eigendecomposition of a non-finite matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition failed");
  }
  const Eigen::VectorXd values =
      solver.eigenvalues().array().max(kEigenFloor).pow(power);
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  return vectors * values.asDiagonal() * vectors.transpose();
}

CoralTransform FitCoral(const Matrix& tar_train, const Matrix& src_train,
                        double ridge, bool align_means) {
  CheckCols(src_train, tar_train.cols(), "CORAL source set");
  CheckFinite(tar_train, "CORAL target set");
  CheckFinite(src_train, "CORAL source set");
  const Eigen::Index d = tar_train.cols();
  const Matrix cov_tar = Covariance(tar_train);
  const Matrix cov_src = Covariance(src_train);
  CoralTransform t;
  t.ridge_tar = ridge >= 0.0 ? ridge : 1e-4 * cov_tar.trace() / static_cast<double>(d);
  t.ridge_src = ridge >= 0.0 ? ridge : 1e-4 * cov_src.trace() / static_cast<double>(d);
  const Matrix eye = Matrix::Identity(d, d);
  t.whitening = SymmetricPower(cov_tar + t.ridge_tar * eye, -0.5);
  t.coloring = SymmetricPower(cov_src + t.ridge_src * eye, 0.5);
  t.target_mean = tar_train.colwise().mean();
  t.source_mean = src_train.colwise().mean();
  t.align_means = align_means;
  return t;
}

Matrix ApplyCoral(const CoralTransform& t, const Matrix& x) {
  CheckCols(x, t.dim(), "CORAL input");
  if (t.align_means) {
    Matrix y = (x.rowwise() - t.target_mean) * t.whitening * t.coloring;
    y.rowwise() += t.source_mean;
    return y;
  }
  // Covariance-only: rotate around the target mean and stay there.
  Matrix y = (x.rowwise() - t.target_mean) * t.whitening * t.coloring;
  y.rowwise() += t.target_mean;
  return y;
}

}  // namespace editnet
