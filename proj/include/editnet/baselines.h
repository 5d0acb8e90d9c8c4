// editnet/baselines.h

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

#ifndef EDITNET_BASELINES_H_
#define EDITNET_BASELINES_H_

#include <cstdint>
#include <string_view>

#include "editnet/matrix.h"

namespace editnet {

inline constexpr double kStdFloor = 1e-8;

// Per-channel statistics of one domain's training embeddings.
struct DomainStats {
  Vector mean;
  Vector std;  // unbiased (N - 1), floored at kStdFloor
  std::uint64_t count = 0;

  Eigen::Index dim() const { return mean.size(); }
};

// Throws UsageError for fewer than two rows.
DomainStats ComputeStats(const Matrix& x, double std_floor = kStdFloor);

// (x - mean) / std, channel by channel.
Matrix Standardize(const Matrix& x, const DomainStats& stats);
// Inverse of Standardize.
Matrix Destandardize(const Matrix& x, const DomainStats& stats);

// Mean/std transfer rules applied to target embeddings X:
//   center               X - mu_tar
//   center_shift         X - mu_tar + mu_src
//   standardize          (X - mu_tar) / sigma_tar
//   standardize_recolor  (X - mu_tar) / sigma_tar * sigma_src + mu_src
enum class BaselineKind { kCenter, kCenterShift, kStandardize, kStandardizeRecolor };

BaselineKind ParseBaselineKind(std::string_view name);  // throws UsageError
std::string_view BaselineName(BaselineKind kind);

Matrix BaselineTransfer(BaselineKind kind, const Matrix& x,
                        const DomainStats& tar, const DomainStats& src);

// Correlation alignment from target to source:
//   x -> (x - target_mean) * whitening * coloring + source_mean
// with whitening = (Cov_tar + r_tar I)^(-1/2), coloring = (Cov_src + r_src I)^(1/2).
struct CoralTransform {
  Matrix whitening;
  Matrix coloring;
  Vector target_mean;
  Vector source_mean;
  // Off: means are left alone and only the covariance is mapped.
  bool align_means = true;
  double ridge_tar = 0.0;
  double ridge_src = 0.0;

  Eigen::Index dim() const { return whitening.rows(); }
};

// Negative ridge selects the default 1e-4 * trace(Cov) / D per domain.
inline constexpr double kDefaultRidge = -1.0;
inline constexpr double kEigenFloor = 1e-10;

CoralTransform FitCoral(const Matrix& tar_train, const Matrix& src_train,
                        double ridge = kDefaultRidge, bool align_means = true);
Matrix ApplyCoral(const CoralTransform& t, const Matrix& x);

// Unbiased sample covariance (divisor N - 1).
Matrix Covariance(const Matrix& x);

// S^p for symmetric S via eigendecomposition with eigenvalues floored at
// kEigenFloor.  Throws NumericalError on non-finite input.
Matrix SymmetricPower(const Matrix& s, double power);

}  // namespace editnet

#endif  // EDITNET_BASELINES_H_
