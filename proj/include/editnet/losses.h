// editnet/losses.h

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

#ifndef EDITNET_LOSSES_H_
#define EDITNET_LOSSES_H_

#include "editnet/matrix.h"

namespace editnet {

// Floor and ceiling applied to (1 - cos) before the logarithm of the cosine
// repulsion term; identical directions would otherwise give log(0).
inline constexpr double kCosineFloor = 1e-7;
inline constexpr double kCosineCeiling = 2.0;

struct LossBreakdown {
  double rec = 0.0;
  double kl = 0.0;
  double cos = 0.0;
  double total = 0.0;
};

// (1/N) sum_n ||x_n - x_hat_n||^2.  If grad is non-null it receives dL/dx_hat.
double ReconstructionLoss(const Matrix& x, const Matrix& x_hat,
                          Matrix* grad_x_hat = nullptr);

// KL(N(mu, exp(log_var)) || N(prior, I)) summed over latent dimensions and
// averaged over the batch:
//   -(1/N) sum_n 1/2 sum_j (1 + log_var - (mu - prior)^2 - exp(log_var))
// Gradients are written to the non-null outputs (overwritten, not added).
double KlLoss(const Matrix& mu, const Matrix& log_var, const Vector& prior,
              Matrix* grad_mu = nullptr, Matrix* grad_log_var = nullptr,
              Vector* grad_prior = nullptr);

// relu(-log(clamp(1 - cos<x, y>, floor, 2))).  Non-zero only for cos > 0.
double CosinePairLoss(const Vector& x, const Vector& y);

// Mean of CosinePairLoss over every unordered pair of distinct rows of
// transferred plus every (transferred row, source row) pair.  source may have
// zero rows.  Gradients are overwritten when requested.
double CosineBatchLoss(const Matrix& transferred, const Matrix& source,
                       Matrix* grad_transferred = nullptr,
                       Matrix* grad_source = nullptr);

// rec_tar + rec_src + kl_tar + kl_src + cos, with the first four folded into
// rec and kl.
LossBreakdown TotalLoss(double rec_tar, double rec_src, double kl_tar,
                        double kl_src, double cos);

}  // namespace editnet

#endif  // EDITNET_LOSSES_H_
