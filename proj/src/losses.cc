// losses.cc

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

#include "editnet/losses.h"

#include <cmath>

#include "editnet/errors.h"

namespace editnet {
namespace {

void CheckSameShape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw FormatError(std::string(what) + ": shape mismatch");
  }
}

// Loss value and d loss / d cos for one cosine.
struct PairTerm {
  double loss;
  double dcos;
};

PairTerm CosineTerm(double cos) {
  const double u = 1.0 - cos;
  if (u < kCosineFloor) return {-std::log(kCosineFloor), 0.0};
  if (u >= 1.0) return {0.0, 0.0};  // relu inactive (cos <= 0)
  // u in [floor, 1): L = -log(u), dL/dcos = 1/u.
  return {-std::log(u), 1.0 / u};
}

Vector RowNorms(const Matrix& m, const char* what) {
  Vector norms = m.rowwise().norm().transpose();
  for (Eigen::Index i = 0; i < norms.size(); ++i) {
    if (!(norms(i) > 0.0)) {
      throw NumericalError(std::string(what) + ": zero-norm row " +
                           std::to_string(i));
    }
  }
  return norms;
}

}  // namespace

double ReconstructionLoss(const Matrix& x, const Matrix& x_hat,
                          Matrix* grad_x_hat) {
  CheckSameShape(x, x_hat, "reconstruction loss");
  if (x.rows() == 0) throw UsageError("reconstruction loss on empty batch");
  const double n = static_cast<double>(x.rows());
  const Matrix diff = x_hat - x;
  if (grad_x_hat != nullptr) *grad_x_hat = (2.0 / n) * diff;
  return diff.squaredNorm() / n;
}

double KlLoss(const Matrix& mu, const Matrix& log_var, const Vector& prior,
              Matrix* grad_mu, Matrix* grad_log_var, Vector* grad_prior) {
  CheckSameShape(mu, log_var, "KL loss");
  if (prior.size() != mu.cols()) throw FormatError("KL loss: prior length");
  if (mu.rows() == 0) throw UsageError("KL loss on empty batch");
  const double n = static_cast<double>(mu.rows());
  const Matrix delta = mu.rowwise() - prior;
  const Matrix var = log_var.array().exp();
  const double sum =
      (1.0 + log_var.array() - delta.array().square() - var.array()).sum();
  if (grad_mu != nullptr) *grad_mu = delta / n;
  if (grad_log_var != nullptr) {
    *grad_log_var = (var.array() - 1.0) / (2.0 * n);
  }
  if (grad_prior != nullptr) *grad_prior = -delta.colwise().sum() / n;
  return -0.5 * sum / n;
}

double CosinePairLoss(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw FormatError("cosine loss: length mismatch");
  const double nx = x.norm();
  const double ny = y.norm();
  if (!(nx > 0.0) || !(ny > 0.0)) {
    throw NumericalError("cosine loss: zero-norm vector");
  }
  return CosineTerm(x.dot(y) / (nx * ny)).loss;
}

double CosineBatchLoss(const Matrix& transferred, const Matrix& source,
                       Matrix* grad_transferred, Matrix* grad_source) {
  const Eigen::Index n = transferred.rows();
  const Eigen::Index m = source.rows();
  if (n == 0) throw UsageError("cosine loss: empty transferred batch");
  if (m > 0) CheckCols(source, transferred.cols(), "cosine loss source");
  const double pairs =
      static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 +
      static_cast<double>(n) * static_cast<double>(m);
  if (pairs == 0.0) throw UsageError("cosine loss: no pairs");

  const Vector nt = RowNorms(transferred, "cosine loss transferred");
  const Matrix ut = transferred.array().colwise() / nt.transpose().array();
  Vector ns;
  Matrix us;
  if (m > 0) {
    ns = RowNorms(source, "cosine loss source");
    us = source.array().colwise() / ns.transpose().array();
  }

  const Matrix within = ut * ut.transpose();
  Matrix w_within = Matrix::Zero(n, n);  // dL/dcos for i < j
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const PairTerm t = CosineTerm(within(i, j));
      total += t.loss;
      w_within(i, j) = t.dcos;
    }
  }
  Matrix w_cross;
  if (m > 0) {
    const Matrix cross = ut * us.transpose();
    w_cross.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const PairTerm t = CosineTerm(cross(i, j));
        total += t.loss;
        w_cross(i, j) = t.dcos;
      }
    }
  }

  if (grad_transferred != nullptr || grad_source != nullptr) {
    // d cos(a, b) / d a = (u_b - cos * u_a) / |a|.  Accumulate dL/du first
    // and then project out the radial component.
    const Matrix sym = (w_within + w_within.transpose()) / pairs;
    Matrix du_t = sym * ut;
    Matrix du_s;
    if (m > 0) {
      const Matrix wc = w_cross / pairs;
      du_t += wc * us;
      du_s = wc.transpose() * ut;
    }
    auto project = [](const Matrix& u, const Matrix& du, const Vector& norms) {
      const Eigen::VectorXd radial = (u.array() * du.array()).rowwise().sum();
      Matrix g = du - (u.array().colwise() * radial.array()).matrix();
      return Matrix(g.array().colwise() / norms.transpose().array());
    };
    if (grad_transferred != nullptr) *grad_transferred = project(ut, du_t, nt);
    if (grad_source != nullptr) {
      *grad_source = m > 0 ? project(us, du_s, ns)
                           : Matrix::Zero(0, transferred.cols());
    }
  }
  return total / pairs;
}

LossBreakdown TotalLoss(double rec_tar, double rec_src, double kl_tar,
                        double kl_src, double cos) {
  LossBreakdown out;
  out.rec = rec_tar + rec_src;
  out.kl = kl_tar + kl_src;
  out.cos = cos;
  out.total = out.rec + out.kl + out.cos;
  return out;
}

}  // namespace editnet
