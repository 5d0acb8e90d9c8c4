// gradcheck.cc

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

#include "editnet/gradcheck.h"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iterator>
#include <utility>
#include <vector>

#include "editnet/losses.h"
#include "editnet/model.h"
#include "editnet/objective.h"
#include "editnet/rng.h"

namespace editnet {
namespace {

// Independent forward pass of the objective in quad precision.  Central
// differences of a double-precision loss carry roughly one ulp of the loss
// divided by 2h of noise, which swamps gradients that are exactly zero (a
// bias feeding a batch norm, say).  Evaluating the probes here makes that
// noise negligible, so h can be small enough that truncation error and
// ReLU kinks stay out of the way, and cross-checks the production forward.
using Real = boost::multiprecision::number<
    boost::multiprecision::float128_backend, boost::multiprecision::et_off>;
using MatrixL = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorL = Eigen::Matrix<Real, 1, Eigen::Dynamic>;

struct TermsL {
  Real rec = 0, kl = 0, cos = 0;
};

MatrixL Ext(const Matrix& m) { return m.cast<Real>(); }

MatrixL Linear(const LinearLayer& l, const MatrixL& x) {
  MatrixL y = x * Ext(l.weight);
  y.rowwise() += VectorL(Ext(l.bias).row(0));
  return y;
}

MatrixL BatchNormL(const BatchNormLayer& bn, const MatrixL& x) {
  const Real n = static_cast<Real>(x.rows());
  const VectorL mean = x.colwise().sum() / n;
  const MatrixL c = x.rowwise() - mean;
  const VectorL var = c.array().square().colwise().sum() / n;
  MatrixL y(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Real s = sqrt(var(j) + static_cast<Real>(bn.epsilon));
    y.col(j) = c.col(j) / s * static_cast<Real>(bn.gamma(0, j)) +
               MatrixL::Constant(x.rows(), 1, static_cast<Real>(bn.beta(0, j)));
  }
  return y;
}

MatrixL ReluL(const MatrixL& x) { return x.cwiseMax(Real(0)); }

MatrixL WithLabel(const MatrixL& x, Domain c) {
  MatrixL out(x.rows(), x.cols() + 2);
  out.leftCols(x.cols()) = x;
  out.col(x.cols()).setConstant(c == Domain::kTarget ? 1 : 0);
  out.col(x.cols() + 1).setConstant(c == Domain::kTarget ? 0 : 1);
  return out;
}

VectorL PriorL(const EditnetModel& m, Domain c) {
  if (!m.learned_priors()) return VectorL::Zero(m.dims().z_dim);
  const MatrixL onehot = WithLabel(MatrixL(1, 0), c);
  return Linear(m.prior_fc, onehot).row(0);
}

MatrixL DecodeL(const EditnetModel& m, const MatrixL& z, Domain c) {
  MatrixL h = BatchNormL(m.dec_bn1, ReluL(Linear(m.dec_fc1, WithLabel(z, c))));
  h = BatchNormL(m.dec_bn2, ReluL(Linear(m.dec_fc2, h)));
  return BatchNormL(m.DomainBnLayer(c), Linear(m.dec_fc3, h));
}

Real CosTermL(Real cos) {
  const Real u = std::clamp(Real(1) - cos, static_cast<Real>(kCosineFloor),
                            static_cast<Real>(kCosineCeiling));
  return std::max(Real(0), Real(-log(u)));
}

TermsL ForwardL(const EditnetModel& m, const StepBatch& b, bool use_cosine) {
  TermsL t;
  const Real limit = static_cast<Real>(m.log_var_limit());
  MatrixL z[2], mu[2];
  const MatrixL* noise[2];
  const MatrixL xs[2] = {Ext(b.x_tar), Ext(b.x_src)};
  const MatrixL ns[2] = {Ext(b.noise_tar), Ext(b.noise_src)};
  const Domain doms[2] = {Domain::kTarget, Domain::kSource};
  for (int d = 0; d < 2; ++d) {
    noise[d] = &ns[d];
    MatrixL h = BatchNormL(m.enc_bn1, ReluL(Linear(m.enc_fc1, WithLabel(xs[d], doms[d]))));
    h = Linear(m.enc_fc2, h).array().tanh().matrix();
    mu[d] = Linear(m.mu_head, h);
    const MatrixL lv = Linear(m.log_var_head, h).cwiseMax(-limit).cwiseMin(limit);
    z[d] = mu[d] + (lv.array() / 2).exp().matrix().cwiseProduct(*noise[d]);
    const Real n = static_cast<Real>(xs[d].rows());
    t.rec += (xs[d] - DecodeL(m, z[d], doms[d])).squaredNorm() / n;
    const MatrixL delta = mu[d].rowwise() - PriorL(m, doms[d]);
    t.kl += -Real(0.5) *
            (Real(1) + lv.array() - delta.array().square() - lv.array().exp()).sum() / n;
  }
  MatrixL shifted = z[0];
  if (m.learned_priors()) {
    shifted.rowwise() += PriorL(m, Domain::kSource) - PriorL(m, Domain::kTarget);
  }
  const MatrixL tr = DecodeL(m, shifted, Domain::kSource);
  if (use_cosine) {
    Real sum = 0, pairs = 0;
    auto cosine = [](const VectorL& a, const VectorL& c) {
      return a.dot(c) / (a.norm() * c.norm());
    };
    for (Eigen::Index i = 0; i < tr.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < tr.rows(); ++j, ++pairs) {
        sum += CosTermL(cosine(tr.row(i), tr.row(j)));
      }
      for (Eigen::Index j = 0; j < xs[1].rows(); ++j, ++pairs) {
        sum += CosTermL(cosine(tr.row(i), xs[1].row(j)));
      }
    }
    t.cos = sum / pairs;
  }
  return t;
}

Real TermValueL(const TermsL& t, const TermMask& m) {
  Real v = 0;
  if (m.rec) v += t.rec;
  if (m.kl) v += t.kl;
  if (m.cos) v += t.cos;
  return v;
}

double TermValue(const ObjectiveResult& r, const TermMask& m) {
  double v = 0.0;
  if (m.rec) v += r.rec_tar + r.rec_src;
  if (m.kl) v += r.kl_tar + r.kl_src;
  if (m.cos) v += r.loss.cos;
  return v;
}

struct Term {
  const char* name;
  TermMask mask;
};

double RelError(double a, double f) {
  return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1e-8});
}

}  // namespace

GradcheckReport RunGradcheck(const GradcheckOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  Rng root(opt.seed);
  Rng init = root.Split(1);
  Rng data = root.Split(2);

  ModelDims dims;
  dims.x_dim = opt.x_dim;
  dims.z_dim = opt.z_dim;
  EditnetModel model(dims, init);
  // Move everything off its initial values so that zero biases, unit gammas
  // and zero priors do not hide mistakes.
  for (ParamRef& p : model.Parameters()) {
    *p.value += 0.1 * data.NormalMatrix(p.value->rows(), p.value->cols());
  }

  StepBatch batch;
  batch.x_tar = data.NormalMatrix(opt.batch, opt.x_dim);
  batch.x_src = data.NormalMatrix(opt.batch, opt.x_dim);
  batch.noise_tar = data.NormalMatrix(opt.batch, opt.z_dim);
  batch.noise_src = data.NormalMatrix(opt.batch, opt.z_dim);

  ObjectiveOptions probe;
  probe.track_running = false;
  probe.compute_gradients = false;
  ObjectiveOptions backward = probe;
  backward.compute_gradients = true;

  const Term terms[] = {
      {"rec", {true, false, false}},
      {"kl", {false, true, false}},
      {"cos", {false, false, true}},
      {"total", {true, true, true}},
  };

  GradcheckReport report;
  report.tolerance = opt.tolerance;

  // Analytic gradients per term: parameters in Parameters() order, then the
  // two inputs.
  std::vector<std::vector<Matrix>> analytic;
  for (const Term& term : terms) {
    model.ZeroGrad();
    const ObjectiveResult r = EvaluateObjective(model, batch, backward, term.mask);
    std::vector<Matrix> grads;
    for (ParamRef& p : model.Parameters()) grads.push_back(*p.grad);
    grads.push_back(r.grad_x_tar);
    grads.push_back(r.grad_x_src);
    if (opt.corrupt) grads[0](0, 0) += 1e-3 + 1e-2 * std::abs(grads[0](0, 0));
    analytic.push_back(std::move(grads));

    const double reference =
        static_cast<double>(TermValueL(ForwardL(model, batch, true), term.mask));
    report.forward_mismatch = std::max(
        report.forward_mismatch, std::abs(TermValue(r, term.mask) - reference) /
                                     std::max(1.0, std::abs(reference)));
  }

  std::vector<std::pair<std::string, Matrix*>> tensors;
  for (ParamRef& p : model.Parameters()) tensors.emplace_back(p.name, p.value);
  tensors.emplace_back("input.x_tar", &batch.x_tar);
  tensors.emplace_back("input.x_src", &batch.x_src);

  constexpr std::size_t kTerms = std::size(terms);
  std::vector<GradcheckEntry> entries(kTerms * tensors.size());
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    Matrix& value = *tensors[k].second;
    for (std::size_t t = 0; t < kTerms; ++t) {
      entries[t * tensors.size() + k] = {terms[t].name, tensors[k].first, 0.0, 0};
    }
    for (Eigen::Index i = 0; i < value.size(); ++i) {
      double& v = value.data()[i];
      const double saved = v;
      v = saved + opt.step;
      const double hi = v;
      const TermsL up = ForwardL(model, batch, true);
      v = saved - opt.step;
      const double lo = v;
      const TermsL down = ForwardL(model, batch, true);
      v = saved;
      for (std::size_t t = 0; t < kTerms; ++t) {
        const Real diff = TermValueL(up, terms[t].mask) - TermValueL(down, terms[t].mask);
        const double numeric = static_cast<double>(diff / Real(hi - lo));
        GradcheckEntry& e = entries[t * tensors.size() + k];
        e.max_rel_error = std::max(
            e.max_rel_error, RelError(analytic[t][k].data()[i], numeric));
        ++e.checked;
      }
    }
  }
  for (const GradcheckEntry& e : entries) {
    report.max_rel_error = std::max(report.max_rel_error, e.max_rel_error);
  }
  report.entries = std::move(entries);
  report.seconds = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string FormatGradcheck(const GradcheckReport& r) {
  std::string out;
  char line[256];
  for (const GradcheckEntry& e : r.entries) {
    std::snprintf(line, sizeof(line), "%-6s %-22s n=%-5lld max_rel_err=%.3e %s\n",
                  e.term.c_str(), e.tensor.c_str(), static_cast<long long>(e.checked),
                  e.max_rel_error, e.max_rel_error < r.tolerance ? "ok" : "FAIL");
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "forward_mismatch=%.3e max_rel_err=%.3e tolerance=%.1e "
                "seconds=%.2f result=%s\n",
                r.forward_mismatch, r.max_rel_error, r.tolerance, r.seconds, r.passed() ? "PASS" : "FAIL");
  out += line;
  return out;
}

}  // namespace editnet
