// optim.cc

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

#include "editnet/optim.h"

#include <cmath>
#include <numbers>

#include "editnet/errors.h"

namespace editnet {

double CosineLr(std::int64_t step, std::int64_t total_steps, double lr0) {
  if (total_steps <= 0) throw UsageError("cosine schedule: total_steps must be > 0");
  if (step < 0 || step >= total_steps) {
    throw UsageError("cosine schedule: step out of range");
  }
  const double frac = static_cast<double>(step) / static_cast<double>(total_steps);
  return lr0 * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
}

void AdamStep(std::vector<ParamRef>& params, AdamState& state, double lr,
              const AdamOptions& options) {
  for (const ParamRef& p : params) {
    if (!p.grad->allFinite()) {
      throw NumericalError("non-finite gradient for " + p.name);
    }
  }
  if (state.m.empty()) {
    for (const ParamRef& p : params) {
      state.m.push_back(Matrix::Zero(p.value->rows(), p.value->cols()));
      state.v.push_back(Matrix::Zero(p.value->rows(), p.value->cols()));
    }
  }
  if (state.m.size() != params.size()) {
    throw UsageError("Adam state does not match the parameter list");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(options.beta1, t);
  const double bc2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& w = *params[i].value;
    const Matrix g = *params[i].grad + options.weight_decay * w;
    Matrix& m = state.m[i];
    Matrix& v = state.v[i];
    m = options.beta1 * m + (1.0 - options.beta1) * g;
    v = options.beta2 * v + (1.0 - options.beta2) * g.cwiseProduct(g);
    w.array() -= lr * (m.array() / bc1) /
                 ((v.array() / bc2).sqrt() + options.eps);
  }
}

}  // namespace editnet
