// editnet/optim.h

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

#ifndef EDITNET_OPTIM_H_
#define EDITNET_OPTIM_H_

#include <cstdint>
#include <vector>

#include "editnet/matrix.h"
#include "editnet/nn.h"

namespace editnet {

// Half-cosine annealing without restarts:
//   lr(step) = lr0 * (1 + cos(pi * step / total_steps)) / 2
// Requires total_steps > 0 and 0 <= step < total_steps.
double CosineLr(std::int64_t step, std::int64_t total_steps, double lr0);

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Coupled L2: weight_decay * param is added to the gradient before the
  // moment updates.
  double weight_decay = 0.0;
};

struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t step = 0;
};

// One bias-corrected Adam update of every parameter in `params`.  The state
// is sized lazily on the first call and must keep seeing the same parameter
// list afterwards.  Throws NumericalError on a non-finite gradient before
// touching anything.
void AdamStep(std::vector<ParamRef>& params, AdamState& state, double lr,
              const AdamOptions& options);

}  // namespace editnet

#endif  // EDITNET_OPTIM_H_
