// editnet/objective.h

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

#ifndef EDITNET_OBJECTIVE_H_
#define EDITNET_OBJECTIVE_H_

#include "editnet/losses.h"
#include "editnet/matrix.h"
#include "editnet/model.h"

namespace editnet {

// One training step's inputs.  The noise matrices are the standard-normal
// draws for the reparameterization of each domain; fixing them makes the
// objective a deterministic function of the parameters, which is what the
// finite-difference checks rely on.
struct StepBatch {
  Matrix x_tar;  // pre-normalized target rows
  Matrix x_src;  // pre-normalized source rows
  Matrix noise_tar;
  Matrix noise_src;
};

struct ObjectiveOptions {
  bool use_cosine = true;
  // Batch-norm running statistics follow the batch (normal training).  Off
  // for finite-difference probes so repeated evaluations see the same model.
  bool track_running = true;
  bool compute_gradients = true;
};

struct ObjectiveResult {
  LossBreakdown loss;
  double rec_tar = 0.0;
  double rec_src = 0.0;
  double kl_tar = 0.0;
  double kl_src = 0.0;
  // Only filled when gradients are computed.
  Matrix grad_x_tar;
  Matrix grad_x_src;
};

// Which terms of the objective to differentiate; the gradient checker probes
// each term on its own.
struct TermMask {
  bool rec = true;
  bool kl = true;
  bool cos = true;
};

// Train-mode forward pass over both domains:
//   target / source reconstructions through their own domain batch-norm,
//   the prior-shifted transfer of the target latents through bn_src,
//   rec + KL for both domains and the cosine repulsion on the transfer.
// When gradients are requested they are accumulated into the model's
// gradient buffers (callers zero them first).  Only terms enabled in `mask`
// contribute gradients; all terms are always reported.
ObjectiveResult EvaluateObjective(EditnetModel& model, const StepBatch& batch,
                                  const ObjectiveOptions& options,
                                  const TermMask& mask = {});

}  // namespace editnet

#endif  // EDITNET_OBJECTIVE_H_
