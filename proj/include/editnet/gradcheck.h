// editnet/gradcheck.h

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

#ifndef EDITNET_GRADCHECK_H_
#define EDITNET_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

namespace editnet {

inline constexpr double kForwardTolerance = 1e-10;

struct GradcheckOptions {
  std::uint64_t seed = 0;
  std::int64_t x_dim = 12;
  std::int64_t z_dim = 6;
  std::int64_t batch = 6;
  double step = 1e-7;       // central-difference half width
  double tolerance = 1e-4;  // on the relative error below
  // Test hook: perturb one analytic gradient entry (enc_fc1.weight) of
  // every term before comparing.
  bool corrupt = false;
};

// |analytic - numeric| / max(|analytic|, |numeric|, 1e-8), maximized over the
// entries of one tensor for one loss term.
struct GradcheckEntry {
  std::string term;    // rec, kl, cos or total
  std::string tensor;  // parameter name, or input.x_tar / input.x_src
  double max_rel_error = 0.0;
  std::int64_t checked = 0;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  // Largest relative gap between the double-precision objective and the
  // quad-precision reference used for the probes.
  double forward_mismatch = 0.0;
  double seconds = 0.0;
  bool passed() const {
    return max_rel_error < tolerance && forward_mismatch < kForwardTolerance;
  }
};

// Central finite differences over every parameter and input entry of a
// randomly initialized small model, one loss term at a time.  The probes
// run an independent quad-precision forward pass of the objective.
GradcheckReport RunGradcheck(const GradcheckOptions& options);

std::string FormatGradcheck(const GradcheckReport& report);

}  // namespace editnet

#endif  // EDITNET_GRADCHECK_H_
