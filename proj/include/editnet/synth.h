// editnet/synth.h

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

#ifndef EDITNET_SYNTH_H_
#define EDITNET_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "editnet/embedding_set.h"
#include "editnet/evaluation.h"

namespace editnet {

enum class ShiftKind { kIdentity, kAffine, kNonlinear };

ShiftKind ParseShiftKind(std::string_view name);  // throws UsageError
std::string_view ShiftKindName(ShiftKind kind);

// Two-domain toy benchmark.  Speaker centers are drawn inside a random
// `speaker_rank`-dimensional subspace shared by both domains; each sample is
// center + N(0, noise^2 I) and is then length-normalized to radius sqrt(dim).
// Target and eval rows pass through the domain shift
//   nonlinear: u = x + alpha * tanh(beta * x), then the affine step
//   affine:    y = A u + b,  A = I + (stretch_factor - 1) U U^T
// where U holds `stretch_dirs` random orthonormal columns and
// b ~ N(0, bias_scale^2 I).
struct SynthSpec {
  std::int64_t speakers_per_domain = 50;
  std::int64_t utts_per_speaker = 40;
  std::int64_t eval_speakers = 20;
  std::int64_t segments_per_utt = 1;
  std::int64_t dim = 256;
  std::int64_t speaker_rank = 8;
  double spread = 1.0;
  double noise = 0.9;
  ShiftKind shift = ShiftKind::kNonlinear;
  double alpha = 0.5;
  double beta = 2.0;
  std::int64_t stretch_dirs = 16;
  double stretch_factor = 8.0;
  double bias_scale = 1.0;
  std::int64_t n_trials = 10000;
  std::uint64_t seed = 42;

  // Throws UsageError for fewer than two speakers or utterances, an odd or
  // non-positive trial count and out-of-range ranks.
  void Validate() const;
  std::string ToText() const;
  static SynthSpec FromText(std::string_view text, std::string_view context);
};

struct SynthData {
  EmbeddingSet src_train;
  EmbeddingSet tar_train;
  EmbeddingSet tar_eval;
  // tar_eval before the domain shift; scoring it gives the oracle EER.
  EmbeddingSet tar_eval_clean;
  TrialList trials;
};

// Trials alternate same / different speaker, each drawn uniformly from the
// eval utterance pairs with distinct utterances.
SynthData GenerateSynthetic(const SynthSpec& spec);

// The domain shift alone, for tests.
Matrix ApplyShift(const SynthSpec& spec, const Matrix& a, const Vector& b,
                  const Matrix& x);

// Writes src_train.edbf, tar_train.edbf, tar_eval.edbf, tar_eval_clean.edbf
// and trials.txt into dir (created if missing).
void WriteSynthetic(const SynthData& data, const std::string& dir);

}  // namespace editnet

#endif  // EDITNET_SYNTH_H_
