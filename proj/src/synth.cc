// synth.cc

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

#include "editnet/synth.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <Eigen/QR>

#include "editnet/config_file.h"
#include "editnet/errors.h"
#include "editnet/rng.h"

namespace editnet {
namespace {

// First `cols` columns of a Haar-ish random orthonormal matrix.
Matrix RandomOrthonormal(Eigen::Index dim, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd g = rng.NormalMatrix(dim, dim);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q.leftCols(cols);
}

std::string Name(const char* prefix, std::int64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04lld", prefix, static_cast<long long>(i));
  return buf;
}

EmbeddingSet MakeDomain(const SynthSpec& spec, const Matrix& basis,
                        std::int64_t n_speakers, const char* prefix,
                        Domain domain, Rng& rng) {
  const std::int64_t rows =
      n_speakers * spec.utts_per_speaker * spec.segments_per_utt;
  EmbeddingSet set;
  set.domain = domain;
  set.embeddings.resize(rows, spec.dim);
  const double radius = std::sqrt(static_cast<double>(spec.dim));
  Eigen::Index r = 0;
  for (std::int64_t s = 0; s < n_speakers; ++s) {
    const std::string spk = Name(prefix, s);
    const Vector center =
        (rng.NormalMatrix(1, spec.speaker_rank) * spec.spread * basis.transpose()).row(0);
    for (std::int64_t u = 0; u < spec.utts_per_speaker; ++u) {
      const std::string utt = spk + Name("_u", u);
      for (std::int64_t g = 0; g < spec.segments_per_utt; ++g, ++r) {
        Vector x = center + spec.noise * rng.NormalMatrix(1, spec.dim).row(0);
        set.embeddings.row(r) = x * (radius / x.norm());
        set.utt_ids.push_back(utt);
        set.speaker_ids.push_back(spk);
      }
    }
  }
  return set;
}

}  // namespace

ShiftKind ParseShiftKind(std::string_view name) {
  if (name == "identity") return ShiftKind::kIdentity;
  if (name == "affine") return ShiftKind::kAffine;
  if (name == "nonlinear") return ShiftKind::kNonlinear;
  throw UsageError("unknown shift kind: " + std::string(name));
}

std::string_view ShiftKindName(ShiftKind kind) {
  switch (kind) {
    case ShiftKind::kIdentity: return "identity";
    case ShiftKind::kAffine: return "affine";
    case ShiftKind::kNonlinear: return "nonlinear";
  }
  return "?";
}

void SynthSpec::Validate() const {
  auto fail = [](const std::string& m) { throw UsageError("synth spec: " + m); };
  if (speakers_per_domain < 2 || eval_speakers < 2) fail("need at least 2 speakers");
  if (utts_per_speaker < 2) fail("need at least 2 utterances per speaker");
  if (segments_per_utt < 1) fail("segments_per_utt must be positive");
  if (dim < 1) fail("dim must be positive");
  if (speaker_rank < 1 || speaker_rank > dim) fail("speaker_rank must lie in [1, dim]");
  if (stretch_dirs < 0 || stretch_dirs > dim) fail("stretch_dirs must lie in [0, dim]");
  if (!(spread >= 0) || !(noise > 0)) fail("spread must be >= 0 and noise > 0");
  if (!(stretch_factor > 0)) fail("stretch_factor must be positive");
  if (!(bias_scale >= 0)) fail("bias_scale must be >= 0");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) fail("alpha and beta must be finite");
  if (n_trials < 2 || n_trials % 2 != 0) fail("n_trials must be even and >= 2");
}

std::string SynthSpec::ToText() const {
  std::string s;
  auto add = [&s](const char* k, const std::string& v) { s += std::string(k) + "=" + v + "\n"; };
  add("speakers_per_domain", std::to_string(speakers_per_domain));
  add("utts_per_speaker", std::to_string(utts_per_speaker));
  add("eval_speakers", std::to_string(eval_speakers));
  add("segments_per_utt", std::to_string(segments_per_utt));
  add("dim", std::to_string(dim));
  add("speaker_rank", std::to_string(speaker_rank));
  add("spread", FormatDouble(spread));
  add("noise", FormatDouble(noise));
  add("shift", std::string(ShiftKindName(shift)));
  add("alpha", FormatDouble(alpha));
  add("beta", FormatDouble(beta));
  add("stretch_dirs", std::to_string(stretch_dirs));
  add("stretch_factor", FormatDouble(stretch_factor));
  add("bias_scale", FormatDouble(bias_scale));
  add("n_trials", std::to_string(n_trials));
  add("seed", std::to_string(seed));
  return s;
}

SynthSpec SynthSpec::FromText(std::string_view text, std::string_view context) {
  SynthSpec s;
  for (const auto& [key, value] : ParseKeyValues(text, context)) {
    if (key == "speakers_per_domain") s.speakers_per_domain = ParseInt(key, value);
    else if (key == "utts_per_speaker") s.utts_per_speaker = ParseInt(key, value);
    else if (key == "eval_speakers") s.eval_speakers = ParseInt(key, value);
    else if (key == "segments_per_utt") s.segments_per_utt = ParseInt(key, value);
    else if (key == "dim") s.dim = ParseInt(key, value);
    else if (key == "speaker_rank") s.speaker_rank = ParseInt(key, value);
    else if (key == "spread") s.spread = ParseDouble(key, value);
    else if (key == "noise") s.noise = ParseDouble(key, value);
    else if (key == "shift") s.shift = ParseShiftKind(value);
    else if (key == "alpha") s.alpha = ParseDouble(key, value);
    else if (key == "beta") s.beta = ParseDouble(key, value);
    else if (key == "stretch_dirs") s.stretch_dirs = ParseInt(key, value);
    else if (key == "stretch_factor") s.stretch_factor = ParseDouble(key, value);
    else if (key == "bias_scale") s.bias_scale = ParseDouble(key, value);
    else if (key == "n_trials") s.n_trials = ParseInt(key, value);
    else if (key == "seed") s.seed = ParseUint(key, value);
    else throw UsageError(std::string(context) + ": unknown synth key " + key);
  }
  s.Validate();
  return s;
}

Matrix ApplyShift(const SynthSpec& spec, const Matrix& a, const Vector& b,
                  const Matrix& x) {
  if (spec.shift == ShiftKind::kIdentity) return x;
  Matrix u = x;
  if (spec.shift == ShiftKind::kNonlinear) {
    u = x.array() + spec.alpha * (spec.beta * x.array()).tanh();
  }
  Matrix y = u * a.transpose();
  y.rowwise() += b;
  return y;
}

SynthData GenerateSynthetic(const SynthSpec& spec) {
  spec.Validate();
  Rng root(spec.seed);
  Rng geometry = root.Split(1);
  Rng samples = root.Split(2);
  Rng trial_rng = root.Split(3);

  const Matrix basis = RandomOrthonormal(spec.dim, spec.speaker_rank, geometry) *
                       std::sqrt(static_cast<double>(spec.dim) / spec.speaker_rank);
  const Matrix u = RandomOrthonormal(spec.dim, spec.stretch_dirs, geometry);
  Matrix a = Matrix::Identity(spec.dim, spec.dim) +
             (spec.stretch_factor - 1.0) * u * u.transpose();
  const Vector b = spec.bias_scale * geometry.NormalMatrix(1, spec.dim).row(0);

  SynthData d;
  d.src_train = MakeDomain(spec, basis, spec.speakers_per_domain, "src_spk",
                           Domain::kSource, samples);
  d.tar_train = MakeDomain(spec, basis, spec.speakers_per_domain, "tar_spk",
                           Domain::kTarget, samples);
  d.tar_eval_clean = MakeDomain(spec, basis, spec.eval_speakers, "eval_spk",
                                Domain::kTarget, samples);
  d.tar_train.embeddings = ApplyShift(spec, a, b, d.tar_train.embeddings);
  d.tar_eval = d.tar_eval_clean;
  d.tar_eval.embeddings = ApplyShift(spec, a, b, d.tar_eval_clean.embeddings);

  // One entry per utterance: its id and speaker index.
  const std::int64_t n_utts = spec.eval_speakers * spec.utts_per_speaker;
  auto utt_id = [&](std::int64_t i) {
    return d.tar_eval.utt_ids[static_cast<std::size_t>(i * spec.segments_per_utt)];
  };
  while (static_cast<std::int64_t>(d.trials.size()) < spec.n_trials) {
    const bool want_same = d.trials.size() % 2 == 0;
    const auto i = static_cast<std::int64_t>(trial_rng.UniformInt(n_utts));
    std::int64_t j;
    if (want_same) {
      const std::int64_t spk = i / spec.utts_per_speaker;
      std::int64_t k = static_cast<std::int64_t>(
          trial_rng.UniformInt(spec.utts_per_speaker - 1));
      if (k >= i % spec.utts_per_speaker) ++k;
      j = spk * spec.utts_per_speaker + k;
    } else {
      std::int64_t k = static_cast<std::int64_t>(
          trial_rng.UniformInt(n_utts - spec.utts_per_speaker));
      if (k >= (i / spec.utts_per_speaker) * spec.utts_per_speaker) {
        k += spec.utts_per_speaker;
      }
      j = k;
    }
    d.trials.trials.push_back({utt_id(i), utt_id(j), want_same});
  }
  return d;
}

void WriteSynthetic(const SynthData& data, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create directory " + dir + ": " + ec.message());
  const std::filesystem::path p(dir);
  SaveEmbeddings(data.src_train, (p / "src_train.edbf").string());
  SaveEmbeddings(data.tar_train, (p / "tar_train.edbf").string());
  SaveEmbeddings(data.tar_eval, (p / "tar_eval.edbf").string());
  SaveEmbeddings(data.tar_eval_clean, (p / "tar_eval_clean.edbf").string());
  SaveTrials(data.trials, (p / "trials.txt").string());
}

}  // namespace editnet
