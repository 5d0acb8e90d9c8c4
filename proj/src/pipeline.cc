// pipeline.cc

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

#include "editnet/pipeline.h"

#include "editnet/errors.h"

namespace editnet {
namespace {

const DomainStats& Need(const std::optional<DomainStats>& s, const char* what) {
  if (!s) throw UsageError(std::string("checkpoint has no ") + what + " section");
  return *s;
}

}  // namespace

Method ParseMethod(std::string_view name) {
  if (name == "none") return Method::kNone;
  if (name == "editnet") return Method::kEditnet;
  if (name == "center") return Method::kCenter;
  if (name == "center_shift") return Method::kCenterShift;
  if (name == "standardize") return Method::kStandardize;
  if (name == "standardize_recolor") return Method::kStandardizeRecolor;
  if (name == "coral") return Method::kCoral;
  throw UsageError("unknown method: " + std::string(name));
}

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kNone: return "none";
    case Method::kEditnet: return "editnet";
    case Method::kCenter: return "center";
    case Method::kCenterShift: return "center_shift";
    case Method::kStandardize: return "standardize";
    case Method::kStandardizeRecolor: return "standardize_recolor";
    case Method::kCoral: return "coral";
  }
  return "?";
}

Checkpoint FitCheckpoint(const EmbeddingSet& tar_train,
                         const EmbeddingSet& src_train,
                         const TrainConfig& config,
                         const std::function<void(const TrainLogRecord&)>& on_step) {
  config.Validate();
  tar_train.Validate();
  src_train.Validate();
  if (tar_train.dim() != src_train.dim()) {
    throw FormatError("target and source embeddings differ in dimension");
  }
  Checkpoint ckpt;
  ckpt.config = config;
  ckpt.stats_tar = ComputeStats(tar_train.embeddings, config.std_floor);
  ckpt.stats_src = ComputeStats(src_train.embeddings, config.std_floor);
  if (config.variant == Variant::kNoPrenorm) {
    ckpt.model.emplace(Train(tar_train, src_train, config, on_step).model);
  } else {
    ckpt.model.emplace(Train(ApplyPrenorm(tar_train, *ckpt.stats_tar),
                             ApplyPrenorm(src_train, *ckpt.stats_src), config,
                             on_step).model);
  }
  ckpt.coral = FitCoral(tar_train.embeddings, src_train.embeddings,
                        config.coral_ridge);
  return ckpt;
}

EmbeddingSet ApplyMethod(const Checkpoint& ckpt, Method method,
                         const EmbeddingSet& in) {
  EmbeddingSet out = in;
  switch (method) {
    case Method::kNone:
      return out;
    case Method::kEditnet: {
      if (!ckpt.model) throw UsageError("checkpoint has no model section");
      const bool prenorm =
          !ckpt.config || ckpt.config->variant != Variant::kNoPrenorm;
      const Matrix x = prenorm
          ? Standardize(in.embeddings, Need(ckpt.stats_tar, "stats.tar"))
          : in.embeddings;
      if (x.cols() != ckpt.model->dims().x_dim) {
        throw FormatError("embedding dimension does not match the model");
      }
      out.embeddings = ckpt.model->Transfer(x);
      out.domain = Domain::kSource;
      return out;
    }
    case Method::kCenter:
    case Method::kCenterShift:
    case Method::kStandardize:
    case Method::kStandardizeRecolor: {
      const BaselineKind kind =
          method == Method::kCenter ? BaselineKind::kCenter
          : method == Method::kCenterShift ? BaselineKind::kCenterShift
          : method == Method::kStandardize ? BaselineKind::kStandardize
                                           : BaselineKind::kStandardizeRecolor;
      out.embeddings = BaselineTransfer(kind, in.embeddings,
                                        Need(ckpt.stats_tar, "stats.tar"),
                                        Need(ckpt.stats_src, "stats.src"));
      return out;
    }
    case Method::kCoral:
      if (!ckpt.coral) throw UsageError("checkpoint has no coral section");
      out.embeddings = ApplyCoral(*ckpt.coral, in.embeddings);
      return out;
  }
  return out;
}

EvalReport EvaluatePipeline(const Checkpoint& ckpt, Method method,
                            const EmbeddingSet& eval, const TrialList& trials) {
  trials.RequireBothClasses();
  const EmbeddingSet mapped = ApplyMethod(ckpt, method, eval);
  return SummarizeScores(trials, ScoreTrials(mapped, trials));
}

}  // namespace editnet
