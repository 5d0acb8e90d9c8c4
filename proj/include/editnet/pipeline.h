// editnet/pipeline.h

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

#ifndef EDITNET_PIPELINE_H_
#define EDITNET_PIPELINE_H_

#include <functional>
#include <string_view>

#include "editnet/checkpoint.h"
#include "editnet/embedding_set.h"
#include "editnet/evaluation.h"
#include "editnet/trainer.h"

namespace editnet {

enum class Method {
  kNone,
  kEditnet,
  kCenter,
  kCenterShift,
  kStandardize,
  kStandardizeRecolor,
  kCoral,
};

Method ParseMethod(std::string_view name);  // throws UsageError
std::string_view MethodName(Method m);

// Domain statistics, pre-normalization (skipped for the no-prenorm variant),
// training, and a CORAL fit on the raw training sets.
Checkpoint FitCheckpoint(const EmbeddingSet& tar_train,
                         const EmbeddingSet& src_train,
                         const TrainConfig& config,
                         const std::function<void(const TrainLogRecord&)>& on_step = {});

// Maps target embeddings with the selected method in eval mode.  For
// editnet the rows are pre-normalized with the target training statistics
// and then transferred (z = mu).  Throws UsageError when the checkpoint lacks
// a section the method needs.
EmbeddingSet ApplyMethod(const Checkpoint& ckpt, Method method,
                         const EmbeddingSet& in);

// Transfers both trial sides (all of `eval` is target domain), scores every
// trial and summarizes.
EvalReport EvaluatePipeline(const Checkpoint& ckpt, Method method,
                            const EmbeddingSet& eval, const TrialList& trials);

}  // namespace editnet

#endif  // EDITNET_PIPELINE_H_
