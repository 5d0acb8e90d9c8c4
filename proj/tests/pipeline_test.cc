// pipeline_test.cc

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

#include <algorithm>

#include "doctest.h"
#include "editnet/errors.h"
#include "editnet/pipeline.h"
#include "editnet/synth.h"
#include "test_util.h"

namespace editnet {
namespace {

SynthData SmallData() {
  SynthSpec spec;
  spec.speakers_per_domain = 8;
  spec.utts_per_speaker = 6;
  spec.eval_speakers = 6;
  spec.dim = 12;
  spec.speaker_rank = 3;
  spec.stretch_dirs = 3;
  spec.n_trials = 120;
  return GenerateSynthetic(spec);
}

TrainConfig SmallConfig() {
  TrainConfig c;
  c.z_dim = 4;
  c.epochs = 2;
  c.batch_per_domain = 16;
  return c;
}

TEST_CASE("method names") {
  for (Method m : {Method::kNone, Method::kEditnet, Method::kCenter, Method::kCenterShift,
                   Method::kStandardize, Method::kStandardizeRecolor, Method::kCoral}) {
    CHECK(ParseMethod(MethodName(m)) == m);
  }
  CHECK_THROWS_AS(ParseMethod("pca"), UsageError);
}

TEST_CASE("an identity transfer scores exactly like no transfer") {
  const SynthData d = SmallData();
  Checkpoint c;
  DomainStats unit;
  unit.mean = Vector::Zero(12);
  unit.std = Vector::Ones(12);
  unit.count = 1;
  c.stats_tar = unit;
  c.stats_src = unit;
  const EvalReport none = EvaluatePipeline(c, Method::kNone, d.tar_eval, d.trials);
  for (Method m : {Method::kCenter, Method::kStandardize, Method::kStandardizeRecolor}) {
    const EvalReport r = EvaluatePipeline(c, m, d.tar_eval, d.trials);
    CHECK(r.scores == none.scores);
    CHECK(FormatReport(r) == FormatReport(none));
  }
}

TEST_CASE("duplicated trials get identical scores") {
  const SynthData d = SmallData();
  TrialList doubled = d.trials;
  doubled.trials.insert(doubled.trials.end(), d.trials.trials.begin(), d.trials.trials.end());
  const Checkpoint c;
  const EvalReport r = EvaluatePipeline(c, Method::kNone, d.tar_eval, doubled);
  const std::size_t n = d.trials.size();
  for (std::size_t i = 0; i < n; ++i) CHECK(r.scores[i] == r.scores[i + n]);
}

TEST_CASE("missing checkpoint sections are usage errors") {
  const SynthData d = SmallData();
  const Checkpoint empty;
  for (Method m : {Method::kEditnet, Method::kCenter, Method::kCenterShift,
                   Method::kStandardize, Method::kStandardizeRecolor, Method::kCoral}) {
    CHECK_THROWS_AS(ApplyMethod(empty, m, d.tar_eval), UsageError);
  }
  TrialList one_class;
  one_class.trials.push_back(d.trials.trials[0]);
  CHECK_THROWS_AS(EvaluatePipeline(empty, Method::kNone, d.tar_eval, one_class), UsageError);
}

TEST_CASE("fitting a checkpoint is deterministic and complete") {
  const SynthData d = SmallData();
  const Checkpoint a = FitCheckpoint(d.tar_train, d.src_train, SmallConfig());
  const Checkpoint b = FitCheckpoint(d.tar_train, d.src_train, SmallConfig());
  CHECK(EncodeCheckpoint(a) == EncodeCheckpoint(b));
  CHECK(a.model);
  CHECK(a.coral);
  CHECK(a.stats_tar->count == d.tar_train.rows());
  for (Method m : {Method::kEditnet, Method::kCoral, Method::kCenterShift}) {
    const EvalReport ra = EvaluatePipeline(a, m, d.tar_eval, d.trials);
    const EvalReport rb = EvaluatePipeline(b, m, d.tar_eval, d.trials);
    CHECK(FormatReport(ra) == FormatReport(rb));
    CHECK(FormatScores(d.trials, ra.scores) == FormatScores(d.trials, rb.scores));
  }
  const EmbeddingSet mapped = ApplyMethod(a, Method::kEditnet, d.tar_eval);
  CHECK(mapped.domain == Domain::kSource);
  CHECK(mapped.utt_ids == d.tar_eval.utt_ids);
  CHECK(mapped.embeddings.allFinite());
}

TEST_CASE("the transfer ignores speaker labels") {
  SynthData d = SmallData();
  const Checkpoint a = FitCheckpoint(d.tar_train, d.src_train, SmallConfig());
  for (auto& s : d.tar_train.speaker_ids) s = "x" + s;
  std::reverse(d.src_train.speaker_ids.begin(), d.src_train.speaker_ids.end());
  const Checkpoint b = FitCheckpoint(d.tar_train, d.src_train, SmallConfig());
  CHECK(a.model->StateHash() == b.model->StateHash());
}

TEST_CASE("the no-prenorm variant maps raw embeddings") {
  const SynthData d = SmallData();
  TrainConfig config = SmallConfig();
  config.variant = Variant::kNoPrenorm;
  Checkpoint c = FitCheckpoint(d.tar_train, d.src_train, config);
  const Matrix expected = c.model->Transfer(d.tar_eval.embeddings);
  CHECK(BitEqual(ApplyMethod(c, Method::kEditnet, d.tar_eval).embeddings, expected));
  c.stats_tar.reset();
  CHECK_NOTHROW(ApplyMethod(c, Method::kEditnet, d.tar_eval));
}

TEST_CASE("dimension mismatches are format errors") {
  const SynthData d = SmallData();
  const Checkpoint c = FitCheckpoint(d.tar_train, d.src_train, SmallConfig());
  Rng rng(1);
  const EmbeddingSet wrong = testing::RandomSet(rng, 4, 5);
  CHECK_THROWS_AS(ApplyMethod(c, Method::kEditnet, wrong), FormatError);
  CHECK_THROWS_AS(ApplyMethod(c, Method::kCoral, wrong), FormatError);
  CHECK_THROWS_AS(FitCheckpoint(d.tar_train, wrong, SmallConfig()), FormatError);
}

}  // namespace
}  // namespace editnet
