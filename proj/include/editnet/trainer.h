// editnet/trainer.h

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

#ifndef EDITNET_TRAINER_H_
#define EDITNET_TRAINER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "editnet/embedding_set.h"
#include "editnet/errors.h"
#include "editnet/losses.h"
#include "editnet/model.h"
#include "editnet/optim.h"

namespace editnet {

struct TrainConfig {
  std::int64_t batch_per_domain = 256;
  std::int64_t epochs = 20;
  double lr0 = 0.001;
  double weight_decay = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  Variant variant = Variant::kFull;
  std::int64_t z_dim = 128;
  double log_var_limit = 10.0;
  double bn_momentum = 0.1;
  double bn_epsilon = 1e-5;
  double std_floor = 1e-8;
  // Negative: 1e-4 * trace(Cov) / D per domain.
  double coral_ridge = -1.0;

  // Throws UsageError on non-positive rates or batch_per_domain < 2.
  void Validate() const;
  // key=value lines, one per field, in declaration order.
  std::string ToText() const;
  // Unknown keys are rejected; missing keys keep their defaults.
  static TrainConfig FromText(std::string_view text, std::string_view context);
};

struct TrainLogRecord {
  std::int64_t step = 0;
  std::int64_t epoch = 0;
  double lr = 0.0;
  LossBreakdown loss;
};

// step \t epoch \t lr \t rec \t kl \t cos \t total
void WriteLogRecord(std::ostream& out, const TrainLogRecord& record);

// Row indices for one optimization step.
struct BatchIndices {
  std::vector<std::size_t> tar;
  std::vector<std::size_t> src;

  bool operator==(const BatchIndices&) const = default;
};

// Per-domain batching.  An epoch is one pass over a fresh shuffle of the
// target set cut into floor(N_tar / batch) batches (the remainder is
// dropped).  Source batches are drawn without replacement from a shuffled
// pool that is reshuffled whenever fewer than `batch` rows remain.
class BatchSampler {
 public:
  BatchSampler(std::size_t n_tar, std::size_t n_src, std::size_t batch, Rng rng);

  std::size_t steps_per_epoch() const { return n_tar_ / batch_; }
  std::vector<BatchIndices> NextEpoch();

 private:
  std::size_t n_tar_;
  std::size_t n_src_;
  std::size_t batch_;
  Rng rng_;
  std::vector<std::size_t> src_pool_;
  std::size_t src_pos_ = 0;
};

std::vector<std::vector<BatchIndices>> MakeBatches(std::size_t n_tar,
                                                   std::size_t n_src,
                                                   const TrainConfig& config);

struct TrainResult {
  EditnetModel model;
  std::vector<TrainLogRecord> log;
  AdamState adam;
};

// Thrown when a step produces a non-finite loss or gradient.  `model` holds
// the parameters and statistics from before the failing step.
class TrainingAborted : public NumericalError {
 public:
  TrainingAborted(const std::string& what, std::int64_t step,
                  std::shared_ptr<EditnetModel> model)
      : NumericalError(what), step_(step), model_(std::move(model)) {}
  std::int64_t step() const { return step_; }
  const std::shared_ptr<EditnetModel>& model() const { return model_; }

 private:
  std::int64_t step_;
  std::shared_ptr<EditnetModel> model_;
};

// Trains on already pre-normalized embedding sets (raw sets for the
// no-prenorm variant).  Speaker ids are never read.  on_step, if set, sees
// every log record as it is produced.
TrainResult Train(const EmbeddingSet& tar, const EmbeddingSet& src,
                  const TrainConfig& config,
                  const std::function<void(const TrainLogRecord&)>& on_step = {});

// Rng streams derived from the config seed.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kBatchStream = 2;
inline constexpr std::uint64_t kNoiseStream = 3;

}  // namespace editnet

#endif  // EDITNET_TRAINER_H_
