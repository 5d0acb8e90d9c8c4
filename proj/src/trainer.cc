// trainer.cc

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

#include "editnet/trainer.h"

#include <cmath>
#include <sstream>

#include "editnet/config_file.h"
#include "editnet/errors.h"
#include "editnet/objective.h"

namespace editnet {
namespace {

Matrix GatherRows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

void ConfigureBatchNorm(EditnetModel& model, const TrainConfig& config) {
  for (BatchNormLayer* bn : {&model.enc_bn1, &model.dec_bn1, &model.dec_bn2,
                             &model.bn_tar, &model.bn_src}) {
    bn->momentum = config.bn_momentum;
    bn->epsilon = config.bn_epsilon;
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_per_domain < 2) {
    throw UsageError("batch_per_domain must be at least 2 (batch-norm)");
  }
  if (epochs < 1) throw UsageError("epochs must be positive");
  if (!(lr0 > 0.0)) throw UsageError("lr0 must be positive");
  if (weight_decay < 0.0) throw UsageError("weight_decay must be >= 0");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw UsageError("Adam betas must lie in (0, 1)");
  }
  if (!(adam_eps > 0.0)) throw UsageError("adam_eps must be positive");
  if (z_dim < 1) throw UsageError("z_dim must be positive");
  if (!(log_var_limit > 0.0)) throw UsageError("log_var_limit must be positive");
  if (!(bn_momentum > 0.0 && bn_momentum <= 1.0)) {
    throw UsageError("bn_momentum must lie in (0, 1]");
  }
  if (!(bn_epsilon > 0.0)) throw UsageError("bn_epsilon must be positive");
  if (!(std_floor > 0.0)) throw UsageError("std_floor must be positive");
}

std::string TrainConfig::ToText() const {
  std::ostringstream os;
  os << "batch_per_domain=" << batch_per_domain << '\n'
     << "epochs=" << epochs << '\n'
     << "lr0=" << FormatDouble(lr0) << '\n'
     << "weight_decay=" << FormatDouble(weight_decay) << '\n'
     << "adam_beta1=" << FormatDouble(adam_beta1) << '\n'
     << "adam_beta2=" << FormatDouble(adam_beta2) << '\n'
     << "adam_eps=" << FormatDouble(adam_eps) << '\n'
     << "seed=" << seed << '\n'
     << "variant=" << VariantName(variant) << '\n'
     << "z_dim=" << z_dim << '\n'
     << "log_var_limit=" << FormatDouble(log_var_limit) << '\n'
     << "bn_momentum=" << FormatDouble(bn_momentum) << '\n'
     << "bn_epsilon=" << FormatDouble(bn_epsilon) << '\n'
     << "std_floor=" << FormatDouble(std_floor) << '\n'
     << "coral_ridge=" << FormatDouble(coral_ridge) << '\n';
  return os.str();
}

TrainConfig TrainConfig::FromText(std::string_view text,
                                  std::string_view context) {
  TrainConfig c;
  for (const auto& [key, value] : ParseKeyValues(text, context)) {
    if (key == "batch_per_domain") c.batch_per_domain = ParseInt(key, value);
    else if (key == "epochs") c.epochs = ParseInt(key, value);
    else if (key == "lr0") c.lr0 = ParseDouble(key, value);
    else if (key == "weight_decay") c.weight_decay = ParseDouble(key, value);
    else if (key == "adam_beta1") c.adam_beta1 = ParseDouble(key, value);
    else if (key == "adam_beta2") c.adam_beta2 = ParseDouble(key, value);
    else if (key == "adam_eps") c.adam_eps = ParseDouble(key, value);
    else if (key == "seed") c.seed = ParseUint(key, value);
    else if (key == "variant") c.variant = ParseVariant(value);
    else if (key == "z_dim") c.z_dim = ParseInt(key, value);
    else if (key == "log_var_limit") c.log_var_limit = ParseDouble(key, value);
    else if (key == "bn_momentum") c.bn_momentum = ParseDouble(key, value);
    else if (key == "bn_epsilon") c.bn_epsilon = ParseDouble(key, value);
    else if (key == "std_floor") c.std_floor = ParseDouble(key, value);
    else if (key == "coral_ridge") c.coral_ridge = ParseDouble(key, value);
    else throw UsageError(std::string(context) + ": unknown config key " + key);
  }
  c.Validate();
  return c;
}

void WriteLogRecord(std::ostream& out, const TrainLogRecord& r) {
  out << r.step << '\t' << r.epoch << '\t' << FormatDouble(r.lr) << '\t'
      << FormatDouble(r.loss.rec) << '\t' << FormatDouble(r.loss.kl) << '\t'
      << FormatDouble(r.loss.cos) << '\t' << FormatDouble(r.loss.total) << '\n';
}

BatchSampler::BatchSampler(std::size_t n_tar, std::size_t n_src,
                           std::size_t batch, Rng rng)
    : n_tar_(n_tar), n_src_(n_src), batch_(batch), rng_(rng) {
  if (batch < 2) throw UsageError("batch size must be at least 2");
  if (n_tar < batch || n_src < batch) {
    throw UsageError("each domain needs at least batch_per_domain = " +
                     std::to_string(batch) + " rows (target " +
                     std::to_string(n_tar) + ", source " +
                     std::to_string(n_src) + ")");
  }
  src_pool_ = rng_.Permutation(n_src_);
}

std::vector<BatchIndices> BatchSampler::NextEpoch() {
  const std::vector<std::size_t> order = rng_.Permutation(n_tar_);
  std::vector<BatchIndices> steps(steps_per_epoch());
  for (std::size_t s = 0; s < steps.size(); ++s) {
    steps[s].tar.assign(order.begin() + static_cast<std::ptrdiff_t>(s * batch_),
                        order.begin() + static_cast<std::ptrdiff_t>((s + 1) * batch_));
    if (src_pos_ + batch_ > n_src_) {
      rng_.Shuffle(src_pool_);
      src_pos_ = 0;
    }
    steps[s].src.assign(src_pool_.begin() + static_cast<std::ptrdiff_t>(src_pos_),
                        src_pool_.begin() + static_cast<std::ptrdiff_t>(src_pos_ + batch_));
    src_pos_ += batch_;
  }
  return steps;
}

std::vector<std::vector<BatchIndices>> MakeBatches(std::size_t n_tar,
                                                   std::size_t n_src,
                                                   const TrainConfig& config) {
  config.Validate();
  BatchSampler sampler(n_tar, n_src,
                       static_cast<std::size_t>(config.batch_per_domain),
                       Rng(config.seed).Split(kBatchStream));
  std::vector<std::vector<BatchIndices>> epochs;
  for (std::int64_t e = 0; e < config.epochs; ++e) {
    epochs.push_back(sampler.NextEpoch());
  }
  return epochs;
}

TrainResult Train(const EmbeddingSet& tar, const EmbeddingSet& src,
                  const TrainConfig& config,
                  const std::function<void(const TrainLogRecord&)>& on_step) {
  config.Validate();
  tar.Validate();
  src.Validate();
  if (tar.dim() != src.dim()) {
    throw FormatError("target and source embeddings differ in dimension (" +
                      std::to_string(tar.dim()) + " vs " +
                      std::to_string(src.dim()) + ")");
  }

  const Rng root(config.seed);
  Rng init_rng = root.Split(kInitStream);
  Rng noise_rng = root.Split(kNoiseStream);
  BatchSampler sampler(static_cast<std::size_t>(tar.rows()),
                       static_cast<std::size_t>(src.rows()),
                       static_cast<std::size_t>(config.batch_per_domain),
                       root.Split(kBatchStream));

  TrainResult result{EditnetModel(ModelDims{tar.dim(), config.z_dim}, init_rng),
                     {}, {}};
  EditnetModel& model = result.model;
  ConfigureBatchNorm(model, config);
  model.set_log_var_limit(config.log_var_limit);
  model.set_learned_priors(config.variant != Variant::kNoPriorTransfer);

  ObjectiveOptions options;
  options.use_cosine = config.variant != Variant::kNoCosine;
  AdamOptions adam{config.adam_beta1, config.adam_beta2, config.adam_eps,
                   config.weight_decay};

  const auto steps_per_epoch = static_cast<std::int64_t>(sampler.steps_per_epoch());
  const std::int64_t total_steps = steps_per_epoch * config.epochs;
  std::vector<ParamRef> params = model.Parameters();
  std::int64_t step = 0;
  for (std::int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const BatchIndices& idx : sampler.NextEpoch()) {
      StepBatch batch;
      batch.x_tar = GatherRows(tar.embeddings, idx.tar);
      batch.x_src = GatherRows(src.embeddings, idx.src);
      batch.noise_tar = noise_rng.NormalMatrix(batch.x_tar.rows(), config.z_dim);
      batch.noise_src = noise_rng.NormalMatrix(batch.x_src.rows(), config.z_dim);

      // Running statistics move during the forward pass; keep a copy so an
      // aborted step can be rolled back.
      std::vector<Matrix> saved_buffers;
      for (const auto& [name, m] : model.Buffers()) saved_buffers.push_back(*m);

      TrainLogRecord record;
      record.step = step;
      record.epoch = epoch;
      record.lr = CosineLr(step, total_steps, config.lr0);
      try {
        model.ZeroGrad();
        record.loss = EvaluateObjective(model, batch, options).loss;
        AdamStep(params, result.adam, record.lr, adam);
      } catch (const NumericalError& e) {
        auto buffers = model.Buffers();
        for (std::size_t i = 0; i < buffers.size(); ++i) {
          *buffers[i].second = saved_buffers[i];
        }
        auto last_good = std::make_shared<EditnetModel>(model);
        throw TrainingAborted(std::string("training aborted at step ") +
                                  std::to_string(step) + ": " + e.what(),
                              step, std::move(last_good));
      }
      if (on_step) on_step(record);
      result.log.push_back(record);
      ++step;
    }
  }
  return result;
}

}  // namespace editnet
