// objective.cc

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

#include "editnet/objective.h"

#include <cmath>

#include "editnet/errors.h"

namespace editnet {

ObjectiveResult EvaluateObjective(EditnetModel& model, const StepBatch& batch,
                                  const ObjectiveOptions& options,
                                  const TermMask& mask) {
  const bool track = options.track_running;
  const Eigen::Index z_dim = model.dims().z_dim;
  if (batch.noise_tar.rows() != batch.x_tar.rows() ||
      batch.noise_tar.cols() != z_dim ||
      batch.noise_src.rows() != batch.x_src.rows() ||
      batch.noise_src.cols() != z_dim) {
    throw FormatError("objective: noise shape does not match the batch");
  }

  EncoderTrace enc_tar, enc_src;
  Matrix mu_tar, lv_tar, mu_src, lv_src;
  model.EncodeTrain(batch.x_tar, Domain::kTarget, &enc_tar, &mu_tar, &lv_tar,
                    track);
  model.EncodeTrain(batch.x_src, Domain::kSource, &enc_src, &mu_src, &lv_src,
                    track);

  const Matrix std_tar = (0.5 * lv_tar.array()).exp();
  const Matrix std_src = (0.5 * lv_src.array()).exp();
  const Matrix z_tar = mu_tar.array() + std_tar.array() * batch.noise_tar.array();
  const Matrix z_src = mu_src.array() + std_src.array() * batch.noise_src.array();

  const Vector prior_tar = model.PriorMean(Domain::kTarget);
  const Vector prior_src = model.PriorMean(Domain::kSource);

  DecoderTrace dec_tar, dec_src, dec_transfer;
  BatchNormCache bn_tar_cache, bn_src_cache, bn_transfer_cache;
  const Matrix rec_tar = model.bn_tar.ForwardTrain(
      model.DecodeTrain(z_tar, Domain::kTarget, &dec_tar, track),
      &bn_tar_cache, track);
  const Matrix rec_src = model.bn_src.ForwardTrain(
      model.DecodeTrain(z_src, Domain::kSource, &dec_src, track),
      &bn_src_cache, track);

  Matrix z_shifted = z_tar;
  if (model.learned_priors()) z_shifted.rowwise() += prior_src - prior_tar;
  const Matrix transferred = model.bn_src.ForwardTrain(
      model.DecodeTrain(z_shifted, Domain::kSource, &dec_transfer, track),
      &bn_transfer_cache, track);

  ObjectiveResult result;
  const bool grads = options.compute_gradients;
  Matrix g_rec_tar, g_rec_src, g_mu_tar, g_lv_tar, g_mu_src, g_lv_src;
  Vector g_prior_tar, g_prior_src;
  Matrix g_transferred, g_src_input;
  result.rec_tar = ReconstructionLoss(batch.x_tar, rec_tar,
                                      grads ? &g_rec_tar : nullptr);
  result.rec_src = ReconstructionLoss(batch.x_src, rec_src,
                                      grads ? &g_rec_src : nullptr);
  result.kl_tar = KlLoss(mu_tar, lv_tar, prior_tar, grads ? &g_mu_tar : nullptr,
                         grads ? &g_lv_tar : nullptr,
                         grads ? &g_prior_tar : nullptr);
  result.kl_src = KlLoss(mu_src, lv_src, prior_src, grads ? &g_mu_src : nullptr,
                         grads ? &g_lv_src : nullptr,
                         grads ? &g_prior_src : nullptr);
  double cos = 0.0;
  if (options.use_cosine) {
    cos = CosineBatchLoss(transferred, batch.x_src,
                          grads ? &g_transferred : nullptr,
                          grads ? &g_src_input : nullptr);
  }
  result.loss = TotalLoss(result.rec_tar, result.rec_src, result.kl_tar,
                          result.kl_src, cos);
  if (!std::isfinite(result.loss.total)) {
    throw NumericalError("objective is not finite");
  }
  if (!grads) return result;

  const Eigen::Index n_tar = batch.x_tar.rows();
  const Eigen::Index n_src = batch.x_src.rows();
  const Eigen::Index x_dim = model.dims().x_dim;
  result.grad_x_tar = Matrix::Zero(n_tar, x_dim);
  result.grad_x_src = Matrix::Zero(n_src, x_dim);

  // Gradients reaching z_tar / z_src and the two prior means.
  Matrix g_z_tar = Matrix::Zero(n_tar, z_dim);
  Matrix g_z_src = Matrix::Zero(n_src, z_dim);
  Vector g_prior_t = Vector::Zero(z_dim);
  Vector g_prior_s = Vector::Zero(z_dim);

  if (mask.rec) {
    result.grad_x_tar -= g_rec_tar;  // d/dx of ||x - x_hat||^2 is -d/dx_hat
    result.grad_x_src -= g_rec_src;
    g_z_tar += model.DecoderBackward(
        dec_tar, model.bn_tar.Backward(bn_tar_cache, g_rec_tar));
    g_z_src += model.DecoderBackward(
        dec_src, model.bn_src.Backward(bn_src_cache, g_rec_src));
  }
  if (options.use_cosine && mask.cos) {
    result.grad_x_src += g_src_input;
    const Matrix g_shift = model.DecoderBackward(
        dec_transfer, model.bn_src.Backward(bn_transfer_cache, g_transferred));
    g_z_tar += g_shift;
    if (model.learned_priors()) {
      const Vector col = g_shift.colwise().sum();
      g_prior_s += col;
      g_prior_t -= col;
    }
  }

  // Reparameterization: dz/dmu = 1, dz/dlog_var = 0.5 * std * noise.
  Matrix g_mu_t = g_z_tar;
  Matrix g_lv_t = 0.5 * g_z_tar.array() * std_tar.array() *
                  batch.noise_tar.array();
  Matrix g_mu_s = g_z_src;
  Matrix g_lv_s = 0.5 * g_z_src.array() * std_src.array() *
                  batch.noise_src.array();
  if (mask.kl) {
    g_mu_t += g_mu_tar;
    g_lv_t += g_lv_tar;
    g_mu_s += g_mu_src;
    g_lv_s += g_lv_src;
    g_prior_t += g_prior_tar;
    g_prior_s += g_prior_src;
  }

  result.grad_x_tar += model.EncoderBackward(enc_tar, g_mu_t, g_lv_t);
  result.grad_x_src += model.EncoderBackward(enc_src, g_mu_s, g_lv_s);
  model.PriorBackward(Domain::kTarget, g_prior_t);
  model.PriorBackward(Domain::kSource, g_prior_s);
  return result;
}

}  // namespace editnet
