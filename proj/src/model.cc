// model.cc

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

#include "editnet/model.h"

#include <cstring>

#include "editnet/errors.h"

namespace editnet {

Vector OneHot(Domain d) {
  Vector v = Vector::Zero(2);
  v(d == Domain::kTarget ? 0 : 1) = 1.0;
  return v;
}

std::string_view DomainName(Domain d) {
  return d == Domain::kTarget ? "target" : "source";
}

Variant ParseVariant(std::string_view name) {
  if (name == "full") return Variant::kFull;
  if (name == "no_prenorm") return Variant::kNoPrenorm;
  if (name == "no_prior_transfer") return Variant::kNoPriorTransfer;
  if (name == "no_cosine") return Variant::kNoCosine;
  throw UsageError("unknown variant '" + std::string(name) +
                   "' (expected full, no_prenorm, no_prior_transfer or "
                   "no_cosine)");
}

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kNoPrenorm: return "no_prenorm";
    case Variant::kNoPriorTransfer: return "no_prior_transfer";
    case Variant::kNoCosine: return "no_cosine";
  }
  return "full";
}

LatentBatch SampleLatent(const Matrix& mu, const Matrix& log_var, Mode mode,
                         Rng* rng) {
  if (mu.rows() != log_var.rows() || mu.cols() != log_var.cols()) {
    throw FormatError("mu and log_var shapes differ");
  }
  LatentBatch out;
  out.mu = mu;
  out.log_var = log_var;
  if (mode == Mode::kEval) {
    out.noise = Matrix::Zero(mu.rows(), mu.cols());
    out.z = mu;
    return out;
  }
  if (rng == nullptr) throw UsageError("train-mode sampling needs an rng");
  out.noise = rng->NormalMatrix(mu.rows(), mu.cols());
  out.z = mu.array() + (0.5 * log_var.array()).exp() * out.noise.array();
  return out;
}

EditnetModel::EditnetModel(ModelDims dims, Rng& rng)
    : enc_fc1(dims.x_dim + 2, dims.encoder_hidden()),
      enc_bn1(dims.encoder_hidden()),
      enc_fc2(dims.encoder_hidden(), dims.z_dim),
      mu_head(dims.z_dim, dims.z_dim),
      log_var_head(dims.z_dim, dims.z_dim),
      dec_fc1(dims.z_dim + 2, dims.decoder_hidden()),
      dec_bn1(dims.decoder_hidden()),
      dec_fc2(dims.decoder_hidden(), dims.decoder_wide()),
      dec_bn2(dims.decoder_wide()),
      dec_fc3(dims.decoder_wide(), dims.x_dim),
      bn_tar(dims.x_dim),
      bn_src(dims.x_dim),
      prior_fc(2, dims.z_dim),
      dims_(dims) {
  if (dims.x_dim < 1 || dims.z_dim < 1) {
    throw UsageError("model dimensions must be positive");
  }
  enc_fc1.InitHeNormal(rng);
  enc_fc2.InitFanInUniform(rng);
  mu_head.InitFanInUniform(rng);
  log_var_head.InitFanInUniform(rng);
  dec_fc1.InitHeNormal(rng);
  dec_fc2.InitHeNormal(rng);
  dec_fc3.InitFanInUniform(rng);
  prior_fc.InitFanInUniform(rng);
}

Vector EditnetModel::PriorMean(Domain c) const {
  if (!learned_priors_) return Vector::Zero(dims_.z_dim);
  return prior_fc.Forward(OneHot(c)).row(0);
}

void EditnetModel::Encode(const Matrix& x_norm, Domain c, Matrix* mu,
                          Matrix* log_var) const {
  CheckCols(x_norm, dims_.x_dim, "encoder input");
  CheckFinite(x_norm, "encoder input");
  const Matrix h = enc_bn1.Forward(Relu(enc_fc1.Forward(ConcatLabel(x_norm, OneHot(c)))));
  const Matrix t = Tanh(enc_fc2.Forward(h));
  *mu = mu_head.Forward(t);
  *log_var = log_var_head.Forward(t).cwiseMax(-log_var_limit_).cwiseMin(log_var_limit_);
}

Matrix EditnetModel::Decode(const Matrix& z, Domain c) const {
  CheckCols(z, dims_.z_dim, "decoder input");
  const Matrix h1 = dec_bn1.Forward(Relu(dec_fc1.Forward(ConcatLabel(z, OneHot(c)))));
  const Matrix h2 = dec_bn2.Forward(Relu(dec_fc2.Forward(h1)));
  return dec_fc3.Forward(h2);
}

Matrix EditnetModel::DomainBn(const Matrix& y, Domain c) const {
  CheckCols(y, dims_.x_dim, "domain batch-norm input");
  return DomainBnLayer(c).Forward(y);
}

Matrix EditnetModel::Reconstruct(const Matrix& x_norm, Domain c) const {
  Matrix mu, log_var;
  Encode(x_norm, c, &mu, &log_var);
  return DomainBn(Decode(mu, c), c);
}

Matrix EditnetModel::Transfer(const Matrix& x_tar_norm) const {
  Matrix mu, log_var;
  Encode(x_tar_norm, Domain::kTarget, &mu, &log_var);
  if (learned_priors_) {
    mu.rowwise() += PriorMean(Domain::kSource) - PriorMean(Domain::kTarget);
  }
  return bn_src.Forward(Decode(mu, Domain::kSource));
}

Matrix EditnetModel::DomainBnTrain(const Matrix& y, Domain c) {
  CheckCols(y, dims_.x_dim, "domain batch-norm input");
  return DomainBnLayer(c).ForwardTrain(y, nullptr);
}

Matrix EditnetModel::ReconstructTrain(const Matrix& x_norm, Domain c,
                                      Rng& rng) {
  EncoderTrace et;
  DecoderTrace dt;
  Matrix mu, log_var;
  EncodeTrain(x_norm, c, &et, &mu, &log_var);
  const LatentBatch latent = SampleLatent(mu, log_var, Mode::kTrain, &rng);
  return DomainBnTrain(DecodeTrain(latent.z, c, &dt), c);
}

Matrix EditnetModel::TransferTrain(const Matrix& x_tar_norm, Rng& rng) {
  EncoderTrace et;
  DecoderTrace dt;
  Matrix mu, log_var;
  EncodeTrain(x_tar_norm, Domain::kTarget, &et, &mu, &log_var);
  LatentBatch latent = SampleLatent(mu, log_var, Mode::kTrain, &rng);
  if (learned_priors_) {
    latent.z.rowwise() += PriorMean(Domain::kSource) - PriorMean(Domain::kTarget);
  }
  return DomainBnTrain(DecodeTrain(latent.z, Domain::kSource, &dt),
                       Domain::kSource);
}

Matrix EditnetModel::Reconstruct(const Matrix& x_norm, Domain c, Mode mode,
                                 Rng* rng) {
  if (mode == Mode::kEval) return Reconstruct(x_norm, c);
  if (rng == nullptr) throw UsageError("train-mode reconstruction needs an rng");
  return ReconstructTrain(x_norm, c, *rng);
}

Matrix EditnetModel::Transfer(const Matrix& x_tar_norm, Mode mode, Rng* rng) {
  if (mode == Mode::kEval) return Transfer(x_tar_norm);
  if (rng == nullptr) throw UsageError("train-mode transfer needs an rng");
  return TransferTrain(x_tar_norm, *rng);
}

void EditnetModel::EncodeTrain(const Matrix& x_norm, Domain c,
                               EncoderTrace* trace, Matrix* mu,
                               Matrix* log_var, bool track_running) {
  CheckCols(x_norm, dims_.x_dim, "encoder input");
  CheckFinite(x_norm, "encoder input");
  EncoderTrace& t = *trace;
  t.input = ConcatLabel(x_norm, OneHot(c));
  t.fc1_out = enc_fc1.Forward(t.input);
  t.relu_out = Relu(t.fc1_out);
  t.fc2_in = enc_bn1.ForwardTrain(t.relu_out, &t.bn, track_running);
  t.tanh_out = Tanh(enc_fc2.Forward(t.fc2_in));
  *mu = mu_head.Forward(t.tanh_out);
  t.log_var_raw = log_var_head.Forward(t.tanh_out);
  *log_var = t.log_var_raw.cwiseMax(-log_var_limit_).cwiseMin(log_var_limit_);
  t.valid = true;
}

Matrix EditnetModel::DecodeTrain(const Matrix& z, Domain c,
                                 DecoderTrace* trace, bool track_running) {
  CheckCols(z, dims_.z_dim, "decoder input");
  DecoderTrace& t = *trace;
  t.input = ConcatLabel(z, OneHot(c));
  t.fc1_out = dec_fc1.Forward(t.input);
  t.relu1_out = Relu(t.fc1_out);
  t.fc2_in = dec_bn1.ForwardTrain(t.relu1_out, &t.bn1, track_running);
  t.fc2_out = dec_fc2.Forward(t.fc2_in);
  t.relu2_out = Relu(t.fc2_out);
  t.fc3_in = dec_bn2.ForwardTrain(t.relu2_out, &t.bn2, track_running);
  t.valid = true;
  return dec_fc3.Forward(t.fc3_in);
}

Matrix EditnetModel::EncoderBackward(const EncoderTrace& trace,
                                     const Matrix& grad_mu,
                                     const Matrix& grad_log_var) {
  if (!trace.valid) throw std::logic_error("encoder backward before forward");
  // The clamp passes gradient only inside [-limit, limit].
  const Matrix inside =
      (trace.log_var_raw.array().abs() <= log_var_limit_).cast<double>();
  const Matrix grad_raw = grad_log_var.array() * inside.array();
  Matrix grad_t = mu_head.Backward(trace.tanh_out, grad_mu);
  grad_t += log_var_head.Backward(trace.tanh_out, grad_raw);
  const Matrix grad_fc2_out = TanhBackward(trace.tanh_out, grad_t);
  const Matrix grad_bn_out = enc_fc2.Backward(trace.fc2_in, grad_fc2_out);
  const Matrix grad_relu = enc_bn1.Backward(trace.bn, grad_bn_out);
  const Matrix grad_fc1 = ReluBackward(trace.fc1_out, grad_relu);
  const Matrix grad_input = enc_fc1.Backward(trace.input, grad_fc1);
  return grad_input.leftCols(dims_.x_dim);
}

Matrix EditnetModel::DecoderBackward(const DecoderTrace& trace,
                                     const Matrix& grad_out) {
  if (!trace.valid) throw std::logic_error("decoder backward before forward");
  Matrix g = dec_fc3.Backward(trace.fc3_in, grad_out);
  g = dec_bn2.Backward(trace.bn2, g);
  g = ReluBackward(trace.fc2_out, g);
  g = dec_fc2.Backward(trace.fc2_in, g);
  g = dec_bn1.Backward(trace.bn1, g);
  g = ReluBackward(trace.fc1_out, g);
  g = dec_fc1.Backward(trace.input, g);
  return g.leftCols(dims_.z_dim);
}

void EditnetModel::PriorBackward(Domain c, const Vector& grad_prior) {
  if (!learned_priors_) return;
  Matrix upstream(1, grad_prior.size());
  upstream.row(0) = grad_prior;
  Matrix input(1, 2);
  input.row(0) = OneHot(c);
  prior_fc.Backward(input, upstream);
}

std::vector<ParamRef> EditnetModel::Parameters() {
  std::vector<ParamRef> out;
  auto linear = [&out](const std::string& name, LinearLayer& l) {
    out.push_back({name + ".weight", &l.weight, &l.grad_weight});
    out.push_back({name + ".bias", &l.bias, &l.grad_bias});
  };
  auto bn = [&out](const std::string& name, BatchNormLayer& l) {
    out.push_back({name + ".gamma", &l.gamma, &l.grad_gamma});
    out.push_back({name + ".beta", &l.beta, &l.grad_beta});
  };
  linear("enc_fc1", enc_fc1);
  bn("enc_bn1", enc_bn1);
  linear("enc_fc2", enc_fc2);
  linear("mu_head", mu_head);
  linear("log_var_head", log_var_head);
  linear("dec_fc1", dec_fc1);
  bn("dec_bn1", dec_bn1);
  linear("dec_fc2", dec_fc2);
  bn("dec_bn2", dec_bn2);
  linear("dec_fc3", dec_fc3);
  bn("bn_tar", bn_tar);
  bn("bn_src", bn_src);
  linear("prior_fc", prior_fc);
  return out;
}

std::vector<std::pair<std::string, Matrix*>> EditnetModel::Buffers() {
  std::vector<std::pair<std::string, Matrix*>> out;
  auto bn = [&out](const std::string& name, BatchNormLayer& l) {
    out.emplace_back(name + ".running_mean", &l.running_mean);
    out.emplace_back(name + ".running_var", &l.running_var);
  };
  bn("enc_bn1", enc_bn1);
  bn("dec_bn1", dec_bn1);
  bn("dec_bn2", dec_bn2);
  bn("bn_tar", bn_tar);
  bn("bn_src", bn_src);
  return out;
}

std::vector<std::pair<std::string, const Matrix*>> EditnetModel::Buffers()
    const {
  std::vector<std::pair<std::string, const Matrix*>> out;
  for (auto& [name, m] : const_cast<EditnetModel*>(this)->Buffers()) {
    out.emplace_back(name, m);
  }
  return out;
}

std::vector<std::pair<std::string, const Matrix*>>
EditnetModel::ParameterValues() const {
  std::vector<std::pair<std::string, const Matrix*>> out;
  for (const ParamRef& p : const_cast<EditnetModel*>(this)->Parameters()) {
    out.emplace_back(p.name, p.value);
  }
  return out;
}

Eigen::Index EditnetModel::ParameterCount() const {
  Eigen::Index n = 0;
  for (const auto& [name, m] : ParameterValues()) n += m->size();
  return n;
}

void EditnetModel::ZeroGrad() {
  for (ParamRef& p : Parameters()) p.grad->setZero();
}

std::uint64_t EditnetModel::StateHash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [name, m] : ParameterValues()) {
    feed(m->data(), sizeof(double) * m->size());
  }
  for (const auto& [name, m] : Buffers()) {
    feed(m->data(), sizeof(double) * m->size());
  }
  const unsigned char flags = learned_priors_ ? 1 : 0;
  feed(&flags, 1);
  feed(&log_var_limit_, sizeof(double));
  return h;
}

}  // namespace editnet
