// editnet/model.h

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

#ifndef EDITNET_MODEL_H_
#define EDITNET_MODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "editnet/matrix.h"
#include "editnet/nn.h"
#include "editnet/rng.h"

namespace editnet {

enum class Domain { kTarget, kSource };

// Target -> [1, 0], Source -> [0, 1].
Vector OneHot(Domain d);
std::string_view DomainName(Domain d);

// Which component, if any, is removed from the full network.
enum class Variant { kFull, kNoPrenorm, kNoPriorTransfer, kNoCosine };

Variant ParseVariant(std::string_view name);  // throws UsageError
std::string_view VariantName(Variant v);

// Layer widths of the conditional VAE.  With x_dim = 256 and z_dim = 128:
//   encoder  [x|c] 258 -> FC,ReLU,BN 256 -> FC 128 -> tanh -> mu / log-var 128
//   decoder  [z|c] 130 -> FC,ReLU,BN 256 -> FC,ReLU,BN 512 -> FC 256
//   prior    one-hot 2 -> FC 128;   bn_tar, bn_src 256
// Smaller dims scale the same topology (hidden = x_dim, wide = 2 * x_dim).
struct ModelDims {
  Eigen::Index x_dim = 256;
  Eigen::Index z_dim = 128;

  Eigen::Index encoder_hidden() const { return x_dim; }
  Eigen::Index decoder_hidden() const { return x_dim; }
  Eigen::Index decoder_wide() const { return 2 * x_dim; }
};

struct LatentBatch {
  Matrix mu;
  Matrix log_var;
  Matrix z;
  Matrix noise;  // standard-normal draws; all zero in eval mode
};

// Reparameterized draw z = mu + exp(log_var / 2) * noise.  Eval mode returns
// z = mu and never touches rng, which may then be null.
LatentBatch SampleLatent(const Matrix& mu, const Matrix& log_var, Mode mode,
                         Rng* rng);

struct EncoderTrace {
  Matrix input;      // [x | c]
  Matrix fc1_out;    // pre-ReLU
  Matrix relu_out;
  BatchNormCache bn;
  Matrix fc2_in;     // BN output
  Matrix tanh_out;
  Matrix log_var_raw;  // head output before clamping
  bool valid = false;
};

struct DecoderTrace {
  Matrix input;  // [z | c]
  Matrix fc1_out;
  Matrix relu1_out;
  BatchNormCache bn1;
  Matrix fc2_in;
  Matrix fc2_out;
  Matrix relu2_out;
  BatchNormCache bn2;
  Matrix fc3_in;
  bool valid = false;
};

class EditnetModel {
 public:
  // Parameters are initialized from rng; see LinearLayer for the schemes.
  EditnetModel(ModelDims dims, Rng& rng);

  const ModelDims& dims() const { return dims_; }

  // False for the no-prior-transfer ablation: every prior mean is the zero
  // vector (a single global N(0, I)) and the latent is not shifted.
  bool learned_priors() const { return learned_priors_; }
  void set_learned_priors(bool on) { learned_priors_ = on; }

  double log_var_limit() const { return log_var_limit_; }
  void set_log_var_limit(double limit) { log_var_limit_ = limit; }

  // prior_fc(one_hot(c)), or zeros when priors are disabled.  1 x z_dim.
  Vector PriorMean(Domain c) const;

  // Eval-mode building blocks.  None of them mutates the model.
  void Encode(const Matrix& x_norm, Domain c, Matrix* mu,
              Matrix* log_var) const;
  Matrix Decode(const Matrix& z, Domain c) const;
  Matrix DomainBn(const Matrix& y, Domain c) const;
  Matrix Reconstruct(const Matrix& x_norm, Domain c) const;
  // Latent prior shift from target to source followed by the source decoder
  // path, with z = mu.
  Matrix Transfer(const Matrix& x_tar_norm) const;

  // Train-mode versions: sample z, normalize with batch statistics and move
  // the running statistics.
  Matrix DomainBnTrain(const Matrix& y, Domain c);
  Matrix ReconstructTrain(const Matrix& x_norm, Domain c, Rng& rng);
  Matrix TransferTrain(const Matrix& x_tar_norm, Rng& rng);

  // Dispatch on mode; rng is only read in train mode.
  Matrix Reconstruct(const Matrix& x_norm, Domain c, Mode mode, Rng* rng);
  Matrix Transfer(const Matrix& x_tar_norm, Mode mode, Rng* rng);

  // Traced train-mode passes used by the objective's backward pass.  The
  // log-variance returned by EncodeTrain is already clamped.
  void EncodeTrain(const Matrix& x_norm, Domain c, EncoderTrace* trace,
                   Matrix* mu, Matrix* log_var, bool track_running = true);
  Matrix DecodeTrain(const Matrix& z, Domain c, DecoderTrace* trace,
                     bool track_running = true);
  // Return dL/dx and accumulate parameter gradients.
  Matrix EncoderBackward(const EncoderTrace& trace, const Matrix& grad_mu,
                         const Matrix& grad_log_var);
  Matrix DecoderBackward(const DecoderTrace& trace, const Matrix& grad_out);
  // Gradient of a loss w.r.t. PriorMean(c), pushed into prior_fc.
  void PriorBackward(Domain c, const Vector& grad_prior);

  BatchNormLayer& DomainBnLayer(Domain c) {
    return c == Domain::kTarget ? bn_tar : bn_src;
  }
  const BatchNormLayer& DomainBnLayer(Domain c) const {
    return c == Domain::kTarget ? bn_tar : bn_src;
  }

  // Learnable tensors in a fixed order.
  std::vector<ParamRef> Parameters();
  // Batch-norm running statistics in a fixed order (serialized, not trained).
  std::vector<std::pair<std::string, Matrix*>> Buffers();
  std::vector<std::pair<std::string, const Matrix*>> Buffers() const;
  std::vector<std::pair<std::string, const Matrix*>> ParameterValues() const;
  Eigen::Index ParameterCount() const;
  void ZeroGrad();

  // FNV-1a over every parameter and buffer byte plus the flags.
  std::uint64_t StateHash() const;

  LinearLayer enc_fc1;
  BatchNormLayer enc_bn1;
  LinearLayer enc_fc2;
  LinearLayer mu_head;
  LinearLayer log_var_head;

  LinearLayer dec_fc1;
  BatchNormLayer dec_bn1;
  LinearLayer dec_fc2;
  BatchNormLayer dec_bn2;
  LinearLayer dec_fc3;

  BatchNormLayer bn_tar;
  BatchNormLayer bn_src;
  LinearLayer prior_fc;

 private:
  ModelDims dims_;
  bool learned_priors_ = true;
  double log_var_limit_ = 10.0;
};

}  // namespace editnet

#endif  // EDITNET_MODEL_H_
