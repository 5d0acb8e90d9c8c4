// editnet/nn.h

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

#ifndef EDITNET_NN_H_
#define EDITNET_NN_H_

#include <string>
#include <vector>

#include "editnet/matrix.h"
#include "editnet/rng.h"

namespace editnet {

enum class Mode { kTrain, kEval };

// A named view of one learnable tensor and its gradient buffer.  Biases and
// other per-channel parameters are stored as 1 x n matrices so the optimizer
// and the serializer only deal with one tensor type.
struct ParamRef {
  std::string name;
  Matrix* value;
  Matrix* grad;
};

// y = x W + b with W stored in x out.
struct LinearLayer {
  Matrix weight;
  Matrix bias;  // 1 x out
  Matrix grad_weight;
  Matrix grad_bias;

  LinearLayer() = default;
  LinearLayer(Eigen::Index in, Eigen::Index out);

  Eigen::Index InputDim() const { return weight.rows(); }
  Eigen::Index OutputDim() const { return weight.cols(); }

  // He (fan-in) normal init for layers that feed a ReLU.
  void InitHeNormal(Rng& rng);
  // U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for output, head and prior layers.
  void InitFanInUniform(Rng& rng);

  Matrix Forward(const Matrix& x) const;
  // Accumulates into grad_weight / grad_bias and returns dL/dx.
  Matrix Backward(const Matrix& x, const Matrix& grad_out);
  void ZeroGrad();
};

// Intermediates a train-mode batch-norm call needs for its backward pass.
struct BatchNormCache {
  Matrix normalized;  // x_hat
  Vector inv_std;     // 1 / sqrt(var_batch + eps)
  bool valid = false;
};

// Per-channel batch normalization.  Train mode normalizes with the biased
// batch variance and folds the same biased variance into the running
// estimate: running <- (1 - momentum) * running + momentum * batch.
struct BatchNormLayer {
  Matrix gamma;  // 1 x width
  Matrix beta;
  Matrix running_mean;
  Matrix running_var;
  Matrix grad_gamma;
  Matrix grad_beta;
  double momentum = 0.1;
  double epsilon = 1e-5;

  BatchNormLayer() = default;
  explicit BatchNormLayer(Eigen::Index width);

  Eigen::Index Width() const { return gamma.cols(); }

  // Eval mode: affine map through the running statistics.  Read-only.
  Matrix Forward(const Matrix& x) const;
  // Train mode.  Requires at least two rows.  Running statistics are
  // updated unless track_running is false (finite-difference probes).
  Matrix ForwardTrain(const Matrix& x, BatchNormCache* cache,
                      bool track_running = true);
  Matrix Forward(const Matrix& x, Mode mode, BatchNormCache* cache);
  Matrix Backward(const BatchNormCache& cache, const Matrix& grad_out);
  void ZeroGrad();
};

enum class Activation { kRelu, kTanh };

Matrix Activate(Activation kind, const Matrix& x);
Matrix Relu(const Matrix& x);
Matrix Tanh(const Matrix& x);
// Subgradient convention: relu'(0) = 0.
Matrix ReluBackward(const Matrix& input, const Matrix& grad_out);
Matrix TanhBackward(const Matrix& output, const Matrix& grad_out);

// Horizontal concatenation [x | onehot] with the same one-hot on every row.
Matrix ConcatLabel(const Matrix& x, const Vector& one_hot);

}  // namespace editnet

#endif  // EDITNET_NN_H_
