// editnet/rng.h

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

#ifndef EDITNET_RNG_H_
#define EDITNET_RNG_H_

#include <cstdint>
#include <span>
#include <vector>

#include "editnet/matrix.h"

namespace editnet {

// Counter-based generator: the i-th output is a SplitMix64 finalization of
// key + i * golden-gamma.  Split() derives an independent child key, so every
// consumer (initialization, batching, reparameterization noise, synthesis)
// gets its own stream from a single seed.  Normals come from Box-Muller so the
// sequence does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng Split(std::uint64_t stream) const;

  std::uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi);
  // Uniform in [0, n); n > 0.
  std::uint64_t UniformInt(std::uint64_t n);
  double Normal();

  Matrix NormalMatrix(Eigen::Index rows, Eigen::Index cols);
  std::vector<std::size_t> Permutation(std::size_t n);
  void Shuffle(std::span<std::size_t> items);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace editnet

#endif  // EDITNET_RNG_H_
