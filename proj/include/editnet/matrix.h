// editnet/matrix.h

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

#ifndef EDITNET_MATRIX_H_
#define EDITNET_MATRIX_H_

#include <Eigen/Dense>
#include <string_view>

namespace editnet {

// Batches are rows; features are columns.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
// Per-channel quantities (biases, BN scales, means) are row vectors so they
// broadcast over a batch with .rowwise().
using Vector = Eigen::RowVectorXd;

// Throws NumericalError naming `what` if any entry is NaN or Inf.
void CheckFinite(const Matrix& m, std::string_view what);
void CheckFinite(const Vector& v, std::string_view what);

// Throws FormatError unless m has the given number of columns.
void CheckCols(const Matrix& m, Eigen::Index cols, std::string_view what);

// Bitwise equality, used for determinism checks.
bool BitEqual(const Matrix& a, const Matrix& b);

}  // namespace editnet

#endif  // EDITNET_MATRIX_H_
