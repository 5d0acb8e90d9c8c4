// editnet/errors.h

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

#ifndef EDITNET_ERRORS_H_
#define EDITNET_ERRORS_H_

#include <stdexcept>
#include <string>

namespace editnet {

// Base of everything the library throws on bad input or numerical trouble.
// The CLI maps each subclass onto its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid option, unknown enum name, inconsistent configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated files, shape mismatches between inputs.
class FormatError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf in data, gradients or losses; failed decompositions.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace editnet

#endif  // EDITNET_ERRORS_H_
