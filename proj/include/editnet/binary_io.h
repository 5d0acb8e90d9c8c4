// editnet/binary_io.h

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

#ifndef EDITNET_BINARY_IO_H_
#define EDITNET_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "editnet/errors.h"
#include "editnet/matrix.h"

namespace editnet {

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are written in host order and assume little-endian");

class ByteWriter {
 public:
  template <typename T>
  void Put(T value) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void PutBytes(std::string_view bytes) { out_.append(bytes); }
  void PutString(std::string_view s) {
    Put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void PutDoubles(const double* data, std::size_t n) {
    out_.append(reinterpret_cast<const char*>(data), n * sizeof(double));
  }
  void PutMatrix(const Matrix& m) {
    Put<std::uint32_t>(static_cast<std::uint32_t>(m.rows()));
    Put<std::uint32_t>(static_cast<std::uint32_t>(m.cols()));
    PutDoubles(m.data(), static_cast<std::size_t>(m.size()));
  }
  const std::string& bytes() const { return out_; }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

// Bounds-checked reader; every failure names the byte offset.
class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string context)
      : bytes_(bytes), context_(std::move(context)) {}

  template <typename T>
  T Get(const char* what) {
    Require(sizeof(T), what);
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view GetBytes(std::size_t n, const char* what) {
    Require(n, what);
    std::string_view v = bytes_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  std::string GetString(const char* what) {
    const auto n = Get<std::uint32_t>(what);
    return std::string(GetBytes(n, what));
  }
  void GetDoubles(double* out, std::size_t n, const char* what) {
    if (n > (bytes_.size() - pos_) / sizeof(double)) Fail(what);
    std::memcpy(out, bytes_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }
  Matrix GetMatrix(const char* what) {
    const auto rows = Get<std::uint32_t>(what);
    const auto cols = Get<std::uint32_t>(what);
    Matrix m(rows, cols);
    GetDoubles(m.data(), static_cast<std::size_t>(m.size()), what);
    return m;
  }
  std::size_t offset() const { return pos_; }
  bool AtEnd() const { return pos_ == bytes_.size(); }

  [[noreturn]] void Fail(const char* what) const {
    throw FormatError(context_ + ": truncated or corrupt data reading " + what +
                      " at byte offset " + std::to_string(pos_));
  }

 private:
  void Require(std::size_t n, const char* what) const {
    if (n > bytes_.size() - pos_) Fail(what);
  }

  std::string_view bytes_;
  std::string context_;
  std::size_t pos_ = 0;
};

}  // namespace editnet

#endif  // EDITNET_BINARY_IO_H_
