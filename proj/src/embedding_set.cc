// embedding_set.cc

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

#include "editnet/embedding_set.h"

#include <fstream>
#include <iterator>
#include <limits>

#include "editnet/binary_io.h"
#include "editnet/errors.h"

namespace editnet {
namespace {
constexpr char kMagic[4] = {'E', 'D', 'B', 'F'};
}  // namespace

void EmbeddingSet::Validate() const {
  if (static_cast<Eigen::Index>(utt_ids.size()) != rows() ||
      static_cast<Eigen::Index>(speaker_ids.size()) != rows()) {
    throw FormatError("embedding set: id lists do not match the row count");
  }
  CheckFinite(embeddings, "embedding set");
}

std::string EncodeEmbeddings(const EmbeddingSet& set) {
  set.Validate();
  if (set.dim() > std::numeric_limits<std::uint32_t>::max()) {
    throw FormatError("embedding dimension too large for EDBF");
  }
  ByteWriter w;
  w.PutBytes(std::string_view(kMagic, 4));
  w.Put<std::uint32_t>(kEmbeddingFormatVersion);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(set.dim()));
  w.Put<std::uint64_t>(static_cast<std::uint64_t>(set.rows()));
  for (Eigen::Index i = 0; i < set.rows(); ++i) {
    w.PutString(set.utt_ids[i]);
    w.PutString(set.speaker_ids[i]);
    w.PutDoubles(set.embeddings.row(i).data(), static_cast<std::size_t>(set.dim()));
  }
  return w.Take();
}

EmbeddingSet DecodeEmbeddings(std::string_view bytes, Domain domain) {
  ByteReader r(bytes, "EDBF");
  if (r.GetBytes(4, "magic") != std::string_view(kMagic, 4)) {
    throw FormatError("EDBF: bad magic at byte offset 0");
  }
  const auto version = r.Get<std::uint32_t>("version");
  if (version != kEmbeddingFormatVersion) {
    throw FormatError("EDBF: unsupported version " + std::to_string(version) +
                      " at byte offset 4");
  }
  const auto dim = r.Get<std::uint32_t>("dimension");
  const auto n = r.Get<std::uint64_t>("row count");
  // Each record needs at least two length prefixes and D doubles.
  const std::uint64_t min_record = 8 + 8ULL * dim;
  if (n > (bytes.size() - r.offset()) / min_record) {
    throw FormatError("EDBF: row count " + std::to_string(n) +
                      " exceeds file size (truncated) at byte offset " +
                      std::to_string(r.offset()));
  }
  EmbeddingSet set;
  set.domain = domain;
  set.embeddings.resize(static_cast<Eigen::Index>(n), dim);
  set.utt_ids.reserve(n);
  set.speaker_ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    set.utt_ids.push_back(r.GetString("utterance id"));
    set.speaker_ids.push_back(r.GetString("speaker id"));
    r.GetDoubles(set.embeddings.row(static_cast<Eigen::Index>(i)).data(), dim,
                 "embedding values");
  }
  if (!r.AtEnd()) {
    throw FormatError("EDBF: trailing bytes at byte offset " +
                      std::to_string(r.offset()));
  }
  CheckFinite(set.embeddings, "EDBF embeddings");
  return set;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void WriteFile(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path);
}

void SaveEmbeddings(const EmbeddingSet& set, const std::string& path) {
  WriteFile(path, EncodeEmbeddings(set));
}

EmbeddingSet LoadEmbeddings(const std::string& path, Domain domain) {
  try {
    return DecodeEmbeddings(ReadFile(path), domain);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

EmbeddingSet ApplyPrenorm(const EmbeddingSet& set, const DomainStats& stats) {
  EmbeddingSet out = set;
  out.embeddings = Standardize(set.embeddings, stats);
  return out;
}

}  // namespace editnet
