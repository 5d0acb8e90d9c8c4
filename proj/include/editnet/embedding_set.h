// editnet/embedding_set.h

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

#ifndef EDITNET_EMBEDDING_SET_H_
#define EDITNET_EMBEDDING_SET_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "editnet/baselines.h"
#include "editnet/matrix.h"
#include "editnet/model.h"

namespace editnet {

// N embeddings of dimension D plus per-row ids.  Several rows may share an
// utterance id (segments of one utterance).  Speaker ids are carried for
// evaluation and synthetic ground truth only; training never reads them.
struct EmbeddingSet {
  Matrix embeddings;
  std::vector<std::string> utt_ids;
  std::vector<std::string> speaker_ids;
  Domain domain = Domain::kTarget;

  Eigen::Index dim() const { return embeddings.cols(); }
  Eigen::Index rows() const { return embeddings.rows(); }

  // Row-count consistency and finiteness.  Throws FormatError/NumericalError.
  void Validate() const;
};

// "EDBF" container, little-endian:
//   magic "EDBF" | version u32 | D u32 | N u64 |
//   N x (utt_id: u32 length + UTF-8 bytes, speaker_id: same, D x f64)
inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;

std::string EncodeEmbeddings(const EmbeddingSet& set);
// Throws FormatError naming the byte offset on bad magic, unsupported version
// or truncation.
EmbeddingSet DecodeEmbeddings(std::string_view bytes,
                              Domain domain = Domain::kTarget);

void SaveEmbeddings(const EmbeddingSet& set, const std::string& path);
EmbeddingSet LoadEmbeddings(const std::string& path,
                            Domain domain = Domain::kTarget);

// Per-channel (x - mean) / std with the stats' floored std; ids are copied.
EmbeddingSet ApplyPrenorm(const EmbeddingSet& set, const DomainStats& stats);

// Whole-file helpers shared by the container formats.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view bytes);

}  // namespace editnet

#endif  // EDITNET_EMBEDDING_SET_H_
