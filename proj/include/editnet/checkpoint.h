// editnet/checkpoint.h

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

#ifndef EDITNET_CHECKPOINT_H_
#define EDITNET_CHECKPOINT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "editnet/baselines.h"
#include "editnet/model.h"
#include "editnet/trainer.h"

namespace editnet {

// Sectioned binary container, little-endian:
//   magic "EDCK" | version u32 | section count u32 |
//   count x (name: u32 length + bytes, offset u64, size u64, crc32 u32) |
//   section payloads at the recorded absolute offsets.
// Every payload is CRC-32 checked on load.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Section {
  std::string name;
  std::string payload;
};

std::string EncodeContainer(const std::vector<Section>& sections);
// Throws FormatError on bad magic, version mismatch, overlapping or
// out-of-range sections and checksum failures.
std::vector<Section> DecodeContainer(std::string_view bytes);

// Everything the pipeline persists.  Sections that were never produced stay
// empty: cmd_stats writes only `stats`; training writes the config, the
// model, both domains' statistics and (optionally) CORAL.
struct Checkpoint {
  std::optional<TrainConfig> config;
  std::optional<EditnetModel> model;
  std::optional<DomainStats> stats_tar;
  std::optional<DomainStats> stats_src;
  std::optional<DomainStats> stats;
  std::optional<CoralTransform> coral;
};

std::string EncodeCheckpoint(const Checkpoint& ckpt);
Checkpoint DecodeCheckpoint(std::string_view bytes);
void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

// Section payload codecs, exposed for tests.
std::string EncodeStats(const DomainStats& stats);
DomainStats DecodeStats(std::string_view bytes);
std::string EncodeModel(const EditnetModel& model);
EditnetModel DecodeModel(std::string_view bytes);
std::string EncodeCoral(const CoralTransform& coral);
CoralTransform DecodeCoral(std::string_view bytes);

}  // namespace editnet

#endif  // EDITNET_CHECKPOINT_H_
