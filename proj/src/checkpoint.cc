// checkpoint.cc

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

#include "editnet/checkpoint.h"

#include <zlib.h>

#include <algorithm>
#include <set>

#include "editnet/binary_io.h"
#include "editnet/embedding_set.h"
#include "editnet/errors.h"

namespace editnet {
namespace {

constexpr char kMagic[4] = {'E', 'D', 'C', 'K'};

std::uint32_t Crc32(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large payloads in chunks.
  while (!bytes.empty()) {
    const std::size_t n = std::min<std::size_t>(bytes.size(), 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(n));
    bytes.remove_prefix(n);
  }
  return static_cast<std::uint32_t>(crc);
}

Matrix RowMatrix(const Vector& v) {
  Matrix m(1, v.size());
  m.row(0) = v;
  return m;
}

void ExpectShape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                 const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw FormatError("checkpoint: " + what + " has shape " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
}

}  // namespace

std::string EncodeContainer(const std::vector<Section>& sections) {
  std::size_t header = 4 + 4 + 4;
  for (const Section& s : sections) header += 4 + s.name.size() + 8 + 8 + 4;
  ByteWriter w;
  w.PutBytes(std::string_view(kMagic, 4));
  w.Put<std::uint32_t>(kCheckpointVersion);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(sections.size()));
  std::uint64_t offset = header;
  for (const Section& s : sections) {
    w.PutString(s.name);
    w.Put<std::uint64_t>(offset);
    w.Put<std::uint64_t>(s.payload.size());
    w.Put<std::uint32_t>(Crc32(s.payload));
    offset += s.payload.size();
  }
  for (const Section& s : sections) w.PutBytes(s.payload);
  return w.Take();
}

std::vector<Section> DecodeContainer(std::string_view bytes) {
  ByteReader r(bytes, "checkpoint");
  if (r.GetBytes(4, "magic") != std::string_view(kMagic, 4)) {
    throw FormatError("checkpoint: bad magic at byte offset 0");
  }
  const auto version = r.Get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: version mismatch (file has " +
                      std::to_string(version) + ", reader supports " +
                      std::to_string(kCheckpointVersion) + ")");
  }
  const auto count = r.Get<std::uint32_t>("section count");
  struct Entry {
    std::string name;
    std::uint64_t offset, size;
    std::uint32_t crc;
  };
  std::vector<Entry> entries;
  std::set<std::string> names;
  for (std::uint32_t i = 0; i < count; ++i) {
    Entry e;
    e.name = r.GetString("section name");
    e.offset = r.Get<std::uint64_t>("section offset");
    e.size = r.Get<std::uint64_t>("section size");
    e.crc = r.Get<std::uint32_t>("section checksum");
    if (!names.insert(e.name).second) {
      throw FormatError("checkpoint: duplicate section " + e.name);
    }
    entries.push_back(std::move(e));
  }
  std::uint64_t expected = r.offset();
  std::vector<Section> out;
  for (const Entry& e : entries) {
    if (e.offset != expected || e.size > bytes.size() - e.offset) {
      throw FormatError("checkpoint: corrupt section table entry for " + e.name +
                        " (offset " + std::to_string(e.offset) + ")");
    }
    std::string_view payload = bytes.substr(e.offset, e.size);
    if (Crc32(payload) != e.crc) {
      throw FormatError("checkpoint: checksum mismatch in section " + e.name);
    }
    out.push_back({e.name, std::string(payload)});
    expected += e.size;
  }
  if (expected != bytes.size()) {
    throw FormatError("checkpoint: trailing bytes at byte offset " +
                      std::to_string(expected));
  }
  return out;
}

std::string EncodeStats(const DomainStats& s) {
  ByteWriter w;
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(s.dim()));
  w.Put<std::uint64_t>(s.count);
  w.PutDoubles(s.mean.data(), static_cast<std::size_t>(s.dim()));
  w.PutDoubles(s.std.data(), static_cast<std::size_t>(s.dim()));
  return w.Take();
}

DomainStats DecodeStats(std::string_view bytes) {
  ByteReader r(bytes, "stats section");
  const auto dim = r.Get<std::uint32_t>("dimension");
  DomainStats s;
  s.count = r.Get<std::uint64_t>("count");
  s.mean.resize(dim);
  s.std.resize(dim);
  r.GetDoubles(s.mean.data(), dim, "mean");
  r.GetDoubles(s.std.data(), dim, "std");
  if (!r.AtEnd()) r.Fail("end of section");
  return s;
}

std::string EncodeModel(const EditnetModel& model) {
  ByteWriter w;
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(model.dims().x_dim));
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(model.dims().z_dim));
  w.Put<std::uint8_t>(model.learned_priors() ? 1 : 0);
  w.Put<double>(model.log_var_limit());
  for (const BatchNormLayer* bn : {&model.enc_bn1, &model.dec_bn1, &model.dec_bn2,
                                   &model.bn_tar, &model.bn_src}) {
    w.Put<double>(bn->momentum);
    w.Put<double>(bn->epsilon);
  }
  const auto params = model.ParameterValues();
  const auto buffers = model.Buffers();
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(params.size() + buffers.size()));
  for (const auto& [name, m] : params) {
    w.PutString(name);
    w.PutMatrix(*m);
  }
  for (const auto& [name, m] : buffers) {
    w.PutString(name);
    w.PutMatrix(*m);
  }
  return w.Take();
}

EditnetModel DecodeModel(std::string_view bytes) {
  ByteReader r(bytes, "model section");
  ModelDims dims;
  dims.x_dim = r.Get<std::uint32_t>("x_dim");
  dims.z_dim = r.Get<std::uint32_t>("z_dim");
  if (dims.x_dim == 0 || dims.z_dim == 0) {
    throw FormatError("checkpoint: model dimensions must be positive");
  }
  Rng unused(0);
  EditnetModel model(dims, unused);
  model.set_learned_priors(r.Get<std::uint8_t>("prior flag") != 0);
  model.set_log_var_limit(r.Get<double>("log-var limit"));
  for (BatchNormLayer* bn : {&model.enc_bn1, &model.dec_bn1, &model.dec_bn2,
                             &model.bn_tar, &model.bn_src}) {
    bn->momentum = r.Get<double>("batch-norm momentum");
    bn->epsilon = r.Get<double>("batch-norm epsilon");
  }
  std::vector<std::pair<std::string, Matrix*>> slots;
  for (ParamRef& p : model.Parameters()) slots.emplace_back(p.name, p.value);
  for (auto& b : model.Buffers()) slots.push_back(b);
  const auto count = r.Get<std::uint32_t>("tensor count");
  if (count != slots.size()) {
    throw FormatError("checkpoint: model has " + std::to_string(count) +
                      " tensors, expected " + std::to_string(slots.size()));
  }
  for (auto& [name, slot] : slots) {
    const std::string got = r.GetString("tensor name");
    if (got != name) {
      throw FormatError("checkpoint: expected tensor " + name + ", found " + got);
    }
    Matrix m = r.GetMatrix("tensor data");
    ExpectShape(m, slot->rows(), slot->cols(), name);
    *slot = std::move(m);
  }
  if (!r.AtEnd()) r.Fail("end of section");
  return model;
}

std::string EncodeCoral(const CoralTransform& c) {
  ByteWriter w;
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(c.dim()));
  w.Put<std::uint8_t>(c.align_means ? 1 : 0);
  w.Put<double>(c.ridge_tar);
  w.Put<double>(c.ridge_src);
  w.PutMatrix(c.whitening);
  w.PutMatrix(c.coloring);
  w.PutMatrix(RowMatrix(c.target_mean));
  w.PutMatrix(RowMatrix(c.source_mean));
  return w.Take();
}

CoralTransform DecodeCoral(std::string_view bytes) {
  ByteReader r(bytes, "coral section");
  const Eigen::Index dim = r.Get<std::uint32_t>("dimension");
  CoralTransform c;
  c.align_means = r.Get<std::uint8_t>("mean flag") != 0;
  c.ridge_tar = r.Get<double>("target ridge");
  c.ridge_src = r.Get<double>("source ridge");
  c.whitening = r.GetMatrix("whitening");
  c.coloring = r.GetMatrix("coloring");
  const Matrix tm = r.GetMatrix("target mean");
  const Matrix sm = r.GetMatrix("source mean");
  ExpectShape(c.whitening, dim, dim, "coral whitening");
  ExpectShape(c.coloring, dim, dim, "coral coloring");
  ExpectShape(tm, 1, dim, "coral target mean");
  ExpectShape(sm, 1, dim, "coral source mean");
  c.target_mean = tm.row(0);
  c.source_mean = sm.row(0);
  if (!r.AtEnd()) r.Fail("end of section");
  return c;
}

std::string EncodeCheckpoint(const Checkpoint& ckpt) {
  std::vector<Section> sections;
  if (ckpt.config) sections.push_back({"config", ckpt.config->ToText()});
  if (ckpt.model) sections.push_back({"model", EncodeModel(*ckpt.model)});
  if (ckpt.stats_tar) sections.push_back({"stats.tar", EncodeStats(*ckpt.stats_tar)});
  if (ckpt.stats_src) sections.push_back({"stats.src", EncodeStats(*ckpt.stats_src)});
  if (ckpt.stats) sections.push_back({"stats", EncodeStats(*ckpt.stats)});
  if (ckpt.coral) sections.push_back({"coral", EncodeCoral(*ckpt.coral)});
  return EncodeContainer(sections);
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  Checkpoint ckpt;
  for (const Section& s : DecodeContainer(bytes)) {
    if (s.name == "config") ckpt.config = TrainConfig::FromText(s.payload, "config section");
    else if (s.name == "model") ckpt.model.emplace(DecodeModel(s.payload));
    else if (s.name == "stats.tar") ckpt.stats_tar = DecodeStats(s.payload);
    else if (s.name == "stats.src") ckpt.stats_src = DecodeStats(s.payload);
    else if (s.name == "stats") ckpt.stats = DecodeStats(s.payload);
    else if (s.name == "coral") ckpt.coral = DecodeCoral(s.payload);
    else throw FormatError("checkpoint: unknown section " + s.name);
  }
  return ckpt;
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  WriteFile(path, EncodeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::string& path) {
  try {
    return DecodeCheckpoint(ReadFile(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace editnet
