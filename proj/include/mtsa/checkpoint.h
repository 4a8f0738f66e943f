// Copyright 2026 The mtsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef MTSA_CHECKPOINT_H_
#define MTSA_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mtsa/model.h"

namespace mtsa {

// File layout:
//   8 bytes   "MTSACKPT"
//   u32 LE    format version
//   u64 LE    header length in bytes
//   header    UTF-8 JSON: config, tensor table, vocabulary (static models)
//   payload   every tensor in table order, row-major little-endian f64
inline constexpr std::string_view kCheckpointMagic = "MTSACKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TensorEntry {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct CheckpointInfo {
  std::uint32_t version = 0;
  ModelConfig config;
  std::vector<TensorEntry> tensors;
  std::size_t vocabulary_size = 0;
  std::size_t payload_values = 0;
};

std::string SerializeModel(const Model& model);
// Throws CheckpointError on bad magic/version, truncation, trailing bytes or
// any disagreement between the header config and the stored tensors.
Model DeserializeModel(std::string_view bytes);

void SaveCheckpoint(const Model& model, const std::string& path);
Model LoadCheckpoint(const std::string& path);
// Header-only summary; validates the framing but builds no model.
CheckpointInfo InspectCheckpoint(const std::string& path);

// Canonical JSON text of a model config (stable key order).
std::string ModelConfigJson(const ModelConfig& config);
ModelConfig ParseModelConfigJson(std::string_view text);

}  // namespace mtsa

#endif  // MTSA_CHECKPOINT_H_
