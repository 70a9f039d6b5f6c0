// Copyright 2026 The FedCAV Authors. All rights reserved.
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

#ifndef FEDCAV_NN_CHECKPOINT_H_
#define FEDCAV_NN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "fedcav/nn/adam.h"
#include "fedcav/nn/mlp.h"

namespace fedcav::nn {

// Versioned, self-describing binary container for networks, optimizer
// states and string metadata. All integers and doubles are little-endian.
//
//   offset  field
//   0       char[8]  magic "FCAVCKPT"
//   8       u32      format version (currently 1)
//   12      u32      section count
//   16      sections, each:
//             u8   kind (1 = meta, 2 = mlp, 3 = adam)
//             u32  name length, then name bytes (UTF-8)
//             u64  payload length, then payload
//   end-8   u64      FNV-1a 64 of every preceding byte
//
// Payloads:
//   meta  u32 count, then count x (u32 len, key, u32 len, value)
//   mlp   u32 L, u32 sizes[L + 1], u8 activations[L], u64 P, f64 params[P]
//         (params in MlpParams flatten order)
//   adam  u64 t, f64 beta1, f64 beta2, f64 eps, u64 N, f64 m[N], f64 v[N]
//
// Sections are written in (kind, name) order so equal contents serialize to
// identical bytes.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  std::map<std::string, std::string> meta;
  std::map<std::string, MlpParams> networks;
  std::map<std::string, AdamState> optimizers;

  std::string Serialize() const;
  // Throws CheckpointError on bad magic, unsupported version, truncation or
  // checksum mismatch.
  static Checkpoint Deserialize(std::string_view bytes);

  void Save(const std::filesystem::path& path) const;
  static Checkpoint Load(const std::filesystem::path& path);

  const MlpParams& network(const std::string& name) const;
  const AdamState& optimizer(const std::string& name) const;
  const std::string& meta_value(const std::string& key) const;
  std::string meta_or(const std::string& key, std::string_view fallback) const;

  bool operator==(const Checkpoint&) const = default;
};

}  // namespace fedcav::nn

#endif  // FEDCAV_NN_CHECKPOINT_H_
