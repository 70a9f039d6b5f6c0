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

#ifndef FEDCAV_BASE_HASH_H_
#define FEDCAV_BASE_HASH_H_

#include <cstdint>
#include <span>
#include <string_view>

namespace fedcav {

// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
std::uint64_t SplitMix64(std::uint64_t x);

// Stable per-stream seed: seed = mix(mix(mix(master) ^ agent) ^ episode).
// Every random stream in the project is derived through this function so
// that runs are reproducible from the master seed alone.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t agent_id,
                         std::uint64_t episode_idx);

// 64-bit FNV-1a. Used for config hashes and checkpoint trailers.
std::uint64_t Fnv1a64(std::span<const unsigned char> bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t Fnv1a64(std::string_view text);

}  // namespace fedcav

#endif  // FEDCAV_BASE_HASH_H_
