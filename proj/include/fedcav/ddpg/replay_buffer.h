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

#ifndef FEDCAV_DDPG_REPLAY_BUFFER_H_
#define FEDCAV_DDPG_REPLAY_BUFFER_H_

#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "fedcav/sim/world.h"

namespace fedcav::ddpg {

inline constexpr std::size_t kStateSize = sim::EgoObservation::kSize;

struct Transition {
  std::array<double, kStateSize> state{};
  double action = 0.0;
  double reward = 0.0;
  std::array<double, kStateSize> next_state{};
  bool done = false;

  bool operator==(const Transition&) const = default;
};

// Fixed-capacity ring of transitions; the oldest entry is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 50000);

  // Throws InvalidArgumentError when any component is non-finite.
  void Store(const Transition& t);

  // Uniform draw with replacement. Throws StateError when size() < batch_size.
  std::vector<Transition> Sample(std::size_t batch_size, std::mt19937_64& rng) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return items_.size(); }
  bool empty() const { return size_ == 0; }
  // i-th stored transition, 0 being the oldest.
  const Transition& at(std::size_t i) const;

 private:
  std::vector<Transition> items_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
};

}  // namespace fedcav::ddpg

#endif  // FEDCAV_DDPG_REPLAY_BUFFER_H_
