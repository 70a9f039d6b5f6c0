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

#include "fedcav/ddpg/replay_buffer.h"

#include <cmath>
#include <string>

#include "fedcav/base/error.h"

namespace fedcav::ddpg {

ReplayBuffer::ReplayBuffer(std::size_t capacity) {
  if (capacity == 0) throw InvalidArgumentError("replay capacity must be >= 1");
  items_.resize(capacity);
}

void ReplayBuffer::Store(const Transition& t) {
  bool finite = std::isfinite(t.action) && std::isfinite(t.reward);
  for (std::size_t i = 0; i < kStateSize; ++i) {
    finite = finite && std::isfinite(t.state[i]) && std::isfinite(t.next_state[i]);
  }
  if (!finite) throw InvalidArgumentError("transition has non-finite components");
  items_[head_] = t;
  head_ = (head_ + 1) % items_.size();
  if (size_ < items_.size()) ++size_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw InvalidArgumentError("replay index out of range");
  const std::size_t oldest = size_ < items_.size() ? 0 : head_;
  return items_[(oldest + i) % items_.size()];
}

std::vector<Transition> ReplayBuffer::Sample(std::size_t batch_size,
                                             std::mt19937_64& rng) const {
  if (batch_size == 0 || size_ < batch_size) {
    throw StateError("replay buffer holds " + std::to_string(size_) +
                     " transitions, batch needs " + std::to_string(batch_size));
  }
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<Transition> out;
  out.reserve(batch_size);
  for (std::size_t k = 0; k < batch_size; ++k) out.push_back(items_[pick(rng)]);
  return out;
}

}  // namespace fedcav::ddpg
