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

#ifndef FEDCAV_NN_ADAM_H_
#define FEDCAV_NN_ADAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fedcav::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(std::size_t num_params, AdamConfig config = {});

  // Zeroes both moments and the step counter.
  void Reset();
  bool operator==(const AdamState&) const = default;
};

// In-place bias-corrected Adam step (Kingma & Ba):
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,  t <- t + 1
//   p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
// Throws NumericError on a non-finite gradient (nothing is modified) and
// ShapeError on mismatched lengths.
void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state, double lr);

}  // namespace fedcav::nn

#endif  // FEDCAV_NN_ADAM_H_
