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

#include "fedcav/nn/adam.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fedcav/base/error.h"
#include "fedcav/simd/kernels.h"

namespace fedcav::nn {

AdamState::AdamState(std::size_t num_params, AdamConfig config)
    : m(num_params, 0.0),
      v(num_params, 0.0),
      beta1(config.beta1),
      beta2(config.beta2),
      eps(config.eps) {}

void AdamState::Reset() {
  std::fill(m.begin(), m.end(), 0.0);
  std::fill(v.begin(), v.end(), 0.0);
  t = 0;
}

void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state, double lr) {
  FEDCAV_CHECK(params.size() == grads.size() &&
                   params.size() == state.m.size() &&
                   params.size() == state.v.size(),
               ShapeError,
               "adam: params/grads/state sizes differ (" +
                   std::to_string(params.size()) + ", " +
                   std::to_string(grads.size()) + ", " +
                   std::to_string(state.m.size()) + ")");
  const simd::KernelTable& k = simd::Active();
  if (!k.all_finite(grads.data(), grads.size())) {
    throw NumericError("adam: non-finite gradient (training diverged)");
  }
  state.t += 1;
  const double td = static_cast<double>(state.t);
  const simd::AdamCoefficients c{
      lr,
      state.beta1,
      state.beta2,
      1.0 - state.beta1,
      1.0 - state.beta2,
      state.eps,
      1.0 - std::pow(state.beta1, td),
      1.0 - std::pow(state.beta2, td),
  };
  k.adam(params.data(), state.m.data(), state.v.data(), grads.data(),
         params.size(), c);
}

}  // namespace fedcav::nn
