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

#include "fedcav/ddpg/ou_noise.h"

#include <cmath>

#include "fedcav/base/error.h"

namespace fedcav::ddpg {

void OuParams::Validate() const {
  if (!(theta > 0.0)) throw ConfigError("OU theta must be > 0");
  if (!(sigma >= 0.0)) throw ConfigError("OU sigma must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("OU dt must be > 0");
}

OuNoise::OuNoise(OuParams params) : OuNoise(params, params.mu) {}

OuNoise::OuNoise(OuParams params, double x0) : params_(params), x_(x0) {
  params_.Validate();
}

double OuNoise::Sample(std::mt19937_64& rng) {
  const double z = normal_(rng);
  x_ = x_ + params_.theta * (params_.mu - x_) * params_.dt +
       params_.sigma * std::sqrt(params_.dt) * z;
  return x_;
}

void OuNoise::Reset() {
  x_ = params_.mu;
  normal_.reset();
}

double OuStationaryVariance(const OuParams& p) {
  return p.sigma * p.sigma * p.dt / (2.0 * p.theta - p.theta * p.theta * p.dt);
}

}  // namespace fedcav::ddpg
