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

#ifndef FEDCAV_DDPG_OU_NOISE_H_
#define FEDCAV_DDPG_OU_NOISE_H_

#include <random>

namespace fedcav::ddpg {

struct OuParams {
  double mu = 0.0;
  double theta = 0.15;
  double sigma = 0.2;
  double dt = 1.0;

  // Throws ConfigError unless theta > 0, sigma >= 0, dt > 0.
  void Validate() const;
  bool operator==(const OuParams&) const = default;
};

// Discrete Ornstein-Uhlenbeck process
//   x <- x + theta (mu - x) dt + sigma sqrt(dt) z,  z ~ N(0, 1).
class OuNoise {
 public:
  explicit OuNoise(OuParams params = {});
  OuNoise(OuParams params, double x0);

  double Sample(std::mt19937_64& rng);
  // Back to mu with a fresh normal stream.
  void Reset();

  double value() const { return x_; }
  const OuParams& params() const { return params_; }

 private:
  OuParams params_;
  double x_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Variance of the stationary distribution of the recurrence above.
double OuStationaryVariance(const OuParams& p);

}  // namespace fedcav::ddpg

#endif  // FEDCAV_DDPG_OU_NOISE_H_
