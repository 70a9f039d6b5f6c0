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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fedcav/base/error.h"
#include "fedcav/ddpg/agent.h"
#include "fedcav/ddpg/ou_noise.h"
#include "fedcav/ddpg/replay_buffer.h"
#include "fedcav/sim/scenario.h"
#include "fedcav/sim/world.h"
#include "test_support.h"

using namespace fedcav;
using namespace fedcav::ddpg;
using fedcav::testing::DataPath;

namespace {

Transition Tagged(double tag) {
  Transition t;
  t.action = tag;
  t.reward = tag;
  return t;
}

Transition RandomTransition(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-50, 50);
  Transition t;
  for (double& s : t.state) s = u(rng);
  for (double& s : t.next_state) s = u(rng);
  t.action = std::uniform_real_distribution<double>(-4.5, 2.6)(rng);
  t.reward = std::uniform_real_distribution<double>(-1, 1)(rng);
  t.done = rng() % 4 == 0;
  return t;
}

std::vector<Transition> RandomBatch(std::mt19937_64& rng, std::size_t n) {
  std::vector<Transition> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(RandomTransition(rng));
  return b;
}

DdpgConfig SmallConfig() {
  DdpgConfig c;
  c.hidden_sizes = {16, 16};
  c.batch_size = 8;
  c.buffer_capacity = 500;
  return c;
}

}  // namespace

TEST_SUITE("ddpg") {

TEST_CASE("replay buffer evicts the oldest transition first") {
  ReplayBuffer b(2);
  b.Store(Tagged(1));
  b.Store(Tagged(2));
  b.Store(Tagged(3));
  CHECK(b.size() == 2);
  CHECK(b.at(0).action == 2);
  CHECK(b.at(1).action == 3);
  CHECK_THROWS_AS(b.at(2), InvalidArgumentError);
}

TEST_CASE("replay buffer holds at most its capacity") {
  ReplayBuffer b(50000);
  for (int i = 0; i < 50001; ++i) b.Store(Tagged(i));
  CHECK(b.size() == 50000);
  CHECK(b.capacity() == 50000);
  CHECK(b.at(0).action == 1);
  CHECK(b.at(49999).action == 50000);
}

TEST_CASE("replay buffer rejects bad use") {
  CHECK_THROWS_AS(ReplayBuffer(0), InvalidArgumentError);
  ReplayBuffer b(10);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(b.Sample(1, rng), StateError);
  b.Store(Tagged(1));
  CHECK_THROWS_AS(b.Sample(2, rng), StateError);
  Transition bad;
  bad.reward = std::nan("");
  CHECK_THROWS_AS(b.Store(bad), InvalidArgumentError);
  CHECK(b.size() == 1);
}

TEST_CASE("replay sampling is uniform (chi-squared)") {
  ReplayBuffer b(10);
  for (int i = 0; i < 10; ++i) b.Store(Tagged(i));
  std::mt19937_64 rng(77);
  std::vector<int> counts(10, 0);
  const int draws = 20000;
  for (int i = 0; i < draws / 10; ++i) {
    for (const auto& t : b.Sample(10, rng)) ++counts[static_cast<int>(t.action)];
  }
  double chi2 = 0.0;
  const double expected = draws / 10.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 27.88);  // 9 dof, p = 0.001
}

TEST_CASE("ou noise: zero volatility at the mean stays put") {
  OuNoise n({0.3, 0.15, 0.0, 1.0});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) CHECK(n.Sample(rng) == 0.3);
}

TEST_CASE("ou noise: theta dt = 1 reverts fully in one step") {
  OuNoise n({-1.0, 1.0, 0.0, 1.0}, 5.0);
  std::mt19937_64 rng(1);
  CHECK(n.Sample(rng) == -1.0);
  OuNoise m({0.0, 0.5, 0.0, 1.0}, 4.0);
  CHECK(m.Sample(rng) == 2.0);
  m.Reset();
  CHECK(m.value() == 0.0);
}

TEST_CASE("ou noise: closed-form stationary variance") {
  CHECK(OuStationaryVariance({0.0, 0.15, 0.2, 1.0}) ==
        doctest::Approx(0.04 / (0.3 - 0.0225)));
  CHECK_THROWS_AS(OuNoise({0.0, 0.0, 0.2, 1.0}), ConfigError);
  CHECK_THROWS_AS(OuNoise({0.0, 0.1, -0.2, 1.0}), ConfigError);
}

TEST_CASE("soft update examples") {
  auto src = nn::MlpParams({2, 1}, {nn::Activation::kIdentity});
  auto dst = src;
  for (double& v : src.params()) v = 1.0;
  SoftUpdate(dst, src, 0.005);
  for (double v : dst.params()) CHECK(v == doctest::Approx(0.005));
  SoftUpdate(dst, src, 0.0);
  for (double v : dst.params()) CHECK(v == doctest::Approx(0.005));
  SoftUpdate(dst, src, 1.0);
  CHECK(dst == src);
  auto other = nn::MlpParams({3, 1}, {nn::Activation::kIdentity});
  CHECK_THROWS_AS(SoftUpdate(other, src, 0.5), ShapeError);
  CHECK_THROWS_AS(SoftUpdate(dst, src, 1.5), InvalidArgumentError);
}

TEST_CASE("soft update converges geometrically") {
  auto src = nn::MlpParams({1, 1}, {nn::Activation::kIdentity});
  auto dst = src;
  src.params()[0] = 2.0;
  for (int i = 0; i < 100; ++i) SoftUpdate(dst, src, 0.1);
  CHECK(dst.params()[0] == doctest::Approx(2.0 * (1.0 - std::pow(0.9, 100))));
}

TEST_CASE("config validation and metadata round trip") {
  DdpgConfig c;
  c.hidden_sizes = {32, 8};
  c.gamma = 0.9;
  c.ou.sigma = 0.35;
  CHECK(DdpgConfig::FromMeta(c.ToMeta()) == c);
  auto bad = c;
  bad.gamma = 1.5;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = c;
  bad.buffer_capacity = 2;
  bad.batch_size = 4;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = c;
  bad.action_min = 3.0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
}

TEST_CASE("actor maps tanh output onto the action range") {
  DdpgConfig c;
  c.hidden_sizes = {4};
  auto actor = MakeActor(c, 1);
  CHECK(actor.activations().back() == nn::Activation::kTanh);
  for (double& v : actor.params()) v = 0.0;
  CHECK(DeterministicAction(actor, c, {}) == doctest::Approx(-0.95));
  actor.layer(1).bias[0] = 100.0;  // saturates at +1
  CHECK(DeterministicAction(actor, c, {}) == doctest::Approx(2.6));
  actor.layer(1).bias[0] = -100.0;
  CHECK(DeterministicAction(actor, c, {}) == doctest::Approx(-4.5));
  CHECK(MakeCritic(c, 1).input_size() == 7);
}

TEST_CASE("agents are reproducible from their seed") {
  DdpgAgent a(SmallConfig(), 5), b(SmallConfig(), 5), c(SmallConfig(), 6);
  CHECK(a.actor() == b.actor());
  CHECK(a.critic() == b.critic());
  CHECK_FALSE(a.actor() == c.actor());
  CHECK(a.target_actor() == a.actor());
  const sim::EgoObservation o{10, 0, 3, 0, 0, 50};
  CHECK(a.SelectAction(o, true) == b.SelectAction(o, true));
  CHECK(a.SelectAction(o, false) == DeterministicAction(a.actor(), a.config(), o));
}

TEST_CASE("critic targets: gamma = 0 and terminal transitions use the reward only") {
  std::mt19937_64 rng(3);
  auto cfg = SmallConfig();
  cfg.gamma = 0.0;
  DdpgAgent a(cfg, 1);
  const auto batch = RandomBatch(rng, 16);
  const auto y = a.CriticTargets(batch);
  for (std::size_t j = 0; j < batch.size(); ++j) CHECK(y[j] == batch[j].reward);

  cfg.gamma = 0.99;
  DdpgAgent b(cfg, 1);
  const auto y2 = b.CriticTargets(batch);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    if (batch[j].done) {
      CHECK(y2[j] == batch[j].reward);
    } else {
      // independent oracle: r + gamma * Q'(s', mu'(s'))
      nn::Matrix s(1, kStateSize);
      for (std::size_t i = 0; i < kStateSize; ++i) {
        s(0, i) = batch[j].next_state[i] / cfg.obs_scale[i];
      }
      const double u = nn::Forward(b.target_actor(), s)(0, 0);
      nn::Matrix sa(1, kStateSize + 1);
      for (std::size_t i = 0; i < kStateSize; ++i) sa(0, i) = s(0, i);
      sa(0, kStateSize) = u;
      const double q = nn::Forward(b.target_critic(), sa)(0, 0);
      CHECK(y2[j] == doctest::Approx(batch[j].reward + 0.99 * q).epsilon(1e-12));
    }
  }
}

TEST_CASE("critic regresses onto a constant target") {
  std::mt19937_64 rng(4);
  auto cfg = SmallConfig();
  cfg.gamma = 0.0;
  cfg.critic_lr = 1e-2;
  DdpgAgent a(cfg, 2);
  auto batch = RandomBatch(rng, 32);
  for (auto& t : batch) t.reward = 0.7;
  double loss = 0.0;
  for (int i = 0; i < 500; ++i) loss = a.CriticUpdate(batch);
  CHECK(loss < 1e-3);
}

TEST_CASE("linear critic loss falls monotonically toward a constant target") {
  std::mt19937_64 rng(4);
  DdpgConfig cfg = SmallConfig();
  cfg.hidden_sizes.clear();  // Q is affine in its input: a convex fit
  cfg.gamma = 0.0;
  cfg.critic_lr = 1e-2;
  std::uniform_real_distribution<double> s(-50, 50);
  std::vector<Transition> batch(32);
  for (auto& t : batch) {
    for (double& x : t.state) x = s(rng);
    t.action = 0.3;
    t.reward = 0.7;
  }
  DdpgAgent a(cfg, 2);
  double prev = a.CriticUpdate(batch);
  int rises = 0;
  for (int i = 2; i <= 500; ++i) {
    const double loss = a.CriticUpdate(batch);
    if (i > 10 && loss > prev) ++rises;
    prev = loss;
  }
  CHECK(rises == 0);
  CHECK(prev < 1e-3);
}

TEST_CASE("actor follows a quadratic critic to its optimum") {
  std::mt19937_64 rng(5);
  auto cfg = SmallConfig();
  cfg.actor_lr = 1e-2;
  DdpgAgent a(cfg, 3);
  const double target = 1.2;
  const CriticGradientFn q = [&](std::span<const double>, double act, double* dq) {
    *dq = -2.0 * (act - target);
    return -(act - target) * (act - target);
  };
  const auto batch = RandomBatch(rng, 16);
  for (int i = 0; i < 1000; ++i) a.ActorUpdate(batch, q);
  for (const auto& t : batch) {
    sim::EgoObservation o;
    o.pos_x = t.state[0], o.pos_y = t.state[1], o.speed = t.state[2];
    o.heading = t.state[3], o.accel = t.state[4], o.dest_distance = t.state[5];
    CHECK(std::abs(a.SelectAction(o, false) - target) < 0.05);
  }
}

TEST_CASE("a zero critic leaves the actor unchanged") {
  std::mt19937_64 rng(6);
  DdpgAgent a(SmallConfig(), 4);
  for (double& v : a.mutable_critic().params()) v = 0.0;
  const auto before = a.actor();
  const auto batch = RandomBatch(rng, 8);
  for (double g : a.PolicyGradient(batch)) CHECK(g == 0.0);
  a.ActorUpdate(batch);
  CHECK(a.actor() == before);
}

TEST_CASE("policy gradient matches finite differences of the mean Q") {
  std::mt19937_64 rng(8);
  DdpgConfig cfg;
  cfg.hidden_sizes = {1};  // 6*1 + 1 + 1*1 + 1 = 9 actor parameters
  cfg.batch_size = 4;
  cfg.buffer_capacity = 4;
  for (int trial = 0; trial < 10; ++trial) {
    DdpgAgent a(cfg, rng());
    REQUIRE(a.actor().num_params() == 9);
    for (double& v : a.mutable_critic().params()) {
      v = std::uniform_real_distribution<double>(-1, 1)(rng);
    }
    for (double& v : a.mutable_actor().params()) {
      v = std::uniform_real_distribution<double>(-1, 1)(rng);
    }
    const auto batch = RandomBatch(rng, 4);
    double mean_q = 0.0;
    const auto g = a.PolicyGradient(batch, &mean_q);
    CHECK(mean_q == doctest::Approx(a.MeanQ(batch)));
    const double h = 1e-6;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double keep = a.actor().params()[i];
      a.mutable_actor().params()[i] = keep + h;
      const double up = a.MeanQ(batch);
      a.mutable_actor().params()[i] = keep - h;
      const double down = a.MeanQ(batch);
      a.mutable_actor().params()[i] = keep;
      const double fd = (up - down) / (2 * h);
      CHECK(std::abs(fd - g[i]) < 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("no updates happen before the buffer holds a batch") {
  auto cfg = SmallConfig();
  cfg.batch_size = 64;
  DdpgAgent a(cfg, 9);
  const auto actor = a.actor();
  const auto critic = a.critic();
  sim::World w(sim::LoadScenario(DataPath("scenarios/quick.scn")));
  const auto m = a.TrainEpisode(w, 0);
  CHECK(m.steps == 20);
  CHECK(a.buffer().size() == 20);
  CHECK(a.updates() == 0);
  CHECK(a.actor() == actor);
  CHECK(a.critic() == critic);
  CHECK(a.target_actor() == actor);
  CHECK(a.episodes() == 1);
}

TEST_CASE("updates start once the buffer holds a batch") {
  auto cfg = SmallConfig();
  cfg.batch_size = 8;
  DdpgAgent a(cfg, 9);
  const auto actor = a.actor();
  sim::World w(sim::LoadScenario(DataPath("scenarios/quick.scn")));
  a.TrainEpisode(w, 0);
  CHECK(a.updates() == 13);
  CHECK_FALSE(a.actor() == actor);
  CHECK_FALSE(a.target_actor() == a.actor());
}

TEST_CASE("episode that never moves runs to the step limit") {
  auto cfg = SmallConfig();
  cfg.ou.sigma = 0.0;
  cfg.batch_size = 1000;
  cfg.buffer_capacity = 1000;
  DdpgAgent a(cfg, 1);
  for (double& v : a.mutable_actor().params()) v = 0.0;  // constant -0.95 m/s^2
  sim::World w(sim::LoadScenario(DataPath("scenarios/empty_road.scn")));
  const auto m = a.TrainEpisode(w, 0);
  CHECK(m.steps == 900);
  CHECK(m.timed_out);
  CHECK_FALSE(m.collided);
  CHECK(m.total_reward == doctest::Approx(-0.02 * 900));
  // truncation is not a terminal transition
  CHECK_FALSE(a.buffer().at(899).done);
}

TEST_CASE("collision ends the training episode with the penalty") {
  DdpgAgent a(SmallConfig(), 1);
  sim::World w(sim::LoadScenario(DataPath("scenarios/crossing_collision.scn")));
  const auto m = a.TrainEpisode(w, 0);
  CHECK(m.collided);
  CHECK(m.steps == 1);
  CHECK(m.total_reward == -10.0);
  CHECK(a.buffer().at(0).done);
}

TEST_CASE("agent checkpoint round trip") {
  DdpgAgent a(SmallConfig(), 2);
  sim::World w(sim::LoadScenario(DataPath("scenarios/quick.scn")));
  a.TrainEpisode(w, 0);
  const auto c = a.ToCheckpoint();
  CHECK(c.meta_value("kind") == "agent");
  const auto b = DdpgAgent::FromCheckpoint(nn::Checkpoint::Deserialize(c.Serialize()), 2);
  CHECK(b.actor() == a.actor());
  CHECK(b.critic() == a.critic());
  CHECK(b.target_critic() == a.target_critic());
  CHECK(b.actor_adam() == a.actor_adam());
  CHECK(b.updates() == a.updates());
  CHECK(b.config() == a.config());
}

TEST_CASE("load weights checks sizes and resyncs targets") {
  DdpgAgent a(SmallConfig(), 2), b(SmallConfig(), 3);
  a.LoadWeights(b.actor().Flatten(), b.critic().Flatten(), true);
  CHECK(a.actor() == b.actor());
  CHECK(a.target_actor() == b.actor());
  CHECK(a.target_critic() == b.critic());
  CHECK_THROWS_AS(a.LoadWeights(std::vector<double>(3), b.critic().Flatten(), true),
                  ShapeError);
}

}  // TEST_SUITE
