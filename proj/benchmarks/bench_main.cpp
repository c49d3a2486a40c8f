// Copyright 2026 The chairbot Authors
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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "chairbot/env.hpp"
#include "chairbot/physics.hpp"
#include "chairbot/policy.hpp"
#include "chairbot/ppo.hpp"

namespace chairbot {
namespace {

const RobotModel& model() {
  static const RobotModel m = load_model(std::string(CHAIRBOT_BENCH_SOURCE_DIR) + "/models/chair.chair.xml");
  return m;
}

void BM_PhysicsStep(benchmark::State& state) {
  const Simulator sim(model(), PhysicsConfig{});
  RobotState s = sim.reset_to(InitialPose::kStanding);
  for (auto _ : state) {
    s = sim.step(s, kStandingPosture);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PhysicsStep);

void BM_EnvStep(benchmark::State& state) {
  ChairEnv env(model(), PhysicsConfig{}, TaskConfig::defaults(Task::kWalk), 1);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Action a{};
  for (auto _ : state) {
    for (double& x : a) x = u(rng);
    benchmark::DoNotOptimize(env.step(a));
  }
}
BENCHMARK(BM_EnvStep);

void BM_PolicyForward(benchmark::State& state) {
  PolicyNet net = PolicyNet::for_model(64, model());
  std::mt19937_64 rng(2);
  net.initialize(rng, -1.0);
  const Eigen::MatrixXd obs = Eigen::MatrixXd::Random(kObservationSize, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(act_batch(net, obs, ActMode::kStochastic, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PolicyForward)->Arg(1)->Arg(1024);

void BM_PpoLossGradient(benchmark::State& state) {
  PolicyNet net = PolicyNet::for_model(64, model());
  std::mt19937_64 rng(3);
  net.initialize(rng, -1.0);
  const Eigen::Index n = 1024;
  Minibatch mb{Eigen::MatrixXd::Random(kObservationSize, n), Eigen::MatrixXd::Random(6, n),
               Eigen::VectorXd::Zero(n), Eigen::VectorXd::Random(n), Eigen::VectorXd::Random(n)};
  Eigen::VectorXd grad(net.params().size());
  for (auto _ : state) {
    grad.setZero();
    benchmark::DoNotOptimize(ppo_loss(net, mb, TrainConfig{}, &grad));
  }
}
BENCHMARK(BM_PpoLossGradient);

}  // namespace
}  // namespace chairbot

BENCHMARK_MAIN();
