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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chairbot/checkpoint.hpp"
#include "chairbot/env.hpp"
#include "chairbot/physics.hpp"
#include "chairbot/policy.hpp"
#include "chairbot/ppo.hpp"

namespace chairbot {

/// One learning-curve entry. Episode statistics cover the episodes that
/// ended during the epoch and are NaN when none did.
struct CurveRow {
  int epoch = 0;
  bool noise = false;
  double mean_return = std::numeric_limits<double>::quiet_NaN();
  double mean_length = std::numeric_limits<double>::quiet_NaN();
  std::size_t episodes = 0;
  std::array<std::size_t, kNumResetReasons> resets{};
  double mean_step_reward = 0.0;
  LossStats loss;
};

std::string curve_csv_header();
/// NaN statistics are written as empty fields.
std::string curve_csv_row(const CurveRow& row);

struct TrainOutputs {
  // Empty paths are skipped.
  std::filesystem::path checkpoint;
  std::filesystem::path curve;
  std::function<void(const CurveRow&)> on_epoch;
};

struct TrainResult {
  PolicyCheckpoint checkpoint;
  std::vector<CurveRow> curve;
};

/// Collects horizon steps from every environment, estimates advantages and
/// applies a PPO update, once per epoch. With noise_epochs > 0 the
/// environments are then randomized with `task.noise` for the extra epochs.
/// On a TrainingError the last good policy is saved before rethrowing.
TrainResult train(const RobotModel& model, const PhysicsConfig& physics, const TaskConfig& task,
                  const TrainConfig& config, const TrainOutputs& outputs = {});

using ActionSource = std::function<Action(const Observation&)>;

/// Mean action of the policy.
ActionSource deterministic_policy(PolicyNet net);
/// Uniform samples over the joint ranges.
ActionSource random_policy(const RobotModel& model, std::uint64_t seed);

struct EvalConfig {
  std::size_t episodes = 30;
  std::uint64_t seed = 1;
};

struct EpisodeResult {
  InitialPose pose = InitialPose::kStanding;
  double total_return = 0.0;
  int length = 0;
  ResetReason reason = ResetReason::kNone;
  // Walk: survived to the episode cap. Stand-up: u_prj exceeded the standing gate.
  bool success = false;
  double max_u_prj = -1.0;
  double final_u_prj = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double mean_yaw_deg = 0.0;
};

struct PoseTally {
  std::size_t episodes = 0;
  std::size_t successes = 0;
};

struct EvalSummary {
  std::vector<EpisodeResult> episodes;
  double mean_return = 0.0;
  double mean_length = 0.0;
  double mean_dx = 0.0;
  double mean_final_u_prj = 0.0;
  double mean_yaw_deg = 0.0;
  double success_rate = 0.0;
  std::array<PoseTally, 4> by_pose{};  // indexed by InitialPose
};

/// Runs complete episodes one after another. Walk episodes start standing;
/// stand-up episodes cycle through the task's initial poses.
EvalSummary evaluate(const RobotModel& model, const PhysicsConfig& physics, const TaskConfig& task,
                     const ActionSource& policy, const EvalConfig& config,
                     const std::function<void(std::size_t, const StepResult&)>& on_step = {});

}  // namespace chairbot
