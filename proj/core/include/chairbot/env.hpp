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
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "chairbot/config_file.hpp"
#include "chairbot/geom.hpp"
#include "chairbot/model.hpp"
#include "chairbot/physics.hpp"

namespace chairbot {

enum class Task { kWalk, kStandup };

std::string_view to_string(Task task);
/// Accepts "walk" and "standup"; throws ParseError otherwise.
Task task_from_string(std::string_view name);

inline constexpr std::size_t kHistoryLength = 4;
inline constexpr std::size_t kSlotSize = 10;
inline constexpr std::size_t kObservationSize = kHistoryLength * kSlotSize;

/// Joint command angles in radians.
using Action = std::array<double, kNumJoints>;
/// Four slots of [qx, qy, qz, qw, a0 .. a5], oldest first.
using Observation = std::array<double, kObservationSize>;

struct HistorySlot {
  Quat q;
  Action a{};
};

/// Uses the newest four slots of `history` (oldest first). Shorter histories
/// are padded at the front by repeating the oldest slot. Throws Error if empty.
Observation build_observation(std::span<const HistorySlot> history);

struct WalkParams {
  double progress_weight = 30.0;
  double height_weight = 20.0;
  double up_weight = 5.0;
  double heading_weight = 2.0;
  double alive_weight = 1.0;
  double action_weight = 2.0;
  double velocity_weight = 2.0;

  double height_scale = 0.08;
  double up_scale = 0.93;
  double heading_scale = 0.8;
  double omega_max = 10.472;
  double omega_tol = 1.0;

  double tilt_limit = 0.7;
  double min_height = 0.005;

  friend bool operator==(const WalkParams&, const WalkParams&) = default;
};

struct StandupParams {
  double up_weight = 250.0;
  double standing_weight = 100.0;
  double spreading_weight = 50.0;
  double action_weight = 2.0;

  double standing_gate = 0.85;
  double spreading_gate = 0.2;
  Action a_stand{-0.1745, 0.0, -0.1745, 0.0, 0.1745, 0.0};
  // Compared against joints 0, 1, 3 and 5.
  std::array<double, 4> a_expand{-1.0, -1.0, 1.0, -1.0};

  double flip_limit = -0.7;
  double fold_gate = 0.6;
  double fold_limit = 1.0;

  std::vector<InitialPose> initial_poses{InitialPose::kRightSide, InitialPose::kLeftSide,
                                         InitialPose::kBack};

  friend bool operator==(const StandupParams&, const StandupParams&) = default;
};

/// Relative half-widths for physical parameters and Gaussian sigmas for
/// per-step sensor and action noise.
struct NoiseConfig {
  double mass_range = 0.10;
  double friction_range = 0.20;
  double stiffness_range = 0.20;
  double sensor_sigma = 0.01;
  double action_sigma = 0.02;

  static NoiseConfig none() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }
  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

struct TaskConfig {
  Task task = Task::kWalk;
  Vec3 target{10.0, 0.0, 0.0};
  double dt = 0.1;
  int max_episode_steps = 350;
  double death_reward = -1.0;
  WalkParams walk;
  StandupParams standup;
  NoiseConfig noise;

  static TaskConfig defaults(Task task);
  friend bool operator==(const TaskConfig&, const TaskConfig&) = default;
};

/// Throws ValidationError on non-finite weights or out-of-range thresholds.
void validate_task_config(const TaskConfig& config);
/// Reads `task` first, then only the keys that belong to that task.
TaskConfig task_config_from(const ConfigFile& file);
ConfigFile to_config_file(const TaskConfig& config);
TaskConfig load_task_config(const std::filesystem::path& path);

struct RewardTerm {
  std::string_view name;
  double value = 0.0;
  double weight = 0.0;
  double weighted = 0.0;
};

struct RewardBreakdown {
  std::array<RewardTerm, 8> terms{};
  std::size_t count = 0;
  double total = 0.0;
  bool death = false;

  void add(std::string_view name, double value, double weight);
  /// Null when no term has that name.
  const RewardTerm* find(std::string_view name) const;
  std::span<const RewardTerm> active() const { return {terms.data(), count}; }
};

/// Replaces the total with the death reward.
void apply_death(RewardBreakdown& reward, double death_reward);

struct PreviousStep {
  Vec3 p;
  Action a{};
};

/// Terms: progress, height, up, heading, alive, action, velocity.
RewardBreakdown walk_reward(const RobotState& state, const PreviousStep& prev, const Action& action,
                            const TaskConfig& config);
/// Terms: up, standing, spreading, action.
RewardBreakdown standup_reward(const RobotState& state, const PreviousStep& prev,
                               const Action& action, const TaskConfig& config);

enum class ResetReason { kNone, kMaxEpisode, kTilt, kGround, kHeight, kFlip, kFold };
inline constexpr std::size_t kNumResetReasons = 7;

std::string_view to_string(ResetReason reason);
/// True for every reason except none and max_episode.
bool is_death(ResetReason reason);

struct EpisodeStatus {
  int step = 0;
  ResetReason reason = ResetReason::kNone;

  bool live() const { return reason == ResetReason::kNone; }
  friend bool operator==(const EpisodeStatus&, const EpisodeStatus&) = default;
};

/// `status.step` counts the steps taken so far including the current one.
/// Failure predicates are checked before the episode cap.
EpisodeStatus walk_reset(const RobotState& state, const EpisodeStatus& status,
                         const TaskConfig& config);
EpisodeStatus standup_reset(const RobotState& state, const EpisodeStatus& status,
                            const Action& action, const TaskConfig& config);

struct StepResult {
  Observation observation{};
  RewardBreakdown reward;
  EpisodeStatus status;
  // State reached by the step, before any automatic reset.
  RobotState state;
  Action applied{};
};

/// One simulated chair running a task. Episodes restart automatically.
class ChairEnv {
 public:
  ChairEnv(RobotModel model, PhysicsConfig physics, TaskConfig task, std::uint64_t seed,
           std::size_t id = 0);

  /// Starts a new episode from the task's initial pose (a uniform draw for stand-up).
  const Observation& reset();
  const Observation& reset(InitialPose pose);

  /// Clamps the action, actuates one control period, scores it and checks the
  /// reset conditions. On termination the returned observation is the first
  /// one of the next episode.
  StepResult step(const Action& action);

  /// Draws physical parameters from `noise` and enables its per-step sensor
  /// and action noise. Zero widths leave the environment unchanged.
  void randomize(const NoiseConfig& noise, std::mt19937_64& rng);

  const Observation& observation() const { return observation_; }
  const RobotState& state() const { return state_; }
  const EpisodeStatus& status() const { return status_; }
  InitialPose initial_pose() const { return initial_pose_; }
  const TaskConfig& task() const { return task_; }
  const Simulator& simulator() const { return sim_; }
  const NoiseConfig& active_noise() const { return noise_; }
  std::size_t id() const { return id_; }
  Action clamp_action(const Action& action) const;

 private:
  const RobotState& settled(InitialPose pose);
  void push_history(const Quat& q, const Action& a);
  Quat observe(const Quat& q);

  RobotModel base_model_;
  PhysicsConfig base_physics_;
  Simulator sim_;
  TaskConfig task_;
  NoiseConfig noise_ = NoiseConfig::none();
  std::mt19937_64 rng_;
  std::size_t id_;
  std::array<std::optional<RobotState>, 4> settled_{};
  Action lower_{};
  Action upper_{};
  Action rest_action_{};

  RobotState state_;
  EpisodeStatus status_;
  InitialPose initial_pose_ = InitialPose::kStanding;
  PreviousStep prev_;
  std::array<HistorySlot, kHistoryLength> history_{};
  Observation observation_{};
};

StepResult env_step(ChairEnv& env, const Action& action);
void randomize(ChairEnv& env, const NoiseConfig& noise, std::mt19937_64& rng);

/// N independent environments stepped together. Environment i is seeded with
/// a sequence derived from (seed, i).
class VecEnv {
 public:
  VecEnv(const RobotModel& model, const PhysicsConfig& physics, const TaskConfig& task,
         std::size_t count, std::uint64_t seed, std::size_t threads = 1);

  std::size_t size() const { return envs_.size(); }
  ChairEnv& operator[](std::size_t i) { return envs_[i]; }
  const ChairEnv& operator[](std::size_t i) const { return envs_[i]; }

  /// results[i] = envs[i].step(actions[i]); equal to stepping one at a time.
  void step(std::span<const Action> actions, std::span<StepResult> results);
  void randomize(const NoiseConfig& noise, std::uint64_t seed);

 private:
  std::vector<ChairEnv> envs_;
  std::size_t threads_;
};

}  // namespace chairbot
