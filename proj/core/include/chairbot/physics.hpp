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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "chairbot/config_file.hpp"
#include "chairbot/geom.hpp"
#include "chairbot/model.hpp"

namespace chairbot {

// Contact points: three feet, four seat corners, two backrest top corners.
inline constexpr std::size_t kNumContactPoints = 9;
inline constexpr std::size_t kFirstSeatCorner = 3;
inline constexpr std::size_t kFirstBackrestPoint = 7;

/// Standing posture used as the rest pose for every named initial pose.
inline constexpr Posture kStandingPosture{{90.0, 80.0, 90.0, 100.0, 90.0, 100.0}};

struct PhysicsConfig {
  double gravity = 9.81;           // m/s^2
  double dt = 0.1;                 // control period, s
  int substeps = 100;
  double contact_stiffness = 2000.0;  // N/m
  double contact_damping = 20.0;      // N s/m
  double friction = 0.6;
  double friction_velocity_eps = 0.01;  // m/s, tanh regularization
  double servo_rate_limit = 10.472;     // rad/s
  double servo_deadband_deg = 0.0;      // total backlash band
  bool contacts_enabled = true;

  friend bool operator==(const PhysicsConfig&, const PhysicsConfig&) = default;
};

/// Throws ValidationError on non-positive or inconsistent values.
void validate_config(const PhysicsConfig& config);
PhysicsConfig physics_config_from(const ConfigFile& file);
ConfigFile to_config_file(const PhysicsConfig& config);
PhysicsConfig load_physics_config(const std::filesystem::path& path);

struct RobotState {
  Vec3 p;  // seat center, world frame, m
  Quat q;  // seat attitude
  Vec3 v;  // seat center velocity, m/s
  Vec3 w;  // angular velocity, world frame, rad/s
  JointAngles phi;
  std::array<double, kNumJoints> phi_rate{};    // mean over the last control period
  std::array<double, kNumJoints> servo_rate{};  // at the end of the last substep
  std::array<bool, kNumContactPoints> contact{};
  double time = 0.0;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct ContactPoint {
  Vec3 position;  // world frame
  bool in_contact = false;
  double normal_force = 0.0;
  double penetration = 0.0;
};

struct ContactSet {
  std::array<ContactPoint, kNumContactPoints> points;

  std::size_t foot_contacts() const;
  std::size_t seat_corner_contacts() const;
  std::size_t total_contacts() const;
};

enum class InitialPose { kStanding, kRightSide, kLeftSide, kBack };

std::string_view to_string(InitialPose pose);
/// Throws ParseError for names other than standing, right_side, left_side, back.
InitialPose initial_pose_from_string(std::string_view name);

/// Composite rigid-body simulator for the chair.
///
/// The seat, backrest and three point-mass feet form one body whose shape
/// follows the joint angles. Joints are position-tracked by rate-limited
/// servos; leg swing enters through exact linear and angular momentum
/// bookkeeping around the moving center of mass. Ground contact is a
/// penalty spring-damper with tanh-regularized Coulomb friction.
class Simulator {
 public:
  Simulator(RobotModel model, PhysicsConfig config);

  const RobotModel& model() const { return model_; }
  const PhysicsConfig& config() const { return config_; }

  /// Advances one control period. Throws PhysicsError naming the substep on NaN.
  RobotState step(const RobotState& state, const Posture& command) const;

  /// Drops the named pose from 5 mm, holds the standing posture and
  /// integrates at least 0.5 s until kinetic energy < 1e-6 J.
  /// Throws PhysicsError if it does not settle within 2 s.
  RobotState reset_to(InitialPose pose) const;
  /// Returns `state` with its quaternion normalized and joints clamped to range.
  RobotState reset_to(const RobotState& state) const;

  /// Unsettled pose: attitude and joints set, lowest point `clearance` above ground.
  RobotState place(InitialPose pose, double clearance) const;

  ContactSet query_contacts(const RobotState& state) const;

  double total_mass() const { return total_mass_; }
  Vec3 center_of_mass(const RobotState& state) const;
  Vec3 linear_momentum(const RobotState& state) const;
  double kinetic_energy(const RobotState& state) const;
  double potential_energy(const RobotState& state) const;

  /// Steps every state with its command. Results equal sequential stepping.
  void step_batch(std::span<RobotState> states, std::span<const Posture> commands,
                  std::size_t threads = 1) const;

 private:
  struct Frame;
  Frame make_frame(const RobotState& state) const;
  void substep(RobotState& state, const JointAngles& target, double h) const;
  JointAngles servo_target(const RobotState& state, const Posture& command) const;

  RobotModel model_;
  PhysicsConfig config_;
  double total_mass_ = 0.0;
  Mat3 seat_inertia_;      // about the seat origin
  Mat3 backrest_inertia_;  // about the backrest center
  std::array<Vec3, kNumContactPoints> fixed_points_{};
};

// Free-function forms over a temporary Simulator.
RobotState reset_to(InitialPose pose, const RobotModel& model, const PhysicsConfig& config);
RobotState step(const RobotState& state, const Posture& command, const RobotModel& model,
                const PhysicsConfig& config);
ContactSet query_contacts(const RobotState& state, const RobotModel& model,
                          const PhysicsConfig& config);

}  // namespace chairbot
