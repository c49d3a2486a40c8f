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
#include <string>
#include <string_view>

#include "chairbot/geom.hpp"

namespace chairbot {

inline constexpr std::size_t kNumJoints = 6;
inline constexpr std::size_t kNumLegs = 3;
inline constexpr std::size_t kNumSeatCorners = 4;

// Servo angle at which a leg hangs vertically.
inline constexpr double kServoCenterDeg = 90.0;

/// Six servo command angles in degrees, theta_0 .. theta_5.
struct Posture {
  std::array<double, kNumJoints> deg{90.0, 90.0, 90.0, 90.0, 90.0, 90.0};

  double& operator[](std::size_t i) { return deg[i]; }
  double operator[](std::size_t i) const { return deg[i]; }
  friend bool operator==(const Posture&, const Posture&) = default;
};

/// Simulator joint angles in radians; zero is a vertical leg.
struct JointAngles {
  std::array<double, kNumJoints> rad{};

  double& operator[](std::size_t i) { return rad[i]; }
  double operator[](std::size_t i) const { return rad[i]; }
  friend bool operator==(const JointAngles&, const JointAngles&) = default;
};

struct JointSpec {
  std::string name;
  double min_deg = -50.0;
  double max_deg = 50.0;
  // Posture index that drives this joint, and the direction of the mapping.
  int servo = 0;
  int sign = 1;

  friend bool operator==(const JointSpec&, const JointSpec&) = default;
};

/// One gimbal leg. Both servo axes pass through `position`; the foot hangs
/// `leg_length` below it when both joints are at zero.
struct HipSpec {
  std::string name;
  Vec3 position;
  Vec3 axis1;
  Vec3 axis2;
  double leg_length = 0.08;
  std::array<int, 2> joints{};

  friend bool operator==(const HipSpec&, const HipSpec&) = default;
};

/// Chair geometry in the seat body frame: origin at the seat center, +x
/// forward, +y left, +z up through the seat surface.
struct RobotModel {
  std::string name = "chair";
  Vec3 seat_half_extents;
  double seat_mass = 0.25;
  Vec3 backrest_center;
  Vec3 backrest_half_extents;
  double backrest_mass = 0.0;
  double foot_mass = 0.01;
  double foot_radius = 0.004;
  std::array<HipSpec, kNumLegs> hips;
  std::array<JointSpec, kNumJoints> joints;

  /// Bottom corners of the seat plate.
  std::array<Vec3, kNumSeatCorners> seat_corners() const;
  /// Top corners of the backrest frame.
  std::array<Vec3, 2> backrest_points() const;
  double total_mass() const { return seat_mass + backrest_mass + 3.0 * foot_mass; }

  friend bool operator==(const RobotModel&, const RobotModel&) = default;
};

/// Parses the MJCF subset used for chair descriptions and validates it.
///
/// Accepted elements are mujoco, worldbody, body, joint and geom. The seat
/// body holds a box geom named "seat", an optional box geom named
/// "backrest", and three leg bodies; each leg body holds two hinge joints
/// and one sphere geom for the foot at (0, 0, -leg_length). Anything else is
/// rejected with a ParseError carrying the offending line and column.
RobotModel parse_model(std::string_view text);
RobotModel load_model(const std::filesystem::path& path);

/// Writes a model back in the same subset; parse_model(serialize_model(m)) == m.
std::string serialize_model(const RobotModel& model);

/// Throws ValidationError if any structural invariant is broken.
void validate_model(const RobotModel& model);

struct ServoMapping {
  JointAngles angles;
  std::array<bool, kNumJoints> clamped_joint{};
  bool clamped = false;
};

/// phi_j = sign_j * (theta_servo(j) - 90 deg), clamped to the joint range.
ServoMapping servo_to_joint(const Posture& posture, const RobotModel& model);
Posture joint_to_servo(const JointAngles& angles, const RobotModel& model);
/// Clamps joint angles into their ranges.
JointAngles clamp_to_range(const JointAngles& angles, const RobotModel& model);

/// Foot positions in the body frame.
std::array<Vec3, kNumLegs> forward_kinematics(const JointAngles& angles, const RobotModel& model);

/// Bundled model path: $CHAIR_MODEL if set, else <data dir>/models/chair.chair.xml.
std::filesystem::path default_model_path();
/// Directory holding models/, gaits/ and configs/ ($CHAIRBOT_DATA_DIR, else the source tree).
std::filesystem::path data_dir();

}  // namespace chairbot
