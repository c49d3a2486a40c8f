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

#include "chairbot/physics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "chairbot/error.hpp"
#include "chairbot/format.hpp"
#include "chairbot/parallel.hpp"

namespace chairbot {

namespace {

Mat3 box_inertia(double mass, const Vec3& half) {
  const double a = 2.0 * half.x, b = 2.0 * half.y, c = 2.0 * half.z;
  return Mat3::diagonal(mass * (b * b + c * c) / 12.0, mass * (a * a + c * c) / 12.0,
                        mass * (a * a + b * b) / 12.0);
}

bool finite(const RobotState& s) {
  if (!s.p.finite() || !s.q.finite() || !s.v.finite() || !s.w.finite()) return false;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (!std::isfinite(s.phi[j]) || !std::isfinite(s.servo_rate[j])) return false;
  }
  return true;
}

constexpr double kDropClearance = 0.005;
constexpr double kSettleMinTime = 0.5;
constexpr double kSettleMaxTime = 2.0;
constexpr double kSettleEnergy = 1e-6;

}  // namespace

void validate_config(const PhysicsConfig& c) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!(c.gravity >= 0.0) || !std::isfinite(c.gravity)) {
    throw ValidationError("gravity must be non-negative");
  }
  if (std::abs(c.dt - 0.1) > 1e-12) throw ValidationError("control period dt is fixed at 0.1 s");
  if (c.substeps <= 0) throw ValidationError("substeps must be positive");
  if (!positive(c.contact_stiffness) || !positive(c.contact_damping) || !positive(c.friction) ||
      !positive(c.friction_velocity_eps) || !positive(c.servo_rate_limit)) {
    throw ValidationError("physics constants must be positive");
  }
  if (!(c.servo_deadband_deg >= 0.0)) throw ValidationError("servo dead-band must be >= 0");
}

PhysicsConfig physics_config_from(const ConfigFile& file) {
  file.require_known({"gravity", "dt", "substeps", "contact_stiffness", "contact_damping",
                      "friction", "friction_velocity_eps", "servo_rate_limit",
                      "servo_deadband_deg", "contacts_enabled"});
  PhysicsConfig c;
  c.gravity = file.get_double("gravity", c.gravity);
  c.dt = file.get_double("dt", c.dt);
  c.substeps = static_cast<int>(file.get_int("substeps", c.substeps));
  c.contact_stiffness = file.get_double("contact_stiffness", c.contact_stiffness);
  c.contact_damping = file.get_double("contact_damping", c.contact_damping);
  c.friction = file.get_double("friction", c.friction);
  c.friction_velocity_eps = file.get_double("friction_velocity_eps", c.friction_velocity_eps);
  c.servo_rate_limit = file.get_double("servo_rate_limit", c.servo_rate_limit);
  c.servo_deadband_deg = file.get_double("servo_deadband_deg", c.servo_deadband_deg);
  c.contacts_enabled = file.get_bool("contacts_enabled", c.contacts_enabled);
  validate_config(c);
  return c;
}

ConfigFile to_config_file(const PhysicsConfig& c) {
  ConfigFile f;
  f.set("gravity", c.gravity);
  f.set("dt", c.dt);
  f.set("substeps", std::to_string(c.substeps));
  f.set("contact_stiffness", c.contact_stiffness);
  f.set("contact_damping", c.contact_damping);
  f.set("friction", c.friction);
  f.set("friction_velocity_eps", c.friction_velocity_eps);
  f.set("servo_rate_limit", c.servo_rate_limit);
  f.set("servo_deadband_deg", c.servo_deadband_deg);
  f.set("contacts_enabled", std::string(c.contacts_enabled ? "true" : "false"));
  return f;
}

PhysicsConfig load_physics_config(const std::filesystem::path& path) {
  return physics_config_from(ConfigFile::load(path));
}

std::size_t ContactSet::foot_contacts() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.begin() + kFirstSeatCorner,
                                                [](const ContactPoint& c) { return c.in_contact; }));
}

std::size_t ContactSet::seat_corner_contacts() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin() + kFirstSeatCorner, points.begin() + kFirstBackrestPoint,
                    [](const ContactPoint& c) { return c.in_contact; }));
}

std::size_t ContactSet::total_contacts() const {
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [](const ContactPoint& c) { return c.in_contact; }));
}

std::string_view to_string(InitialPose pose) {
  switch (pose) {
    case InitialPose::kStanding: return "standing";
    case InitialPose::kRightSide: return "right_side";
    case InitialPose::kLeftSide: return "left_side";
    case InitialPose::kBack: return "back";
  }
  return "unknown";
}

InitialPose initial_pose_from_string(std::string_view name) {
  if (name == "standing") return InitialPose::kStanding;
  if (name == "right_side" || name == "right") return InitialPose::kRightSide;
  if (name == "left_side" || name == "left") return InitialPose::kLeftSide;
  if (name == "back") return InitialPose::kBack;
  throw ParseError("unknown initial pose '" + std::string(name) +
                   "' (expected standing, right_side, left_side or back)");
}

// Body-frame mass distribution for one set of joint angles and rates.
struct Simulator::Frame {
  std::array<Vec3, kNumContactPoints> points;      // body-frame contact points
  std::array<Vec3, kNumContactPoints> point_rate;  // their body-frame velocities
  Vec3 com;       // composite center of mass, body frame
  Vec3 com_rate;  // its body-frame velocity
  Mat3 inertia;   // about com, body frame
  Vec3 relative_momentum;  // angular momentum of leg motion about com, body frame
};

Simulator::Simulator(RobotModel model, PhysicsConfig config)
    : model_(std::move(model)), config_(config) {
  validate_model(model_);
  validate_config(config_);
  total_mass_ = model_.total_mass();
  seat_inertia_ = box_inertia(model_.seat_mass, model_.seat_half_extents);
  backrest_inertia_ = box_inertia(model_.backrest_mass, model_.backrest_half_extents);
  const auto corners = model_.seat_corners();
  const auto back = model_.backrest_points();
  for (std::size_t i = 0; i < corners.size(); ++i) fixed_points_[kFirstSeatCorner + i] = corners[i];
  for (std::size_t i = 0; i < back.size(); ++i) fixed_points_[kFirstBackrestPoint + i] = back[i];
}

Simulator::Frame Simulator::make_frame(const RobotState& state) const {
  Frame f;
  f.points = fixed_points_;
  const double mf = model_.foot_mass;
  Vec3 foot_sum, foot_rate_sum;
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    const HipSpec& hip = model_.hips[i];
    const auto ja = static_cast<std::size_t>(hip.joints[0]);
    const auto jb = static_cast<std::size_t>(hip.joints[1]);
    const RotMatrix outer = axis_angle_matrix(hip.axis1, state.phi[ja]);
    const RotMatrix inner = axis_angle_matrix(hip.axis2, state.phi[jb]);
    const Vec3 leg_inner = inner * Vec3{0.0, 0.0, -hip.leg_length};
    const Vec3 leg = outer * leg_inner;
    // d/dt R1 R2 d = phi_a' (a1 x R1 R2 d) + phi_b' R1 (a2 x R2 d)
    const Vec3 rate = state.servo_rate[ja] * cross(hip.axis1, leg) +
                      state.servo_rate[jb] * (outer * cross(hip.axis2, leg_inner));
    f.points[i] = hip.position + leg;
    f.point_rate[i] = rate;
    foot_sum += f.points[i];
    foot_rate_sum += rate;
  }
  const double m = total_mass_;
  f.com = (model_.backrest_mass * model_.backrest_center + mf * foot_sum) / m;
  f.com_rate = (mf * foot_rate_sum) / m;

  f.inertia = seat_inertia_;
  f.inertia += point_inertia(model_.seat_mass, -f.com);
  f.inertia += backrest_inertia_;
  f.inertia += point_inertia(model_.backrest_mass, model_.backrest_center - f.com);
  f.relative_momentum = {};
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    const Vec3 r = f.points[i] - f.com;
    f.inertia += point_inertia(mf, r);
    f.relative_momentum += mf * cross(r, f.point_rate[i] - f.com_rate);
  }
  return f;
}

JointAngles Simulator::servo_target(const RobotState& state, const Posture& command) const {
  JointAngles target = servo_to_joint(command, model_).angles;
  const double half_band = 0.5 * config_.servo_deadband_deg * kDegToRad;
  if (half_band > 0.0) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const double err = target[j] - state.phi[j];
      if (std::abs(err) <= half_band) {
        target[j] = state.phi[j];
      } else {
        target[j] -= std::copysign(half_band, err);
      }
    }
  }
  return target;
}

namespace {

constexpr int kMidpointIterations = 3;

struct Wrench {
  Vec3 force;
  Vec3 torque;  // about the composite center of mass
};

}  // namespace

RobotState Simulator::step(const RobotState& input, const Posture& command) const {
  RobotState s = input;
  const JointAngles target = servo_target(s, command);
  const JointAngles start = s.phi;
  const int n = config_.substeps;
  const double h = config_.dt / n;
  const double max_delta = config_.servo_rate_limit * h;
  const double m = total_mass_;
  const Vec3 gravity{0.0, 0.0, -config_.gravity * m};

  Frame frame = make_frame(s);
  RotMatrix rot = to_rotation_matrix(s.q);

  // External wrench at the current pose and velocities.
  auto wrench = [&](const RobotState& st, const Frame& fr, const RotMatrix& r,
                    bool record_contacts) {
    Wrench out{gravity, {}};
    const Vec3 com_world = r * fr.com;
    for (std::size_t k = 0; k < kNumContactPoints; ++k) {
      const Vec3 arm = r * fr.points[k];
      const Vec3 x = st.p + arm;
      const bool touching = config_.contacts_enabled && x.z < 0.0;
      if (record_contacts) s.contact[k] = touching;
      if (!touching) continue;
      const Vec3 xd = st.v + cross(st.w, arm) + r * fr.point_rate[k];
      const double normal = config_.contact_stiffness * (-x.z) - config_.contact_damping * xd.z;
      if (normal <= 0.0) continue;
      Vec3 f{0.0, 0.0, normal};
      const double speed = std::hypot(xd.x, xd.y);
      if (speed > 0.0) {
        const double mag =
            config_.friction * normal * std::tanh(speed / config_.friction_velocity_eps) / speed;
        f.x = -mag * xd.x;
        f.y = -mag * xd.y;
      }
      out.force += f;
      out.torque += cross(arm - com_world, f);
    }
    return out;
  };

  // Composite momenta about the center of mass.
  Vec3 com_arm = rot * frame.com;
  Vec3 com_pos = s.p + com_arm;
  Vec3 com_vel = s.v + cross(s.w, com_arm) + rot * frame.com_rate;
  Vec3 ang_mom = rot * (frame.inertia * (rot.transposed() * s.w) + frame.relative_momentum);

  // Velocity Verlet: half kick, then drift/kick substeps, closing with a half kick.
  Wrench load = wrench(s, frame, rot, false);
  com_vel += (0.5 * h / m) * load.force;
  ang_mom += (0.5 * h) * load.torque;

  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const double delta = std::clamp(target[j] - s.phi[j], -max_delta, max_delta);
      const double next = (std::abs(target[j] - s.phi[j]) <= max_delta) ? target[j]
                                                                        : s.phi[j] + delta;
      s.servo_rate[j] = (next - s.phi[j]) / h;
      s.phi[j] = next;
    }
    frame = make_frame(s);
    const Mat3 inv_inertia = frame.inertia.inverse();
    auto omega_at = [&](const Quat& q) {
      const RotMatrix r = to_rotation_matrix(q);
      return r * (inv_inertia * (r.transposed() * ang_mom - frame.relative_momentum));
    };
    // Implicit midpoint rotation, solved by fixed-point iteration.
    Vec3 w_mid = omega_at(s.q);
    for (int it = 0; it < kMidpointIterations; ++it) {
      w_mid = omega_at(integrate_attitude(s.q, w_mid, 0.5 * h));
    }
    s.q = integrate_attitude(s.q, w_mid, h);
    rot = to_rotation_matrix(s.q);
    s.w = rot * (inv_inertia * (rot.transposed() * ang_mom - frame.relative_momentum));
    com_pos += h * com_vel;
    com_arm = rot * frame.com;
    s.p = com_pos - com_arm;
    s.v = com_vel - cross(s.w, com_arm) - rot * frame.com_rate;

    load = wrench(s, frame, rot, i == n - 1);
    const double kick = (i == n - 1) ? 0.5 * h : h;
    com_vel += (kick / m) * load.force;
    ang_mom += kick * load.torque;

    if (!finite(s) || !com_vel.finite() || !ang_mom.finite()) {
      throw PhysicsError("non-finite state at substep " + std::to_string(i));
    }
  }

  // Convert the closing momenta back to body velocities.
  const Vec3 body_mom = rot.transposed() * ang_mom - frame.relative_momentum;
  s.w = rot * (frame.inertia.inverse() * body_mom);
  s.v = com_vel - cross(s.w, com_arm) - rot * frame.com_rate;
  if (!finite(s)) throw PhysicsError("non-finite state at substep " + std::to_string(n - 1));

  for (std::size_t j = 0; j < kNumJoints; ++j) {
    s.phi_rate[j] = (s.phi[j] - start[j]) / config_.dt;
  }
  s.time += config_.dt;
  return s;
}

RobotState Simulator::place(InitialPose pose, double clearance) const {
  RobotState s;
  switch (pose) {
    case InitialPose::kStanding: s.q = Quat{}; break;
    case InitialPose::kRightSide: s.q = rpy_to_quat({90.0, 0.0, 0.0}); break;
    case InitialPose::kLeftSide: s.q = rpy_to_quat({-90.0, 0.0, 0.0}); break;
    case InitialPose::kBack: s.q = rpy_to_quat({0.0, -90.0, 0.0}); break;
  }
  s.phi = servo_to_joint(kStandingPosture, model_).angles;
  const Frame frame = make_frame(s);
  const RotMatrix rot = to_rotation_matrix(s.q);
  double lowest = 0.0;
  bool first = true;
  for (const Vec3& point : frame.points) {
    const double z = (rot * point).z;
    lowest = first ? z : std::min(lowest, z);
    first = false;
  }
  s.p = {0.0, 0.0, clearance - lowest};
  return s;
}

RobotState Simulator::reset_to(InitialPose pose) const {
  RobotState s = place(pose, kDropClearance);
  const double eps = 1e-9;
  while (true) {
    s = step(s, kStandingPosture);
    if (s.time + eps >= kSettleMinTime && kinetic_energy(s) < kSettleEnergy) break;
    if (s.time + eps >= kSettleMaxTime) {
      throw PhysicsError("pose '" + std::string(to_string(pose)) + "' did not settle within 2 s");
    }
  }
  s.time = 0.0;
  s.phi_rate = {};
  return s;
}

RobotState Simulator::reset_to(const RobotState& state) const {
  RobotState s = state;
  s.q = s.q.normalized();
  s.phi = clamp_to_range(s.phi, model_);
  if (!finite(s)) throw PhysicsError("reset state is not finite");
  return s;
}

ContactSet Simulator::query_contacts(const RobotState& state) const {
  ContactSet out;
  const Frame frame = make_frame(state);
  const RotMatrix rot = to_rotation_matrix(state.q);
  for (std::size_t k = 0; k < kNumContactPoints; ++k) {
    ContactPoint& c = out.points[k];
    const Vec3 arm = rot * frame.points[k];
    c.position = state.p + arm;
    if (!config_.contacts_enabled || c.position.z >= 0.0) continue;
    c.in_contact = true;
    c.penetration = -c.position.z;
    const Vec3 xd = state.v + cross(state.w, arm) + rot * frame.point_rate[k];
    c.normal_force =
        std::max(0.0, config_.contact_stiffness * c.penetration - config_.contact_damping * xd.z);
  }
  return out;
}

Vec3 Simulator::center_of_mass(const RobotState& state) const {
  return state.p + to_rotation_matrix(state.q) * make_frame(state).com;
}

Vec3 Simulator::linear_momentum(const RobotState& state) const {
  const Frame frame = make_frame(state);
  const RotMatrix rot = to_rotation_matrix(state.q);
  const Vec3 arm = rot * frame.com;
  return total_mass_ * (state.v + cross(state.w, arm) + rot * frame.com_rate);
}

double Simulator::kinetic_energy(const RobotState& state) const {
  const Frame frame = make_frame(state);
  const RotMatrix rot = to_rotation_matrix(state.q);
  const Vec3 wb = rot.transposed() * state.w;
  double ke = 0.5 * model_.seat_mass * state.v.squared_norm() + 0.5 * dot(wb, seat_inertia_ * wb);
  const Vec3 vb = state.v + cross(state.w, rot * model_.backrest_center);
  ke += 0.5 * model_.backrest_mass * vb.squared_norm() + 0.5 * dot(wb, backrest_inertia_ * wb);
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    const Vec3 vf = state.v + cross(state.w, rot * frame.points[i]) + rot * frame.point_rate[i];
    ke += 0.5 * model_.foot_mass * vf.squared_norm();
  }
  return ke;
}

double Simulator::potential_energy(const RobotState& state) const {
  return total_mass_ * config_.gravity * center_of_mass(state).z;
}

void Simulator::step_batch(std::span<RobotState> states, std::span<const Posture> commands,
                           std::size_t threads) const {
  if (states.size() != commands.size()) {
    throw ValidationError("step_batch: states and commands differ in length");
  }
  parallel_for(states.size(), threads, [&](std::size_t i) { states[i] = step(states[i], commands[i]); });
}

RobotState reset_to(InitialPose pose, const RobotModel& model, const PhysicsConfig& config) {
  return Simulator(model, config).reset_to(pose);
}

RobotState step(const RobotState& state, const Posture& command, const RobotModel& model,
                const PhysicsConfig& config) {
  return Simulator(model, config).step(state, command);
}

ContactSet query_contacts(const RobotState& state, const RobotModel& model,
                          const PhysicsConfig& config) {
  return Simulator(model, config).query_contacts(state);
}

}  // namespace chairbot
