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

#include "chairbot/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "chairbot/error.hpp"
#include "chairbot/format.hpp"
#include "chairbot/xml.hpp"

#ifndef CHAIRBOT_SOURCE_DATA_DIR
#define CHAIRBOT_SOURCE_DATA_DIR "."
#endif

namespace chairbot {

namespace {

constexpr double kAxisTolerance = 1e-6;
// Mechanical limit of the hobby servo around its center.
constexpr double kServoTravelDeg = 90.0;

[[noreturn]] void fail_at(const xml::Element& el, const std::string& what) {
  throw ParseError(what, el.line, el.column);
}

void check_attributes(const xml::Element& el, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : el.attributes) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail_at(el, "unknown attribute '" + key + "' on <" + el.name + ">");
    }
  }
}

std::vector<double> numbers(const xml::Element& el, std::string_view key, std::size_t count) {
  const auto text = el.attribute(key);
  if (!text) fail_at(el, "<" + el.name + "> is missing attribute '" + std::string(key) + "'");
  std::vector<double> out;
  std::istringstream in{std::string(*text)};
  std::string token;
  while (in >> token) {
    try {
      out.push_back(parse_double(token));
    } catch (const ParseError& e) {
      fail_at(el, e.what());
    }
  }
  if (out.size() != count) {
    fail_at(el, "attribute '" + std::string(key) + "' expects " + std::to_string(count) +
                    " numbers, got " + std::to_string(out.size()));
  }
  return out;
}

Vec3 vec_attr(const xml::Element& el, std::string_view key, Vec3 fallback) {
  if (!el.attribute(key)) return fallback;
  const auto v = numbers(el, key, 3);
  return {v[0], v[1], v[2]};
}

double scalar_attr(const xml::Element& el, std::string_view key, double fallback) {
  if (!el.attribute(key)) return fallback;
  return numbers(el, key, 1)[0];
}

std::string string_attr(const xml::Element& el, std::string_view key) {
  const auto v = el.attribute(key);
  return v ? std::string(*v) : std::string();
}

void parse_leg(const xml::Element& leg, RobotModel& model, std::size_t leg_index,
               std::vector<JointSpec>& joints) {
  check_attributes(leg, {"name", "pos"});
  HipSpec hip;
  hip.name = string_attr(leg, "name");
  hip.position = vec_attr(leg, "pos", {});
  std::vector<Vec3> axes;
  bool have_foot = false;
  for (const xml::Element& child : leg.children) {
    if (child.name == "joint") {
      check_attributes(child, {"name", "type", "axis", "range", "servo", "sign"});
      if (string_attr(child, "type") != "hinge") fail_at(child, "only hinge joints are supported");
      JointSpec joint;
      joint.name = string_attr(child, "name");
      const auto range = numbers(child, "range", 2);
      joint.min_deg = range[0];
      joint.max_deg = range[1];
      joint.servo = child.attribute("servo")
                        ? static_cast<int>(scalar_attr(child, "servo", 0))
                        : static_cast<int>(joints.size());
      joint.sign = static_cast<int>(scalar_attr(child, "sign", 1));
      if (joint.sign != 1 && joint.sign != -1) fail_at(child, "joint sign must be 1 or -1");
      axes.push_back(vec_attr(child, "axis", kUnitZ));
      if (axes.size() <= 2) {
        hip.joints[axes.size() - 1] = static_cast<int>(joints.size());
      }
      joints.push_back(joint);
    } else if (child.name == "geom") {
      check_attributes(child, {"name", "type", "pos", "size", "mass"});
      if (string_attr(child, "type") != "sphere") fail_at(child, "leg geoms must be spheres");
      if (have_foot) fail_at(child, "a leg has exactly one foot geom");
      have_foot = true;
      const Vec3 foot = vec_attr(child, "pos", {});
      if (foot.x != 0.0 || foot.y != 0.0 || !(foot.z < 0.0)) {
        fail_at(child, "foot must sit at (0, 0, -leg_length)");
      }
      hip.leg_length = -foot.z;
      model.foot_radius = numbers(child, "size", 1)[0];
      const double mass = numbers(child, "mass", 1)[0];
      if (leg_index > 0 && mass != model.foot_mass) fail_at(child, "all feet must share one mass");
      model.foot_mass = mass;
    } else {
      fail_at(child, "unexpected <" + child.name + "> inside a leg body");
    }
  }
  // Fewer than two joints surfaces later as a total joint-count error.
  if (axes.size() > 2) {
    throw ValidationError("leg '" + hip.name + "' has " + std::to_string(axes.size()) +
                          " joints; a gimbal leg has 2");
  }
  if (!have_foot) fail_at(leg, "leg '" + hip.name + "' has no foot geom");
  if (leg_index < kNumLegs) {
    hip.axis1 = axes.size() > 0 ? axes[0] : Vec3{};
    hip.axis2 = axes.size() > 1 ? axes[1] : Vec3{};
    model.hips[leg_index] = hip;
  }
}

}  // namespace

std::array<Vec3, kNumSeatCorners> RobotModel::seat_corners() const {
  const Vec3& h = seat_half_extents;
  return {{{h.x, h.y, -h.z}, {h.x, -h.y, -h.z}, {-h.x, -h.y, -h.z}, {-h.x, h.y, -h.z}}};
}

std::array<Vec3, 2> RobotModel::backrest_points() const {
  const Vec3& c = backrest_center;
  const Vec3& h = backrest_half_extents;
  return {{{c.x, c.y + h.y, c.z + h.z}, {c.x, c.y - h.y, c.z + h.z}}};
}

RobotModel parse_model(std::string_view text) {
  const xml::Element root = xml::parse(text);
  if (root.name != "mujoco") fail_at(root, "root element must be <mujoco>");
  check_attributes(root, {"model"});

  RobotModel model;
  model.name = root.attribute("model") ? std::string(*root.attribute("model")) : "chair";
  model.backrest_mass = 0.0;

  const xml::Element* world = nullptr;
  for (const auto& child : root.children) {
    if (child.name != "worldbody") fail_at(child, "unexpected <" + child.name + "> in <mujoco>");
    if (world) fail_at(child, "duplicate <worldbody>");
    world = &child;
  }
  if (!world) fail_at(root, "missing <worldbody>");
  check_attributes(*world, {});
  if (world->children.size() != 1 || world->children[0].name != "body") {
    fail_at(*world, "<worldbody> must contain exactly one seat <body>");
  }
  const xml::Element& seat = world->children[0];
  check_attributes(seat, {"name", "pos"});

  bool have_seat = false;
  std::size_t leg_count = 0;
  std::vector<JointSpec> joints;
  for (const xml::Element& child : seat.children) {
    if (child.name == "geom") {
      check_attributes(child, {"name", "type", "pos", "size", "mass"});
      if (string_attr(child, "type") != "box") fail_at(child, "seat geoms must be boxes");
      const std::string name = string_attr(child, "name");
      const auto size = numbers(child, "size", 3);
      const double mass = numbers(child, "mass", 1)[0];
      if (name == "seat") {
        if (have_seat) fail_at(child, "duplicate seat geom");
        have_seat = true;
        if (vec_attr(child, "pos", {}) != Vec3{}) fail_at(child, "seat geom must be centered");
        model.seat_half_extents = {size[0], size[1], size[2]};
        model.seat_mass = mass;
      } else if (name == "backrest") {
        model.backrest_center = vec_attr(child, "pos", {});
        model.backrest_half_extents = {size[0], size[1], size[2]};
        model.backrest_mass = mass;
      } else {
        fail_at(child, "unknown seat geom '" + name + "'");
      }
    } else if (child.name == "body") {
      parse_leg(child, model, leg_count, joints);
      ++leg_count;
    } else {
      fail_at(child, "unexpected <" + child.name + "> in the seat body");
    }
  }
  if (!have_seat) fail_at(seat, "missing seat geom");
  if (joints.size() != kNumJoints) {
    throw ValidationError("expected 6 joints, found " + std::to_string(joints.size()));
  }
  if (leg_count != kNumLegs) {
    throw ValidationError("expected 3 legs, found " + std::to_string(leg_count));
  }
  std::copy(joints.begin(), joints.end(), model.joints.begin());
  validate_model(model);
  return model;
}

RobotModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

void validate_model(const RobotModel& model) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(model.seat_half_extents.x) || !positive(model.seat_half_extents.y) ||
      !(model.seat_half_extents.z >= 0.0)) {
    throw ValidationError("seat extents must be positive");
  }
  if (!positive(model.seat_mass)) throw ValidationError("seat mass must be positive");
  if (!(model.backrest_mass >= 0.0)) throw ValidationError("backrest mass must be non-negative");
  if (!positive(model.foot_mass)) throw ValidationError("foot mass must be positive");

  std::set<int> seen;
  for (const HipSpec& hip : model.hips) {
    if (!positive(hip.leg_length)) {
      throw ValidationError("leg '" + hip.name + "' must have positive length");
    }
    for (const Vec3& axis : {hip.axis1, hip.axis2}) {
      if (std::abs(axis.norm() - 1.0) > kAxisTolerance) {
        throw ValidationError("leg '" + hip.name + "' has a non-unit joint axis");
      }
    }
    if (std::abs(dot(hip.axis1, hip.axis2)) > kAxisTolerance) {
      throw ValidationError("leg '" + hip.name + "' gimbal axes are not perpendicular");
    }
    for (int j : hip.joints) {
      if (j < 0 || j >= static_cast<int>(kNumJoints) || !seen.insert(j).second) {
        throw ValidationError("joint indices must partition 0..5 across the legs");
      }
    }
  }
  std::set<int> servos;
  for (const JointSpec& joint : model.joints) {
    if (!(joint.min_deg < joint.max_deg) || joint.min_deg < -kServoTravelDeg ||
        joint.max_deg > kServoTravelDeg) {
      throw ValidationError("joint '" + joint.name + "' range exceeds the servo travel");
    }
    if (joint.servo < 0 || joint.servo >= static_cast<int>(kNumJoints) ||
        !servos.insert(joint.servo).second) {
      throw ValidationError("servo indices must be a permutation of 0..5");
    }
    if (joint.sign != 1 && joint.sign != -1) throw ValidationError("joint sign must be +-1");
  }
}

std::string serialize_model(const RobotModel& model) {
  auto vec = [](const Vec3& v) {
    return format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z);
  };
  xml::Element root{"mujoco", {{"model", model.name}}, {}};
  xml::Element world{"worldbody", {}, {}};
  xml::Element seat{"body", {{"name", "seat"}}, {}};
  seat.children.push_back({"geom",
                           {{"name", "seat"},
                            {"type", "box"},
                            {"size", vec(model.seat_half_extents)},
                            {"mass", format_double(model.seat_mass)}},
                           {}});
  if (model.backrest_mass > 0.0 || model.backrest_half_extents != Vec3{}) {
    seat.children.push_back({"geom",
                             {{"name", "backrest"},
                              {"type", "box"},
                              {"pos", vec(model.backrest_center)},
                              {"size", vec(model.backrest_half_extents)},
                              {"mass", format_double(model.backrest_mass)}},
                             {}});
  }
  for (const HipSpec& hip : model.hips) {
    xml::Element leg{"body", {{"name", hip.name}, {"pos", vec(hip.position)}}, {}};
    const Vec3 axes[2] = {hip.axis1, hip.axis2};
    for (std::size_t k = 0; k < 2; ++k) {
      const JointSpec& joint = model.joints[static_cast<std::size_t>(hip.joints[k])];
      leg.children.push_back(
          {"joint",
           {{"name", joint.name},
            {"type", "hinge"},
            {"axis", vec(axes[k])},
            {"range", format_double(joint.min_deg) + " " + format_double(joint.max_deg)},
            {"servo", std::to_string(joint.servo)},
            {"sign", std::to_string(joint.sign)}},
           {}});
    }
    leg.children.push_back({"geom",
                            {{"name", "foot_" + hip.name},
                             {"type", "sphere"},
                             {"pos", vec({0.0, 0.0, -hip.leg_length})},
                             {"size", format_double(model.foot_radius)},
                             {"mass", format_double(model.foot_mass)}},
                            {}});
    seat.children.push_back(std::move(leg));
  }
  world.children.push_back(std::move(seat));
  root.children.push_back(std::move(world));
  return xml::serialize(root);
}

ServoMapping servo_to_joint(const Posture& posture, const RobotModel& model) {
  ServoMapping out;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const JointSpec& spec = model.joints[j];
    const double theta = posture[static_cast<std::size_t>(spec.servo)];
    double offset = spec.sign * (theta - kServoCenterDeg);
    if (offset < spec.min_deg || offset > spec.max_deg || !std::isfinite(offset)) {
      offset = std::isfinite(offset) ? std::clamp(offset, spec.min_deg, spec.max_deg) : 0.0;
      out.clamped_joint[j] = true;
      out.clamped = true;
    }
    out.angles[j] = offset * kDegToRad;
  }
  return out;
}

Posture joint_to_servo(const JointAngles& angles, const RobotModel& model) {
  Posture out;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const JointSpec& spec = model.joints[j];
    out[static_cast<std::size_t>(spec.servo)] =
        kServoCenterDeg + spec.sign * (angles[j] * kRadToDeg);
  }
  return out;
}

JointAngles clamp_to_range(const JointAngles& angles, const RobotModel& model) {
  JointAngles out;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    out[j] = std::clamp(angles[j], model.joints[j].min_deg * kDegToRad,
                        model.joints[j].max_deg * kDegToRad);
  }
  return out;
}

std::array<Vec3, kNumLegs> forward_kinematics(const JointAngles& angles,
                                              const RobotModel& model) {
  std::array<Vec3, kNumLegs> feet;
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    const HipSpec& hip = model.hips[i];
    const RotMatrix outer =
        axis_angle_matrix(hip.axis1, angles[static_cast<std::size_t>(hip.joints[0])]);
    const RotMatrix inner =
        axis_angle_matrix(hip.axis2, angles[static_cast<std::size_t>(hip.joints[1])]);
    feet[i] = hip.position + outer * (inner * Vec3{0.0, 0.0, -hip.leg_length});
  }
  return feet;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("CHAIRBOT_DATA_DIR"); env && *env) return env;
  return CHAIRBOT_SOURCE_DATA_DIR;
}

std::filesystem::path default_model_path() {
  if (const char* env = std::getenv("CHAIR_MODEL"); env && *env) return env;
  return data_dir() / "models" / "chair.chair.xml";
}

}  // namespace chairbot
