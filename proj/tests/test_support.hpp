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

#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "chairbot/geom.hpp"
#include "chairbot/io.hpp"
#include "chairbot/model.hpp"

namespace chairbot::testing {

inline std::filesystem::path source_dir() { return CHAIRBOT_TEST_SOURCE_DIR; }
inline std::filesystem::path golden(const std::string& name) {
  return source_dir() / "tests" / "golden" / name;
}
inline std::string read_golden(const std::string& name) { return read_file(golden(name)); }

inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "chairbot_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline const RobotModel& bundled_model() {
  static const RobotModel model = load_model(source_dir() / "models" / "chair.chair.xml");
  return model;
}

// One line per part; pinned by the model_summary.txt golden.
inline std::string model_summary(const RobotModel& m) {
  std::ostringstream s;
  s.precision(6);
  s << "seat " << m.seat_half_extents.x << ' ' << m.seat_half_extents.y << ' '
    << m.seat_half_extents.z << " mass " << m.seat_mass << '\n';
  s << "backrest " << m.backrest_center.x << ' ' << m.backrest_center.z << " mass "
    << m.backrest_mass << '\n';
  for (const HipSpec& h : m.hips) {
    s << "leg " << h.name << " at " << h.position.x << ' ' << h.position.y << " axes " << h.axis1.x
      << ' ' << h.axis1.y << ' ' << h.axis1.z << " / " << h.axis2.x << ' ' << h.axis2.y << ' '
      << h.axis2.z << " joints " << h.joints[0] << ' ' << h.joints[1] << '\n';
  }
  s << "total mass " << m.total_mass() << '\n';
  return s.str();
}

inline Quat random_unit_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Quat q{n(rng), n(rng), n(rng), n(rng)};
    if (q.norm() > 1e-3) return q.normalized();
  }
}

inline Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace chairbot::testing
