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

#include <cstddef>
#include <string>

#include "chairbot/geom.hpp"
#include "chairbot/model.hpp"

namespace chairbot::cli {

/// Time of control cycle k, in seconds.
inline double cycle_time(std::size_t k) { return static_cast<double>(k) / 10.0; }

/// "CMD <t> <theta0> ... <theta5>" with t to 1 decimal and angles to 2.
std::string cmd_line(double t, const Posture& posture);
/// "IMU <t> <qx> <qy> <qz> <qw>" with t to 1 decimal and components to 6.
std::string imu_line(double t, const Quat& q);

}  // namespace chairbot::cli
