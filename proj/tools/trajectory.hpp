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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chairbot/env.hpp"
#include "chairbot/model.hpp"
#include "chairbot/physics.hpp"

namespace chairbot::cli {

/// One logged control step.
struct TrajectoryRow {
  double t = 0.0;  // s
  double x = 0.0, y = 0.0, z = 0.0;  // m
  double roll = 0.0, pitch = 0.0, yaw = 0.0;  // deg
  Posture command;
  std::optional<double> reward;  // empty for scripted runs
  ResetReason reset = ResetReason::kNone;
};

TrajectoryRow make_row(double t, const RobotState& state, const Posture& command,
                       std::optional<double> reward, ResetReason reset);

inline constexpr std::string_view kTrajectoryHeader =
    "t,x,y,z,roll,pitch,yaw,theta0,theta1,theta2,theta3,theta4,theta5,reward,reset";

std::string format_row(const TrajectoryRow& row);
std::string format_trajectory(const std::vector<TrajectoryRow>& rows);

/// Header-checked CSV table. Throws ParseError listing missing columns.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::vector<std::string_view>& required);

}  // namespace chairbot::cli
