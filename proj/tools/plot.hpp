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

#include <string>
#include <utility>

#include "trajectory.hpp"

namespace chairbot::cli {

/// Axis limits for a series: 5% padding, or +-1 around a constant value.
std::pair<double, double> auto_range(double lo, double hi);

/// Standalone SVG with three stacked panels over t: (x, y), (roll, pitch,
/// yaw) and theta0 .. theta5. Throws ParseError if the table has no rows or
/// a value does not parse.
std::string render_plot(const CsvTable& table);

}  // namespace chairbot::cli
