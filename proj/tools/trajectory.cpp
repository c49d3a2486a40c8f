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

#include "trajectory.hpp"

#include <sstream>

#include "chairbot/error.hpp"
#include "chairbot/format.hpp"

namespace chairbot::cli {

TrajectoryRow make_row(double t, const RobotState& state, const Posture& command,
                       std::optional<double> reward, ResetReason reset) {
  const Rpy rpy = quat_to_rpy(state.q);
  return {t, state.p.x, state.p.y, state.p.z, rpy.roll, rpy.pitch, rpy.yaw, command, reward, reset};
}

std::string format_row(const TrajectoryRow& r) {
  std::string out = format_fixed(r.t, 1);
  for (double v : {r.x, r.y, r.z}) out += "," + format_fixed(v, 6);
  for (double v : {r.roll, r.pitch, r.yaw}) out += "," + format_fixed(v, 4);
  for (double v : r.command.deg) out += "," + format_fixed(v, 2);
  out += ",";
  if (r.reward) out += format_double(*r.reward);
  out += ",";
  out += to_string(r.reset);
  return out;
}

std::string format_trajectory(const std::vector<TrajectoryRow>& rows) {
  std::string out(kTrajectoryHeader);
  out += "\n";
  for (const TrajectoryRow& r : rows) out += format_row(r) + "\n";
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError("missing column '" + std::string(name) + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable parse_csv(std::string_view text, const std::vector<std::string_view>& required) {
  std::istringstream in{std::string(text)};
  std::string line;
  CsvTable table;
  if (!std::getline(in, line) || line.empty()) throw ParseError("CSV has no header");
  if (line.back() == '\r') line.pop_back();
  table.header = split(line);

  std::string missing;
  for (std::string_view name : required) {
    bool found = false;
    for (const auto& h : table.header) found = found || h == name;
    if (!found) missing += (missing.empty() ? "" : ", ") + std::string(name);
  }
  if (!missing.empty()) throw ParseError("CSV header is missing columns: " + missing, 1, 1);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ParseError("expected " + std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no, 1);
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace chairbot::cli
