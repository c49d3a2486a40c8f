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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "chairbot/error.hpp"
#include "chairbot/io.hpp"
#include "plot.hpp"
#include "test_support.hpp"
#include "trajectory.hpp"
#include "wire.hpp"

namespace chairbot::cli {
namespace {

namespace fs = std::filesystem;
using chairbot::testing::scratch;
using chairbot::testing::source_dir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string gait(const std::string& name) { return (source_dir() / "gaits" / name).string(); }

TEST(Cli, NoCommandIsUsageError) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"dance"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(Cli, GaitWritesTrajectory) {
  const auto out = scratch("walk.csv");
  const Outcome r = invoke({"gait", "--script", gait("walk.gait"), "--seconds", "10", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(read_file(out));
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows[0], kTrajectoryHeader);
  EXPECT_EQ(rows[0] + "\n", chairbot::testing::read_golden("trajectory_header.csv"));
  EXPECT_EQ(rows[1].substr(0, 4), "0.1,");
  EXPECT_EQ(rows[100].substr(0, 5), "10.0,");
  EXPECT_NE(r.out.find("reset triggers 0"), std::string::npos);
}

TEST(Cli, StandupGaitRunsOnePass) {
  const auto out = scratch("standup.csv");
  const Outcome r =
      invoke({"gait", "--script", gait("standup.gait"), "--pose", "right_side", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(lines(read_file(out)).size(), 80u);
  EXPECT_NE(r.out.find("79 commands"), std::string::npos);
}

TEST(Cli, MissingScriptNamesThePath) {
  const Outcome r = invoke({"gait", "--script", "/nonexistent/walk.gait", "--out", scratch("x.csv").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("/nonexistent/walk.gait"), std::string::npos);
}

TEST(Cli, MalformedScriptIsUsageError) {
  const auto bad = scratch("bad.gait");
  write_file_atomic(bad, "loop true\nposture 1 2 3\n");
  const Outcome r = invoke({"gait", "--script", bad.string(), "--out", scratch("x.csv").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, UnknownTaskIsUsageError) {
  EXPECT_EQ(invoke({"train", "--task", "other", "--out", scratch("p").string()}).code, kExitUsage);
}

TEST(Cli, SerialDumpFirstLineIsPinned) {
  const auto out = scratch("walk.cmd");
  const Outcome r = invoke({"serial-dump", "--script", gait("walk.gait"), "--out", out.string(), "--cycles", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(read_file(out));
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows[0], "CMD 0.0 90.00 80.00 90.00 100.00 90.00 100.00");
  EXPECT_EQ(rows[1], "CMD 0.1 90.00 80.00 90.00 100.00 90.00 140.00");
  EXPECT_EQ(rows[4], "CMD 0.4 72.86 80.00 107.14 100.00 90.00 134.29");
}

TEST(Cli, SerialDumpNeedsExactlyOneSource) {
  EXPECT_EQ(invoke({"serial-dump", "--out", scratch("x").string()}).code, kExitUsage);
}

TEST(Cli, TrainEvalPlotPipeline) {
  const auto policy = scratch("cli.policy");
  const auto curve = scratch("cli.curve.csv");
  const auto cfg = scratch("tiny_train.cfg");
  write_file_atomic(cfg, "horizon = 8\nhidden = 8\n");
  Outcome r = invoke({"train", "--task", "walk", "--envs", "4", "--epochs", "2", "--seed", "3", "--out",
                      policy.string(), "--curve", curve.string(), "--train-config", cfg.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(policy));
  EXPECT_EQ(lines(read_file(curve)).size(), 3u);

  const auto traj = scratch("cli_eval.csv");
  r = invoke({"eval", "--policy", policy.string(), "--task", "standup", "--episodes", "1", "--out",
              traj.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("walk"), std::string::npos);
  EXPECT_NE(r.out.find("warning"), std::string::npos);
  EXPECT_EQ(lines(read_file(traj))[0], kTrajectoryHeader);

  const auto svg = scratch("cli_eval.svg");
  r = invoke({"plot", "--in", traj.string(), "--out", svg.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string text = read_file(svg);
  EXPECT_EQ(text.rfind("<svg", 0) == 0 || text.rfind("<?xml", 0) == 0, true);
  EXPECT_NE(text.find("</svg>"), std::string::npos);

  const auto dump = scratch("policy.cmd");
  r = invoke({"serial-dump", "--policy", policy.string(), "--steps", "5", "--out", dump.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto dumped = lines(read_file(dump));
  // Each command follows the reading it was computed from; a final reading closes the run.
  ASSERT_EQ(dumped.size(), 11u);
  EXPECT_EQ(dumped[0].rfind("IMU 0.0 ", 0), 0u);
  EXPECT_EQ(dumped[1].rfind("CMD 0.0 ", 0), 0u);
  EXPECT_EQ(dumped[10].rfind("IMU 0.5 ", 0), 0u);
}

TEST(Cli, PlotRejectsEmptyTrajectory) {
  const auto empty = scratch("empty.csv");
  write_file_atomic(empty, std::string(kTrajectoryHeader) + "\n");
  const Outcome r = invoke({"plot", "--in", empty.string(), "--out", scratch("e.svg").string()});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_NE(r.err.find("no data rows"), std::string::npos);
}

TEST(Trajectory, RowFormatting) {
  RobotState s;
  s.p = {0.1234567, -0.5, 0.08};
  s.q = rpy_to_quat({10, -20, 30});
  const TrajectoryRow row = make_row(1.25, s, kStandingPosture, 2.5, ResetReason::kTilt);
  EXPECT_EQ(format_row(row),
            "1.2,0.123457,-0.500000,0.080000,10.0000,-20.0000,30.0000,90.00,80.00,90.00,100.00,90.00,100.00,2.5,tilt");
  const TrajectoryRow scripted = make_row(0.0, s, kStandingPosture, std::nullopt, ResetReason::kNone);
  const std::string text = format_row(scripted);
  EXPECT_EQ(text.substr(text.size() - 6), ",,none");
}

TEST(Trajectory, CsvParsingChecksColumns) {
  const CsvTable t = parse_csv("a,b,c\n1,2,3\n4,5,6\n", {"a", "c"});
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][t.column("c")], "6");
  try {
    parse_csv("a,b\n1,2\n", {"a", "x", "y"});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("x, y"), std::string::npos);
  }
}

TEST(Plot, AutoRange) {
  const auto flat = auto_range(2.0, 2.0);
  EXPECT_DOUBLE_EQ(flat.first, 1.0);
  EXPECT_DOUBLE_EQ(flat.second, 3.0);
  const auto padded = auto_range(0.0, 10.0);
  EXPECT_DOUBLE_EQ(padded.first, -0.5);
  EXPECT_DOUBLE_EQ(padded.second, 10.5);
}

TEST(Plot, ThreePanels) {
  std::string csv = std::string(kTrajectoryHeader) + "\n";
  csv += "0.0,0,0,0.08,0,0,0,90,80,90,100,90,100,,none\n";
  csv += "0.1,0.01,0,0.08,1,2,3,90,80,90,100,90,140,,none\n";
  const std::string svg = render_plot(parse_csv(csv, {"t"}));
  std::size_t panels = 0;
  for (std::size_t pos = 0; (pos = svg.find("class=\"panel\"", pos)) != std::string::npos; ++pos) ++panels;
  EXPECT_EQ(panels, 3u);
}

TEST(Wire, CommandLine) {
  EXPECT_EQ(cmd_line(0, kStandingPosture), "CMD 0.0 90.00 80.00 90.00 100.00 90.00 100.00");
  EXPECT_DOUBLE_EQ(cycle_time(13), 1.3);
}

}  // namespace
}  // namespace chairbot::cli
