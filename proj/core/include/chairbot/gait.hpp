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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chairbot/error.hpp"
#include "chairbot/model.hpp"

namespace chairbot {

// One posture command is issued per control cycle.
inline constexpr double kControlPeriod = 0.1;

struct Keyframe {
  Posture posture;
  // Interpolated postures inserted between this keyframe and the next.
  int steps_to_next = 0;

  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

/// Essential postures joined by linear interpolation. A looping script
/// restarts from its second keyframe after reaching the last one.
struct GaitScript {
  std::vector<Keyframe> keyframes;
  bool loop = false;

  friend bool operator==(const GaitScript&, const GaitScript&) = default;
};

struct Command {
  std::size_t cycle = 0;
  Posture posture;
};

struct CommandTrace {
  std::vector<Command> commands;

  std::size_t size() const { return commands.size(); }
  bool empty() const { return commands.empty(); }
  const Command& operator[](std::size_t i) const { return commands[i]; }
};

/// from, n interpolants, to: element k is from + k/(n+1) (to - from). The
/// endpoints are copied, never recomputed. Throws ValidationError if n < 0.
std::vector<Posture> interpolate_segment(const Posture& from, const Posture& to, int n);

/// Throws ValidationError unless the script has >= 2 finite keyframes and
/// non-negative step counts.
void validate_script(const GaitScript& script);

/// One pass from the first to the last keyframe, junctions emitted once.
/// Length is sum(steps_to_next + 1) + 1 over all transitions.
CommandTrace compile_script(const GaitScript& script);

/// Commands per repetition of a looping script: sum(steps_to_next + 1).
std::size_t loop_period(const GaitScript& script);

/// The first `count` commands of the script's playback. Looping scripts repeat
/// from the second keyframe; one-shot scripts stop after a single pass.
CommandTrace unroll_script(const GaitScript& script, std::size_t count);

/// Line format:
///   loop true|false
///   posture <t0> <t1> <t2> <t3> <t4> <t5>
///   steps <n>
///   posture ...
/// `posture` and `steps` alternate and the file ends with a posture. '#'
/// starts a comment line.
GaitScript parse_script(std::string_view text);
GaitScript load_script(const std::filesystem::path& path);
std::string serialize_script(const GaitScript& script);

/// Walking: standing, front foot forward, left-rear forward, right-rear
/// forward, then all legs back to standing over seven cycles.
GaitScript builtin_walk();
/// Stand-up from lying on the right side.
GaitScript builtin_standup();

class CommandSink {
 public:
  virtual ~CommandSink() = default;
  virtual void accept(std::size_t cycle, const Posture& posture) = 0;
};

/// Raised by play() when a sink throws; carries the failing cycle.
class PlaybackError : public Error {
 public:
  PlaybackError(std::size_t cycle, const std::string& what)
      : Error("playback failed at cycle " + std::to_string(cycle) + ": " + what), cycle_(cycle) {}
  std::size_t cycle() const { return cycle_; }

 private:
  std::size_t cycle_;
};

/// Delivers every command once, in order.
void play(const CommandTrace& trace, CommandSink& sink);

}  // namespace chairbot
