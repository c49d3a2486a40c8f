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

#include "chairbot/gait.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "chairbot/format.hpp"

namespace chairbot {

std::vector<Posture> interpolate_segment(const Posture& from, const Posture& to, int n) {
  if (n < 0) throw ValidationError("interpolation step count must be >= 0, got " + std::to_string(n));
  std::vector<Posture> out;
  out.reserve(static_cast<std::size_t>(n) + 2);
  out.push_back(from);
  const double denom = static_cast<double>(n) + 1.0;
  for (int k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k) / denom;
    Posture s;
    for (std::size_t j = 0; j < kNumJoints; ++j) s[j] = from[j] + t * (to[j] - from[j]);
    out.push_back(s);
  }
  out.push_back(to);
  return out;
}

void validate_script(const GaitScript& script) {
  if (script.keyframes.size() < 2) throw ValidationError("a gait script needs at least 2 postures");
  for (std::size_t i = 0; i < script.keyframes.size(); ++i) {
    const Keyframe& k = script.keyframes[i];
    for (double theta : k.posture.deg) {
      if (!std::isfinite(theta)) throw ValidationError("posture " + std::to_string(i) + " is not finite");
    }
    if (k.steps_to_next < 0) throw ValidationError("negative step count at posture " + std::to_string(i));
  }
}

namespace {

// Appends transitions [first, last) of the script, skipping each segment's start.
void append_transitions(const GaitScript& script, std::vector<Posture>& out) {
  for (std::size_t i = 0; i + 1 < script.keyframes.size(); ++i) {
    const auto seg = interpolate_segment(script.keyframes[i].posture,
                                         script.keyframes[i + 1].posture,
                                         script.keyframes[i].steps_to_next);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
}

CommandTrace number(const std::vector<Posture>& postures) {
  CommandTrace trace;
  trace.commands.reserve(postures.size());
  for (std::size_t i = 0; i < postures.size(); ++i) trace.commands.push_back({i, postures[i]});
  return trace;
}

}  // namespace

CommandTrace compile_script(const GaitScript& script) {
  validate_script(script);
  std::vector<Posture> postures{script.keyframes.front().posture};
  append_transitions(script, postures);
  return number(postures);
}

std::size_t loop_period(const GaitScript& script) {
  std::size_t total = 0;
  for (std::size_t i = 0; i + 1 < script.keyframes.size(); ++i) {
    total += static_cast<std::size_t>(script.keyframes[i].steps_to_next) + 1;
  }
  return total;
}

CommandTrace unroll_script(const GaitScript& script, std::size_t count) {
  validate_script(script);
  std::vector<Posture> postures{script.keyframes.front().posture};
  std::vector<Posture> pass;
  append_transitions(script, pass);
  if (!script.loop) {
    postures.insert(postures.end(), pass.begin(), pass.end());
  } else {
    // After the last keyframe the walk resumes at the second keyframe, which
    // is exactly the next transition block.
    while (postures.size() < count) postures.insert(postures.end(), pass.begin(), pass.end());
  }
  if (postures.size() > count) postures.resize(count);
  return number(postures);
}

GaitScript parse_script(std::string_view text) {
  GaitScript script;
  bool saw_loop = false;
  bool expect_posture = true;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string keyword;
    if (!(words >> keyword) || keyword.front() == '#') continue;
    std::vector<std::string> args;
    for (std::string a; words >> a;) args.push_back(a);
    try {
      if (keyword == "loop") {
        if (saw_loop || !script.keyframes.empty()) throw ParseError("'loop' must appear once, before the postures");
        if (args.size() != 1 || (args[0] != "true" && args[0] != "false")) {
          throw ParseError("expected 'loop true' or 'loop false'");
        }
        script.loop = args[0] == "true";
        saw_loop = true;
      } else if (keyword == "posture") {
        if (!expect_posture) throw ParseError("expected 'steps' before the next posture");
        if (args.size() != kNumJoints) throw ParseError("a posture has 6 angles");
        Keyframe k;
        for (std::size_t j = 0; j < kNumJoints; ++j) k.posture[j] = parse_double(args[j]);
        script.keyframes.push_back(k);
        expect_posture = false;
      } else if (keyword == "steps") {
        if (expect_posture) throw ParseError("'steps' must follow a posture");
        if (args.size() != 1) throw ParseError("expected 'steps <n>'");
        const long long n = parse_int(args[0]);
        if (n < 0) throw ParseError("steps must be >= 0");
        script.keyframes.back().steps_to_next = static_cast<int>(n);
        expect_posture = true;
      } else {
        throw ParseError("unknown keyword '" + keyword + "'");
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_no, 1);
    }
  }
  if (script.keyframes.empty()) throw ParseError("gait script has no postures");
  if (expect_posture) throw ParseError("gait script must end with a posture", line_no, 1);
  try {
    validate_script(script);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return script;
}

GaitScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open gait script '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_script(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_script(const GaitScript& script) {
  std::string out = std::string("loop ") + (script.loop ? "true" : "false") + "\n";
  for (std::size_t i = 0; i < script.keyframes.size(); ++i) {
    out += "posture";
    for (double theta : script.keyframes[i].posture.deg) out += " " + format_double(theta);
    out += "\n";
    if (i + 1 < script.keyframes.size()) {
      out += "steps " + std::to_string(script.keyframes[i].steps_to_next) + "\n";
    }
  }
  return out;
}

GaitScript builtin_walk() {
  GaitScript s;
  s.loop = true;
  s.keyframes = {
      {{{90, 80, 90, 100, 90, 100}}, 0},
      {{{90, 80, 90, 100, 90, 140}}, 0},
      {{{70, 80, 90, 100, 90, 140}}, 0},
      {{{70, 80, 110, 100, 90, 140}}, 6},
      {{{90, 80, 90, 100, 90, 100}}, 0},
  };
  return s;
}

GaitScript builtin_standup() {
  GaitScript s;
  s.loop = false;
  s.keyframes = {
      {{{90, 80, 90, 100, 90, 100}}, 8},
      {{{90, 80, 90, 140, 40, 90}}, 0},
      {{{130, 80, 40, 90, 150, 140}}, 38},
      {{{130, 40, 50, 140, 90, 140}}, 28},
      {{{90, 80, 90, 100, 90, 100}}, 0},
  };
  return s;
}

void play(const CommandTrace& trace, CommandSink& sink) {
  for (const Command& c : trace.commands) {
    try {
      sink.accept(c.cycle, c.posture);
    } catch (const std::exception& e) {
      throw PlaybackError(c.cycle, e.what());
    }
  }
}

}  // namespace chairbot
