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
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "chairbot/policy.hpp"
#include "chairbot/ppo.hpp"

namespace chairbot {

inline constexpr int kCheckpointVersion = 1;

/// Trained policy with the settings and random state that produced it.
///
/// Text layout: the line "CHAIRPOLICY v1", `epoch`, one `config <key>
/// <value>` line per training setting, `hidden`, then `section <name> <rows>
/// <cols>` blocks with one row of values per line, `obs_count`, `rng` and a
/// closing `end`. Numbers use the shortest form that reads back exactly.
struct PolicyCheckpoint {
  TrainConfig config;
  int epoch = 0;
  PolicyNet net;
  std::string rng_state;

  Task task() const { return config.task; }
};

/// Throws Error if the rng state does not read back.
std::string serialize_checkpoint(const PolicyCheckpoint& checkpoint);
/// Throws ParseError on malformed or truncated text and Error on a version mismatch.
PolicyCheckpoint parse_checkpoint(std::string_view text);

void save_checkpoint(const PolicyCheckpoint& checkpoint, const std::filesystem::path& path);
PolicyCheckpoint load_checkpoint(const std::filesystem::path& path);

/// Warning text when the checkpoint was trained for a different task.
std::optional<std::string> task_mismatch(const PolicyCheckpoint& checkpoint, Task task);

std::string rng_to_string(const std::mt19937_64& rng);
std::mt19937_64 rng_from_string(const std::string& text);

}  // namespace chairbot
