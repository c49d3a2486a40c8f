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

#include "chairbot/checkpoint.hpp"

#include <sstream>
#include <vector>

#include "chairbot/format.hpp"
#include "chairbot/io.hpp"

namespace chairbot {

namespace {

constexpr std::string_view kMagic = "CHAIRPOLICY";

// Layer views over a flat MLP parameter block: name, rows, cols, offset.
struct Block {
  std::string name;
  Eigen::Index rows, cols, offset;
};

std::vector<Block> blocks(const PolicyNet& net) {
  std::vector<Block> out;
  auto add_mlp = [&out](const std::string& prefix, const Mlp& m, Eigen::Index offset) {
    const Eigen::Index in = m.in(), h = m.hidden(), o = m.out();
    const std::array<std::tuple<const char*, Eigen::Index, Eigen::Index>, 6> shapes{
        {{"w1", h, in}, {"b1", h, 1}, {"w2", h, h}, {"b2", h, 1}, {"w3", o, h}, {"b3", o, 1}}};
    for (const auto& [name, rows, cols] : shapes) {
      out.push_back({prefix + "." + name, rows, cols, offset});
      offset += rows * cols;
    }
  };
  add_mlp("actor", net.actor(), net.actor_offset());
  out.push_back({"log_std", kNumJoints, 1, net.log_std_offset()});
  add_mlp("critic", net.critic(), net.critic_offset());
  return out;
}

void write_section(std::string& out, const std::string& name, Eigen::Index rows, Eigen::Index cols,
                   const double* col_major) {
  out += "section " + name + " " + std::to_string(rows) + " " + std::to_string(cols) + "\n";
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (c) out += ' ';
      out += format_double(col_major[c * rows + r]);
    }
    out += '\n';
  }
}

class Lines {
 public:
  explicit Lines(std::string_view text) : text_(text) {}

  // Next line split into words; throws on end of input.
  std::vector<std::string> next() {
    if (pos_ >= text_.size()) throw ParseError("checkpoint is truncated", line_ + 1, 1);
    const std::size_t end = std::min(text_.find('\n', pos_), text_.size());
    std::istringstream in{std::string(text_.substr(pos_, end - pos_))};
    pos_ = end + 1;
    ++line_;
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    return words;
  }
  // Like next() but requires the first word to be `keyword`.
  std::vector<std::string> expect(std::string_view keyword, std::size_t size) {
    auto words = next();
    if (words.empty() || words[0] != keyword || (size && words.size() != size)) {
      fail("expected '" + std::string(keyword) + "'");
    }
    return words;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, 1); }
  bool at_end() const { return pos_ >= text_.size(); }
  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

void read_section(Lines& lines, const std::string& name, Eigen::Index rows, Eigen::Index cols,
                  double* col_major) {
  const auto head = lines.expect("section", 4);
  if (head[1] != name) lines.fail("expected section '" + name + "', found '" + head[1] + "'");
  if (parse_int(head[2]) != rows || parse_int(head[3]) != cols) {
    lines.fail("section '" + name + "' has shape " + head[2] + "x" + head[3] + ", expected " +
               std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto words = lines.next();
    if (static_cast<Eigen::Index>(words.size()) != cols) {
      lines.fail("section '" + name + "' row " + std::to_string(r) + " has " +
                 std::to_string(words.size()) + " values");
    }
    for (Eigen::Index c = 0; c < cols; ++c) col_major[c * rows + r] = parse_double(words[static_cast<std::size_t>(c)]);
  }
}

}  // namespace

std::string serialize_checkpoint(const PolicyCheckpoint& ck) {
  (void)rng_from_string(ck.rng_state);
  std::string out = std::string(kMagic) + " v" + std::to_string(kCheckpointVersion) + "\n";
  out += "epoch " + std::to_string(ck.epoch) + "\n";
  const ConfigFile config = to_config_file(ck.config);
  for (const auto& [key, value] : config.entries()) {
    out += "config " + key + " " + value + "\n";
  }
  const PolicyNet& net = ck.net;
  out += "hidden " + std::to_string(net.hidden()) + "\n";
  write_section(out, "action_low", kNumJoints, 1, net.low().data());
  write_section(out, "action_high", kNumJoints, 1, net.high().data());
  for (const Block& b : blocks(net)) write_section(out, b.name, b.rows, b.cols, net.params().data() + b.offset);
  write_section(out, "obs_mean", kObservationSize, 1, net.obs_stats().mean.data());
  write_section(out, "obs_var", kObservationSize, 1, net.obs_stats().var.data());
  out += "obs_count " + format_double(net.obs_stats().count) + "\n";
  out += "rng " + ck.rng_state + "\n";
  out += "end\n";
  return out;
}

PolicyCheckpoint parse_checkpoint(std::string_view text) {
  Lines lines(text);
  const auto magic = lines.next();
  if (magic.size() != 2 || magic[0] != kMagic) lines.fail("not a chair policy checkpoint");
  const std::string expected = "v" + std::to_string(kCheckpointVersion);
  if (magic[1] != expected) {
    throw Error("checkpoint format " + magic[1] + " is not supported; this build reads " + expected);
  }

  PolicyCheckpoint ck;
  ck.epoch = static_cast<int>(parse_int(lines.expect("epoch", 2)[1]));
  ConfigFile config;
  std::vector<std::string> words = lines.next();
  while (!words.empty() && words[0] == "config") {
    if (words.size() != 3) lines.fail("expected 'config <key> <value>'");
    config.set(words[1], words[2]);
    words = lines.next();
  }
  try {
    ck.config = train_config_from(config);
  } catch (const Error& e) {
    lines.fail(std::string("invalid training settings: ") + e.what());
  }
  if (words.size() != 2 || words[0] != "hidden") lines.fail("expected 'hidden'");
  const long long hidden = parse_int(words[1]);
  if (hidden <= 0) lines.fail("hidden must be positive");

  Action low{}, high{};
  read_section(lines, "action_low", kNumJoints, 1, low.data());
  read_section(lines, "action_high", kNumJoints, 1, high.data());
  PolicyNet net(hidden, low, high);
  for (const Block& b : blocks(net)) read_section(lines, b.name, b.rows, b.cols, net.params().data() + b.offset);
  read_section(lines, "obs_mean", kObservationSize, 1, net.obs_stats().mean.data());
  read_section(lines, "obs_var", kObservationSize, 1, net.obs_stats().var.data());
  net.obs_stats().count = parse_double(lines.expect("obs_count", 2)[1]);
  if (!net.params().allFinite()) lines.fail("checkpoint parameters are not finite");

  const std::size_t rng_line = lines.line() + 1;
  auto rng = lines.expect("rng", 0);
  std::string state;
  for (std::size_t i = 1; i < rng.size(); ++i) state += (i > 1 ? " " : "") + rng[i];
  try {
    rng_from_string(state);
  } catch (const Error&) {
    throw ParseError("invalid rng state", rng_line, 1);
  }
  lines.expect("end", 1);
  while (!lines.at_end()) {
    if (!lines.next().empty()) lines.fail("unexpected content after 'end'");
  }
  ck.net = std::move(net);
  ck.rng_state = std::move(state);
  return ck;
}

void save_checkpoint(const PolicyCheckpoint& checkpoint, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_checkpoint(checkpoint));
}

PolicyCheckpoint load_checkpoint(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_checkpoint(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::optional<std::string> task_mismatch(const PolicyCheckpoint& checkpoint, Task task) {
  if (checkpoint.task() == task) return std::nullopt;
  return "policy was trained for the " + std::string(to_string(checkpoint.task())) +
         " task but is being used for " + std::string(to_string(task));
}

std::string rng_to_string(const std::mt19937_64& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

std::mt19937_64 rng_from_string(const std::string& text) {
  std::mt19937_64 rng;
  std::istringstream in(text);
  in >> rng;
  if (in.fail()) throw Error("invalid rng state");
  in >> std::ws;
  if (!in.eof()) throw Error("invalid rng state");
  return rng;
}

}  // namespace chairbot
