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

#include "chairbot/env.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "chairbot/error.hpp"
#include "chairbot/format.hpp"
#include "chairbot/parallel.hpp"

namespace chairbot {

std::string_view to_string(Task task) {
  return task == Task::kWalk ? "walk" : "standup";
}

Task task_from_string(std::string_view name) {
  if (name == "walk") return Task::kWalk;
  if (name == "standup") return Task::kStandup;
  throw ParseError("unknown task '" + std::string(name) + "', expected walk or standup");
}

Observation build_observation(std::span<const HistorySlot> history) {
  if (history.empty()) throw Error("observation history is empty");
  const std::size_t n = std::min(history.size(), kHistoryLength);
  const auto newest = history.last(n);
  Observation obs{};
  for (std::size_t slot = 0; slot < kHistoryLength; ++slot) {
    const std::size_t pad = kHistoryLength - n;
    const HistorySlot& h = newest[slot < pad ? 0 : slot - pad];
    double* out = obs.data() + slot * kSlotSize;
    out[0] = h.q.x;
    out[1] = h.q.y;
    out[2] = h.q.z;
    out[3] = h.q.w;
    std::copy(h.a.begin(), h.a.end(), out + 4);
  }
  return obs;
}

// ---------------------------------------------------------------------------
// Task configuration

TaskConfig TaskConfig::defaults(Task task) {
  TaskConfig c;
  c.task = task;
  return c;
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }
bool in_unit_interval(double v) { return v >= -1.0 && v <= 1.0; }

std::vector<double> parse_list(const std::string& text, std::size_t expected,
                               std::string_view key) {
  std::istringstream in(text);
  std::vector<double> out;
  for (std::string word; in >> word;) out.push_back(parse_double(word));
  if (out.size() != expected) {
    throw ParseError(std::string(key) + " expects " + std::to_string(expected) + " values");
  }
  return out;
}

template <typename Container>
std::string join(const Container& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ' ';
    out += format_double(v);
  }
  return out;
}

}  // namespace

void validate_task_config(const TaskConfig& c) {
  require(c.target.finite(), "target must be finite");
  require(std::abs(c.dt - 0.1) < 1e-12, "control period dt is fixed at 0.1 s");
  require(c.max_episode_steps > 0, "max_episode_steps must be positive");
  require(std::isfinite(c.death_reward), "death_reward must be finite");

  const WalkParams& w = c.walk;
  for (double v : {w.progress_weight, w.height_weight, w.up_weight, w.heading_weight,
                   w.alive_weight, w.action_weight, w.velocity_weight}) {
    require(finite_non_negative(v), "walk reward weights must be finite and >= 0");
  }
  require(w.height_scale > 0.0 && w.up_scale > 0.0 && w.heading_scale > 0.0,
          "walk reward scales must be positive");
  require(w.omega_max > w.omega_tol && w.omega_tol >= 0.0, "omega_max must exceed omega_tol >= 0");
  require(w.tilt_limit > 0.0 && w.tilt_limit <= 2.0, "tilt_limit must lie in (0, 2]");
  require(finite_non_negative(w.min_height), "min_height must be >= 0");

  const StandupParams& s = c.standup;
  for (double v : {s.up_weight, s.standing_weight, s.spreading_weight, s.action_weight}) {
    require(finite_non_negative(v), "stand-up reward weights must be finite and >= 0");
  }
  require(in_unit_interval(s.standing_gate) && in_unit_interval(s.spreading_gate) &&
              in_unit_interval(s.flip_limit) && in_unit_interval(s.fold_gate),
          "stand-up gates must lie in [-1, 1]");
  require(s.fold_limit > 0.0, "fold_limit must be positive");
  for (double v : s.a_stand) require(std::isfinite(v), "a_stand must be finite");
  for (double v : s.a_expand) require(std::isfinite(v), "a_expand must be finite");
  require(!s.initial_poses.empty(), "initial_poses must not be empty");

  const NoiseConfig& n = c.noise;
  for (double v : {n.mass_range, n.friction_range, n.stiffness_range}) {
    require(v >= 0.0 && v < 1.0, "randomization ranges must lie in [0, 1)");
  }
  require(finite_non_negative(n.sensor_sigma) && finite_non_negative(n.action_sigma),
          "noise sigmas must be finite and >= 0");
}

TaskConfig task_config_from(const ConfigFile& file) {
  const auto task_name = file.get("task");
  if (!task_name) throw ParseError("task config is missing 'task'");
  TaskConfig c = TaskConfig::defaults(task_from_string(*task_name));

  std::vector<std::string_view> known{"task", "target", "max_episode_steps", "death_reward",
                                      "mass_range", "friction_range", "stiffness_range",
                                      "sensor_sigma", "action_sigma"};
  if (c.task == Task::kWalk) {
    known.insert(known.end(), {"progress_weight", "height_weight", "up_weight", "heading_weight",
                               "alive_weight", "action_weight", "velocity_weight", "height_scale",
                               "up_scale", "heading_scale", "omega_max", "omega_tol",
                               "tilt_limit", "min_height"});
  } else {
    known.insert(known.end(), {"initial_poses", "up_weight", "standing_weight",
                               "spreading_weight", "action_weight", "standing_gate",
                               "spreading_gate", "a_stand", "a_expand", "flip_limit", "fold_gate",
                               "fold_limit"});
  }
  file.require_known(known);

  if (auto t = file.get("target")) {
    const auto v = parse_list(*t, 3, "target");
    c.target = {v[0], v[1], v[2]};
  }
  c.max_episode_steps = static_cast<int>(file.get_int("max_episode_steps", c.max_episode_steps));
  c.death_reward = file.get_double("death_reward", c.death_reward);
  NoiseConfig& n = c.noise;
  n.mass_range = file.get_double("mass_range", n.mass_range);
  n.friction_range = file.get_double("friction_range", n.friction_range);
  n.stiffness_range = file.get_double("stiffness_range", n.stiffness_range);
  n.sensor_sigma = file.get_double("sensor_sigma", n.sensor_sigma);
  n.action_sigma = file.get_double("action_sigma", n.action_sigma);

  if (c.task == Task::kWalk) {
    WalkParams& w = c.walk;
    w.progress_weight = file.get_double("progress_weight", w.progress_weight);
    w.height_weight = file.get_double("height_weight", w.height_weight);
    w.up_weight = file.get_double("up_weight", w.up_weight);
    w.heading_weight = file.get_double("heading_weight", w.heading_weight);
    w.alive_weight = file.get_double("alive_weight", w.alive_weight);
    w.action_weight = file.get_double("action_weight", w.action_weight);
    w.velocity_weight = file.get_double("velocity_weight", w.velocity_weight);
    w.height_scale = file.get_double("height_scale", w.height_scale);
    w.up_scale = file.get_double("up_scale", w.up_scale);
    w.heading_scale = file.get_double("heading_scale", w.heading_scale);
    w.omega_max = file.get_double("omega_max", w.omega_max);
    w.omega_tol = file.get_double("omega_tol", w.omega_tol);
    w.tilt_limit = file.get_double("tilt_limit", w.tilt_limit);
    w.min_height = file.get_double("min_height", w.min_height);
  } else {
    StandupParams& s = c.standup;
    if (auto poses = file.get("initial_poses")) {
      s.initial_poses.clear();
      std::istringstream in(*poses);
      for (std::string word; in >> word;) s.initial_poses.push_back(initial_pose_from_string(word));
    }
    s.up_weight = file.get_double("up_weight", s.up_weight);
    s.standing_weight = file.get_double("standing_weight", s.standing_weight);
    s.spreading_weight = file.get_double("spreading_weight", s.spreading_weight);
    s.action_weight = file.get_double("action_weight", s.action_weight);
    s.standing_gate = file.get_double("standing_gate", s.standing_gate);
    s.spreading_gate = file.get_double("spreading_gate", s.spreading_gate);
    if (auto a = file.get("a_stand")) {
      const auto v = parse_list(*a, kNumJoints, "a_stand");
      std::copy(v.begin(), v.end(), s.a_stand.begin());
    }
    if (auto a = file.get("a_expand")) {
      const auto v = parse_list(*a, 4, "a_expand");
      std::copy(v.begin(), v.end(), s.a_expand.begin());
    }
    s.flip_limit = file.get_double("flip_limit", s.flip_limit);
    s.fold_gate = file.get_double("fold_gate", s.fold_gate);
    s.fold_limit = file.get_double("fold_limit", s.fold_limit);
  }
  validate_task_config(c);
  return c;
}

ConfigFile to_config_file(const TaskConfig& c) {
  ConfigFile f;
  f.set("task", std::string(to_string(c.task)));
  f.set("target", join(std::array{c.target.x, c.target.y, c.target.z}));
  f.set("max_episode_steps", std::to_string(c.max_episode_steps));
  f.set("death_reward", c.death_reward);
  if (c.task == Task::kWalk) {
    const WalkParams& w = c.walk;
    f.set("progress_weight", w.progress_weight);
    f.set("height_weight", w.height_weight);
    f.set("up_weight", w.up_weight);
    f.set("heading_weight", w.heading_weight);
    f.set("alive_weight", w.alive_weight);
    f.set("action_weight", w.action_weight);
    f.set("velocity_weight", w.velocity_weight);
    f.set("height_scale", w.height_scale);
    f.set("up_scale", w.up_scale);
    f.set("heading_scale", w.heading_scale);
    f.set("omega_max", w.omega_max);
    f.set("omega_tol", w.omega_tol);
    f.set("tilt_limit", w.tilt_limit);
    f.set("min_height", w.min_height);
  } else {
    const StandupParams& s = c.standup;
    std::string poses;
    for (InitialPose p : s.initial_poses) {
      if (!poses.empty()) poses += ' ';
      poses += to_string(p);
    }
    f.set("initial_poses", poses);
    f.set("up_weight", s.up_weight);
    f.set("standing_weight", s.standing_weight);
    f.set("spreading_weight", s.spreading_weight);
    f.set("action_weight", s.action_weight);
    f.set("standing_gate", s.standing_gate);
    f.set("spreading_gate", s.spreading_gate);
    f.set("a_stand", join(s.a_stand));
    f.set("a_expand", join(s.a_expand));
    f.set("flip_limit", s.flip_limit);
    f.set("fold_gate", s.fold_gate);
    f.set("fold_limit", s.fold_limit);
  }
  f.set("mass_range", c.noise.mass_range);
  f.set("friction_range", c.noise.friction_range);
  f.set("stiffness_range", c.noise.stiffness_range);
  f.set("sensor_sigma", c.noise.sensor_sigma);
  f.set("action_sigma", c.noise.action_sigma);
  return f;
}

TaskConfig load_task_config(const std::filesystem::path& path) {
  return task_config_from(ConfigFile::load(path));
}

// ---------------------------------------------------------------------------
// Rewards

void RewardBreakdown::add(std::string_view name, double value, double weight) {
  if (count == terms.size()) throw Error("too many reward terms");
  terms[count++] = {name, value, weight, weight * value};
  total += weight * value;
}

const RewardTerm* RewardBreakdown::find(std::string_view name) const {
  for (const RewardTerm& t : active()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void apply_death(RewardBreakdown& reward, double death_reward) {
  reward.death = true;
  reward.total = death_reward;
}

RewardBreakdown walk_reward(const RobotState& state, const PreviousStep& prev, const Action& action,
                            const TaskConfig& config) {
  const WalkParams& w = config.walk;
  const double potential = -(config.target - state.p).norm() / config.dt;
  const double prev_potential = -(config.target - prev.p).norm() / config.dt;

  const Vec3 to_target = config.target - state.p;
  const double distance = to_target.norm();
  double heading = 1.0;
  if (distance > 0.0) {
    const Vec3 forward = quat_rotate(state.q, kUnitX);
    heading = std::min(1.0, dot(forward, to_target) / distance / w.heading_scale);
  }

  double action_change = 0.0;
  double velocity = 0.0;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const double da = action[j] - prev.a[j];
    action_change += da * da;
    const double r = state.phi_rate[j] / (w.omega_max - w.omega_tol);
    velocity += r * r;
  }

  RewardBreakdown out;
  out.add("progress", potential - prev_potential, w.progress_weight);
  out.add("height", std::min(1.0, state.p.z / w.height_scale), w.height_weight);
  out.add("up", std::min(1.0, u_prj(state.q) / w.up_scale), w.up_weight);
  out.add("heading", heading, w.heading_weight);
  out.add("alive", 1.0, w.alive_weight);
  out.add("action", action_change, -w.action_weight);
  out.add("velocity", velocity, -w.velocity_weight);
  return out;
}

namespace {

template <std::size_t N>
double l4_norm(const std::array<double, N>& v) {
  double s = 0.0;
  for (double x : v) s += x * x * x * x;
  return std::sqrt(std::sqrt(s));
}

std::array<double, 4> expand_offset(const Action& a, const StandupParams& s) {
  return {a[0] - s.a_expand[0], a[1] - s.a_expand[1], a[3] - s.a_expand[2],
          a[5] - s.a_expand[3]};
}

double proximity(double distance) {
  return 1.0 / (2.0 * std::abs(std::asin(std::min(1.0, distance))) + 0.1);
}

}  // namespace

RewardBreakdown standup_reward(const RobotState& state, const PreviousStep& prev,
                               const Action& action, const TaskConfig& config) {
  const StandupParams& s = config.standup;
  const double up = u_prj(state.q);

  Action to_stand{};
  double action_change = 0.0;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    to_stand[j] = action[j] - s.a_stand[j];
    const double da = action[j] - prev.a[j];
    action_change += da * da;
  }
  const double standing = up > s.standing_gate ? proximity(l4_norm(to_stand)) : 0.0;
  const double spreading =
      up > s.spreading_gate ? proximity(l4_norm(expand_offset(action, s))) : 0.0;

  RewardBreakdown out;
  out.add("up", std::min(1.0, std::exp(2.0 * (up - 1.0))), s.up_weight);
  out.add("standing", standing, s.standing_weight);
  out.add("spreading", spreading, s.spreading_weight);
  out.add("action", action_change, -s.action_weight);
  return out;
}

// ---------------------------------------------------------------------------
// Reset conditions

std::string_view to_string(ResetReason reason) {
  switch (reason) {
    case ResetReason::kNone: return "none";
    case ResetReason::kMaxEpisode: return "max_episode";
    case ResetReason::kTilt: return "tilt";
    case ResetReason::kGround: return "ground";
    case ResetReason::kHeight: return "height";
    case ResetReason::kFlip: return "flip";
    case ResetReason::kFold: return "fold";
  }
  return "unknown";
}

bool is_death(ResetReason reason) {
  return reason != ResetReason::kNone && reason != ResetReason::kMaxEpisode;
}

EpisodeStatus walk_reset(const RobotState& state, const EpisodeStatus& status,
                         const TaskConfig& config) {
  EpisodeStatus out{status.step, ResetReason::kNone};
  bool corner = false;
  for (std::size_t i = 0; i < kNumSeatCorners; ++i) corner = corner || state.contact[kFirstSeatCorner + i];

  if (quat_dist_from_identity(state.q) > config.walk.tilt_limit) {
    out.reason = ResetReason::kTilt;
  } else if (corner) {
    out.reason = ResetReason::kGround;
  } else if (state.p.z < config.walk.min_height) {
    out.reason = ResetReason::kHeight;
  } else if (status.step > config.max_episode_steps) {
    out.reason = ResetReason::kMaxEpisode;
  }
  return out;
}

EpisodeStatus standup_reset(const RobotState& state, const EpisodeStatus& status,
                            const Action& action, const TaskConfig& config) {
  const StandupParams& s = config.standup;
  EpisodeStatus out{status.step, ResetReason::kNone};
  const double up = u_prj(state.q);
  double spread = 0.0;
  for (double d : expand_offset(action, s)) spread = std::max(spread, std::abs(d));

  if (up < s.flip_limit) {
    out.reason = ResetReason::kFlip;
  } else if (up > s.fold_gate && spread > s.fold_limit) {
    out.reason = ResetReason::kFold;
  } else if (status.step > config.max_episode_steps) {
    out.reason = ResetReason::kMaxEpisode;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Environment

ChairEnv::ChairEnv(RobotModel model, PhysicsConfig physics, TaskConfig task, std::uint64_t seed,
                   std::size_t id)
    : base_model_(std::move(model)),
      base_physics_(physics),
      sim_(base_model_, base_physics_),
      task_(std::move(task)),
      rng_(seed),
      id_(id) {
  validate_task_config(task_);
  if (std::abs(task_.dt - base_physics_.dt) > 1e-12) {
    throw ValidationError("task and physics control periods differ");
  }
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    lower_[j] = base_model_.joints[j].min_deg * kDegToRad;
    upper_[j] = base_model_.joints[j].max_deg * kDegToRad;
  }
  rest_action_ = clamp_action(servo_to_joint(kStandingPosture, base_model_).angles.rad);
  reset();
}

Action ChairEnv::clamp_action(const Action& action) const {
  Action out{};
  for (std::size_t j = 0; j < kNumJoints; ++j) out[j] = std::clamp(action[j], lower_[j], upper_[j]);
  return out;
}

const RobotState& ChairEnv::settled(InitialPose pose) {
  auto& slot = settled_[static_cast<std::size_t>(pose)];
  if (!slot) {
    try {
      slot = sim_.reset_to(pose);
    } catch (const PhysicsError& e) {
      throw PhysicsError("env " + std::to_string(id_) + ": " + e.what());
    }
  }
  return *slot;
}

Quat ChairEnv::observe(const Quat& q) {
  if (noise_.sensor_sigma <= 0.0) return q;
  std::normal_distribution<double> noise(0.0, noise_.sensor_sigma);
  Quat out{q.x + noise(rng_), q.y + noise(rng_), q.z + noise(rng_), q.w + noise(rng_)};
  return out.normalized();
}

void ChairEnv::push_history(const Quat& q, const Action& a) {
  std::rotate(history_.begin(), history_.begin() + 1, history_.end());
  history_.back() = {q, a};
  observation_ = build_observation(history_);
}

const Observation& ChairEnv::reset() {
  if (task_.task == Task::kWalk) return reset(InitialPose::kStanding);
  const auto& poses = task_.standup.initial_poses;
  std::uniform_int_distribution<std::size_t> pick(0, poses.size() - 1);
  return reset(poses[pick(rng_)]);
}

const Observation& ChairEnv::reset(InitialPose pose) {
  initial_pose_ = pose;
  state_ = settled(pose);
  status_ = {};
  prev_ = {state_.p, rest_action_};
  const HistorySlot first{observe(state_.q), rest_action_};
  history_.fill(first);
  observation_ = build_observation(history_);
  return observation_;
}

StepResult ChairEnv::step(const Action& action) {
  for (double a : action) {
    if (!std::isfinite(a)) throw ValidationError("env " + std::to_string(id_) + ": non-finite action");
  }
  Action a = clamp_action(action);
  if (noise_.action_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_.action_sigma);
    for (double& x : a) x += noise(rng_);
    a = clamp_action(a);
  }

  const Posture command = joint_to_servo(JointAngles{a}, sim_.model());
  try {
    state_ = sim_.step(state_, command);
  } catch (const PhysicsError& e) {
    throw PhysicsError("env " + std::to_string(id_) + ": " + e.what());
  }
  status_.step += 1;

  StepResult result;
  if (task_.task == Task::kWalk) {
    result.reward = walk_reward(state_, prev_, a, task_);
    status_ = walk_reset(state_, status_, task_);
  } else {
    result.reward = standup_reward(state_, prev_, a, task_);
    status_ = standup_reset(state_, status_, a, task_);
  }
  if (is_death(status_.reason)) apply_death(result.reward, task_.death_reward);

  prev_ = {state_.p, a};
  push_history(observe(state_.q), a);

  result.status = status_;
  result.state = state_;
  result.applied = a;
  if (!status_.live()) reset();
  result.observation = observation_;
  return result;
}

void ChairEnv::randomize(const NoiseConfig& noise, std::mt19937_64& rng) {
  auto scale = [&rng](double range) {
    std::uniform_real_distribution<double> u(1.0 - range, 1.0 + range);
    return u(rng);
  };
  RobotModel model = base_model_;
  model.seat_mass *= scale(noise.mass_range);
  model.backrest_mass *= scale(noise.mass_range);
  model.foot_mass *= scale(noise.mass_range);
  PhysicsConfig physics = base_physics_;
  physics.friction *= scale(noise.friction_range);
  physics.contact_stiffness *= scale(noise.stiffness_range);

  sim_ = Simulator(model, physics);
  settled_ = {};
  noise_ = noise;
}

StepResult env_step(ChairEnv& env, const Action& action) { return env.step(action); }

void randomize(ChairEnv& env, const NoiseConfig& noise, std::mt19937_64& rng) {
  env.randomize(noise, rng);
}

// ---------------------------------------------------------------------------
// Batches

namespace {

std::uint64_t env_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

VecEnv::VecEnv(const RobotModel& model, const PhysicsConfig& physics, const TaskConfig& task,
               std::size_t count, std::uint64_t seed, std::size_t threads)
    : threads_(std::max<std::size_t>(1, threads)) {
  if (count == 0) throw ValidationError("VecEnv needs at least one environment");
  envs_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) envs_.emplace_back(model, physics, task, env_seed(seed, i), i);
}

void VecEnv::step(std::span<const Action> actions, std::span<StepResult> results) {
  if (actions.size() != envs_.size() || results.size() != envs_.size()) {
    throw ValidationError("VecEnv::step: batch size mismatch");
  }
  parallel_for(envs_.size(), threads_, [&](std::size_t i) { results[i] = envs_[i].step(actions[i]); });
}

void VecEnv::randomize(const NoiseConfig& noise, std::uint64_t seed) {
  for (std::size_t i = 0; i < envs_.size(); ++i) {
    std::mt19937_64 rng(env_seed(seed ^ 0x9e3779b97f4a7c15ULL, i));
    envs_[i].randomize(noise, rng);
  }
}

}  // namespace chairbot
