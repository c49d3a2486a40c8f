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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "chairbot/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace chairbot {
namespace {

using testing::bundled_model;
using testing::random_unit_quat;

const TaskConfig kWalk = TaskConfig::defaults(Task::kWalk);
const TaskConfig kStandup = TaskConfig::defaults(Task::kStandup);

Quat about_x(double angle) { return {std::sin(angle / 2), 0, 0, std::cos(angle / 2)}; }
Quat about_z(double angle) { return {0, 0, std::sin(angle / 2), std::cos(angle / 2)}; }

RobotState standing_state(double z = 0.08) {
  RobotState s;
  s.p = {0, 0, z};
  return s;
}

Action standing_action() {
  const JointAngles a = servo_to_joint(kStandingPosture, bundled_model()).angles;
  return a.rad;
}

TEST(WalkReward, ProgressExample) {
  const RobotState s = standing_state();
  RobotState moved = s;
  moved.p.x = 0.01;
  const RewardBreakdown r = walk_reward(moved, {s.p, {}}, {}, kWalk);
  EXPECT_NEAR(r.find("progress")->value, 0.1, 1e-4);
  EXPECT_NEAR(r.find("progress")->weighted, 3.0, 1e-4);
}

TEST(WalkReward, HeightExample) {
  const RobotState s = standing_state(0.04);
  const RewardBreakdown r = walk_reward(s, {s.p, {}}, {}, kWalk);
  EXPECT_DOUBLE_EQ(r.find("height")->value, 0.5);
  EXPECT_NEAR(r.find("height")->weighted, 10.0, 1e-12);
}

TEST(WalkReward, RestingTotal) {
  const RobotState s = standing_state(0.06);
  const RewardBreakdown r = walk_reward(s, {s.p, {}}, {}, kWalk);
  EXPECT_NEAR(r.total, 30 * 0 + 20 * (0.06 / 0.08) + 5 + 2 + 1, 1e-12);
  EXPECT_EQ(r.count, 7u);
  EXPECT_FALSE(r.death);
}

TEST(WalkReward, HeadingAtTargetIsOne) {
  RobotState s;
  s.p = kWalk.target;
  s.q = about_z(kPi);
  EXPECT_DOUBLE_EQ(walk_reward(s, {s.p, {}}, {}, kWalk).find("heading")->value, 1.0);
}

TEST(WalkReward, DeathOverwritesTotal) {
  RewardBreakdown r = walk_reward(standing_state(), {}, {}, kWalk);
  apply_death(r, kWalk.death_reward);
  EXPECT_EQ(r.total, -1.0);
  EXPECT_TRUE(r.death);
}

TEST(WalkReward, MatchesOracleOnRandomStates) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 10000; ++i) {
    RobotState s;
    s.q = random_unit_quat(rng);
    s.p = {u(rng) * 12, u(rng), 0.05 + 0.05 * u(rng)};
    for (double& r : s.phi_rate) r = 10 * u(rng);
    const Vec3 p_pre = s.p + Vec3{0.02 * u(rng), 0.02 * u(rng), 0.01 * u(rng)};
    Action a, a_pre;
    for (std::size_t j = 0; j < 6; ++j) {
      a[j] = 0.87 * u(rng);
      a_pre[j] = 0.87 * u(rng);
    }
    const double got = walk_reward(s, {p_pre, a_pre}, a, kWalk).total;
    ASSERT_NEAR(got, oracle::walk(s, p_pre, a, a_pre), 1e-9 * std::max(1.0, std::abs(got)));
  }
}

TEST(StandupReward, PinnedExamples) {
  RobotState s;
  EXPECT_NEAR(standup_reward(s, {}, {}, kStandup).find("up")->weighted, 250.0, 1e-12);

  s.q = about_x(std::acos(0.5));
  const RewardTerm* up = standup_reward(s, {}, {}, kStandup).find("up");
  EXPECT_NEAR(up->value, std::exp(-1.0), 1e-12);
  EXPECT_NEAR(up->weighted, 91.97, 1e-2);
  EXPECT_NEAR(up->weighted, 250 * std::exp(-1.0), 1e-9);

  const Action stand = kStandup.standup.a_stand;
  s.q = about_x(std::acos(0.9));
  const RewardTerm* standing = standup_reward(s, {}, stand, kStandup).find("standing");
  EXPECT_NEAR(standing->value, 10.0, 1e-4);
  EXPECT_NEAR(standing->weighted, 1000.0, 1e-4);

  s.q = about_x(std::acos(0.8));
  EXPECT_EQ(standup_reward(s, {}, stand, kStandup).find("standing")->value, 0.0);
}

TEST(StandupReward, MatchesOracleOnRandomStates) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 10000; ++i) {
    RobotState s;
    s.q = random_unit_quat(rng);
    Action a, a_pre;
    for (std::size_t j = 0; j < 6; ++j) {
      a[j] = 0.87 * u(rng);
      a_pre[j] = 0.87 * u(rng);
    }
    if (i % 4 == 0) a = kStandup.standup.a_stand;
    const double got = standup_reward(s, {{}, a_pre}, a, kStandup).total;
    ASSERT_NEAR(got, oracle::standup(s, a, a_pre), 1e-9 * std::max(1.0, std::abs(got)));
  }
}

// Reset predicates.

EpisodeStatus at_step(int step) { return {step, ResetReason::kNone}; }

TEST(WalkReset, TruthTable) {
  EXPECT_EQ(walk_reset(standing_state(), at_step(10), kWalk).reason, ResetReason::kNone);
  RobotState tilted = standing_state();
  tilted.q = {0.5, 0.5, 0.5, 0.5};
  EXPECT_EQ(walk_reset(tilted, at_step(10), kWalk).reason, ResetReason::kTilt);
  EXPECT_EQ(walk_reset(standing_state(), at_step(350), kWalk).reason, ResetReason::kNone);
  EXPECT_EQ(walk_reset(standing_state(), at_step(351), kWalk).reason, ResetReason::kMaxEpisode);
  RobotState corner = standing_state();
  corner.contact[kFirstSeatCorner + 2] = true;
  EXPECT_EQ(walk_reset(corner, at_step(10), kWalk).reason, ResetReason::kGround);
  RobotState back = standing_state();
  back.contact[kFirstBackrestPoint] = true;
  EXPECT_EQ(walk_reset(back, at_step(10), kWalk).reason, ResetReason::kNone);
  EXPECT_EQ(walk_reset(standing_state(0.001), at_step(10), kWalk).reason, ResetReason::kHeight);
  // A failure on the last step outranks the cap.
  EXPECT_EQ(walk_reset(tilted, at_step(351), kWalk).reason, ResetReason::kTilt);
}

TEST(WalkReset, BoundarySweeps) {
  for (double eps : {-1e-6, 1e-6}) {
    const double d = 0.7 + eps;
    RobotState s = standing_state();
    s.q = about_z(std::acos(1 - d * d / 2) * 2);
    ASSERT_NEAR(quat_dist_from_identity(s.q), d, 1e-9);
    EXPECT_EQ(walk_reset(s, at_step(1), kWalk).reason, eps > 0 ? ResetReason::kTilt : ResetReason::kNone);

    EXPECT_EQ(walk_reset(standing_state(0.005 + eps), at_step(1), kWalk).reason,
              eps < 0 ? ResetReason::kHeight : ResetReason::kNone);
  }
}

TEST(WalkReset, IsIdempotent) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 200; ++i) {
    RobotState s = standing_state(0.01 * (i % 10));
    s.q = random_unit_quat(rng);
    const EpisodeStatus a = walk_reset(s, at_step(i * 2), kWalk);
    EXPECT_EQ(walk_reset(s, at_step(i * 2), kWalk), a);
  }
}

TEST(StandupReset, TruthTable) {
  const auto& a_exp = kStandup.standup.a_expand;
  const Action expand{a_exp[0], a_exp[1], 0.0, a_exp[2], 0.0, a_exp[3]};
  RobotState s;
  s.q = about_x(std::acos(-0.8));
  EXPECT_EQ(standup_reset(s, at_step(5), expand, kStandup).reason, ResetReason::kFlip);
  s.q = about_x(std::acos(0.7));
  EXPECT_EQ(standup_reset(s, at_step(5), expand, kStandup).reason, ResetReason::kNone);
  Action folded = expand;
  folded[0] = 0.5;
  EXPECT_EQ(standup_reset(s, at_step(5), folded, kStandup).reason, ResetReason::kFold);
  // Joints 2 and 4 are not part of the fold check.
  Action free = expand;
  free[2] = free[4] = 5.0;
  EXPECT_EQ(standup_reset(s, at_step(5), free, kStandup).reason, ResetReason::kNone);
  EXPECT_EQ(standup_reset(s, at_step(351), expand, kStandup).reason, ResetReason::kMaxEpisode);
  EXPECT_EQ(standup_reset(s, at_step(351), folded, kStandup).reason, ResetReason::kFold);
}

TEST(StandupReset, BoundarySweeps) {
  const auto& a_exp = kStandup.standup.a_expand;
  const Action expand{a_exp[0], a_exp[1], 0.0, a_exp[2], 0.0, a_exp[3]};
  for (double eps : {-1e-6, 1e-6}) {
    RobotState s;
    s.q = about_x(std::acos(-0.7 + eps));
    EXPECT_EQ(standup_reset(s, at_step(1), expand, kStandup).reason,
              eps < 0 ? ResetReason::kFlip : ResetReason::kNone);

    Action far = expand;
    far[5] += 1.0 + eps;
    s.q = about_x(std::acos(0.7));
    EXPECT_EQ(standup_reset(s, at_step(1), far, kStandup).reason,
              eps > 0 ? ResetReason::kFold : ResetReason::kNone);

    far[5] = expand[5] + 1.5;
    s.q = about_x(std::acos(0.6 + eps));
    EXPECT_EQ(standup_reset(s, at_step(1), far, kStandup).reason,
              eps > 0 ? ResetReason::kFold : ResetReason::kNone);
  }
}

TEST(ResetReason, DeathClassification) {
  EXPECT_FALSE(is_death(ResetReason::kNone));
  EXPECT_FALSE(is_death(ResetReason::kMaxEpisode));
  for (ResetReason r : {ResetReason::kTilt, ResetReason::kGround, ResetReason::kHeight,
                        ResetReason::kFlip, ResetReason::kFold}) {
    EXPECT_TRUE(is_death(r)) << to_string(r);
  }
}

// Observations.

TEST(Observation, IdenticalSlots) {
  const std::vector<HistorySlot> h(4);
  const Observation o = build_observation(h);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(o[10 * k + i], i == 3 ? 1.0 : 0.0);
  }
}

TEST(Observation, PaddingAndOrdering) {
  HistorySlot a;
  a.a[0] = 0.3;
  const Observation one = build_observation(std::vector<HistorySlot>{a});
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(one[10 * k + 4], 0.3);

  std::vector<HistorySlot> h(6);
  for (std::size_t i = 0; i < h.size(); ++i) h[i].a[1] = static_cast<double>(i);
  const Observation o = build_observation(h);
  EXPECT_EQ(o[5], 2.0);
  EXPECT_EQ(o[35], 5.0);

  EXPECT_THROW(build_observation(std::vector<HistorySlot>{}), Error);
}

void expect_slot(const Observation& o, std::size_t slot, const Quat& q, const Action& a) {
  const std::size_t b = 10 * slot;
  EXPECT_EQ(o[b + 0], q.x);
  EXPECT_EQ(o[b + 1], q.y);
  EXPECT_EQ(o[b + 2], q.z);
  EXPECT_EQ(o[b + 3], q.w);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(o[b + 4 + j], a[j]);
}

TEST(Observation, ShiftsByOneSlotPerStepOverRandomRollouts) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kWalk, 5);
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-0.87, 0.87);
  Observation prev = env.reset();
  int resets = 0;
  for (int step = 0; step < 300; ++step) {
    Action a;
    for (double& x : a) x = u(rng);
    const StepResult r = env.step(a);
    ASSERT_EQ(r.observation.size(), 40u);
    if (r.status.live()) {
      for (std::size_t i = 0; i < 30; ++i) ASSERT_EQ(r.observation[i], prev[i + 10]);
      expect_slot(r.observation, 3, r.state.q, r.applied);
    } else {
      ++resets;
      for (std::size_t k = 1; k < 4; ++k) {
        for (std::size_t i = 0; i < 10; ++i) ASSERT_EQ(r.observation[10 * k + i], r.observation[i]);
      }
    }
    prev = r.observation;
  }
  EXPECT_GT(resets, 0);
}

// Environment stepping.

TEST(ChairEnv, StandingStepIsLiveAndRewarded) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kWalk, 1);
  const StepResult r = env.step(Action{});
  EXPECT_TRUE(r.status.live());
  EXPECT_GT(r.reward.total, 0.0);
}

TEST(ChairEnv, EpisodeCapAutoResets) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kWalk, 1);
  const Action rest = standing_action();
  StepResult r;
  for (int i = 0; i < 350; ++i) {
    r = env.step(rest);
    ASSERT_TRUE(r.status.live()) << "step " << i;
  }
  r = env.step(rest);
  EXPECT_EQ(r.status.reason, ResetReason::kMaxEpisode);
  EXPECT_EQ(r.status.step, 351);
  EXPECT_GT(r.reward.total, 0.0);
  EXPECT_EQ(env.status().step, 0);
  EXPECT_TRUE(env.status().live());
}

TEST(ChairEnv, StandupStartsOnTheSide) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kStandup, 1);
  const Observation& o = env.reset(InitialPose::kRightSide);
  const Quat q{o[30], o[31], o[32], o[33]};
  EXPECT_NEAR(u_prj(q), 0.0, 0.15);
}

TEST(ChairEnv, StandupResetsDrawAllGroundPoses) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kStandup, 9);
  std::array<int, 4> seen{};
  for (int i = 0; i < 60; ++i) {
    env.reset();
    seen[static_cast<std::size_t>(env.initial_pose())]++;
  }
  EXPECT_EQ(seen[static_cast<std::size_t>(InitialPose::kStanding)], 0);
  for (std::size_t p = 1; p < 4; ++p) EXPECT_GT(seen[p], 5);
}

TEST(ChairEnv, DeathAlwaysReturnsMinusOneAndProgressTelescopes) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kWalk, 2);
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(-0.87, 0.87);
  const auto potential = [](const Vec3& p) { return -(Vec3{10, 0, 0} - p).norm() / 0.1; };
  double start = potential(env.state().p);
  double progress = 0.0;
  int deaths = 0;
  for (int step = 0; step < 400; ++step) {
    Action a;
    for (double& x : a) x = u(rng);
    const StepResult r = env.step(a);
    if (is_death(r.status.reason)) {
      ++deaths;
      ASSERT_EQ(r.reward.total, -1.0);
    } else {
      double sum = 0;
      for (const RewardTerm& t : r.reward.active()) sum += t.weighted;
      ASSERT_NEAR(r.reward.total, sum, 1e-9);
    }
    progress += r.reward.find("progress")->value;
    if (!r.status.live()) {
      EXPECT_NEAR(progress, potential(r.state.p) - start, 1e-6);
      start = potential(env.state().p);
      progress = 0.0;
    }
  }
  EXPECT_GT(deaths, 0);
}

TEST(ChairEnv, ActionsAreClampedToJointRange) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kWalk, 1);
  const Action a = env.clamp_action({2.0, -2.0, 0.1, 0, 0, 0});
  EXPECT_NEAR(a[0], 50 * kDegToRad, 1e-12);
  EXPECT_NEAR(a[1], -50 * kDegToRad, 1e-12);
  EXPECT_EQ(a[2], 0.1);
  EXPECT_THROW(env.step({std::nan(""), 0, 0, 0, 0, 0}), ValidationError);
}

std::vector<StepResult> rollout(ChairEnv& env, int steps) {
  std::vector<StepResult> out;
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < steps; ++i) {
    Action a;
    for (double& x : a) x = u(rng);
    out.push_back(env.step(a));
  }
  return out;
}

bool same(const std::vector<StepResult>& a, const std::vector<StepResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].observation != b[i].observation || a[i].state != b[i].state ||
        a[i].reward.total != b[i].reward.total || a[i].status != b[i].status) {
      return false;
    }
  }
  return true;
}

TEST(Randomize, ZeroWidthIsBitwiseIdentical) {
  ChairEnv plain(bundled_model(), PhysicsConfig{}, kStandup, 4);
  ChairEnv zero(bundled_model(), PhysicsConfig{}, kStandup, 4);
  std::mt19937_64 rng(1);
  zero.randomize(NoiseConfig::none(), rng);
  plain.reset(InitialPose::kBack);
  zero.reset(InitialPose::kBack);
  EXPECT_TRUE(same(rollout(plain, 60), rollout(zero, 60)));
}

TEST(Randomize, SeededDrawIsReproducible) {
  ChairEnv a(bundled_model(), PhysicsConfig{}, kWalk, 4);
  ChairEnv b(bundled_model(), PhysicsConfig{}, kWalk, 4);
  std::mt19937_64 ra(77), rb(77);
  a.randomize(NoiseConfig{}, ra);
  b.randomize(NoiseConfig{}, rb);
  EXPECT_EQ(a.simulator().model(), b.simulator().model());
  EXPECT_EQ(a.simulator().config(), b.simulator().config());
  EXPECT_TRUE(same(rollout(a, 40), rollout(b, 40)));
}

TEST(Randomize, PhysicalParametersStayInRange) {
  const RobotModel& base = bundled_model();
  const PhysicsConfig phys;
  ChairEnv env(base, phys, kWalk, 4);
  std::mt19937_64 rng(78);
  double mass_sum = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    env.randomize(NoiseConfig{}, rng);
    const RobotModel& m = env.simulator().model();
    const PhysicsConfig& c = env.simulator().config();
    ASSERT_LE(std::abs(m.seat_mass / base.seat_mass - 1), 0.10 + 1e-12);
    ASSERT_LE(std::abs(m.foot_mass / base.foot_mass - 1), 0.10 + 1e-12);
    ASSERT_LE(std::abs(c.friction / phys.friction - 1), 0.20 + 1e-12);
    ASSERT_LE(std::abs(c.contact_stiffness / phys.contact_stiffness - 1), 0.20 + 1e-12);
    mass_sum += m.seat_mass / base.seat_mass;
  }
  // Uniform on [0.9, 1.1]: standard error of the mean is 0.1 / sqrt(3 n).
  EXPECT_NEAR(mass_sum / n, 1.0, 5 * 0.1 / std::sqrt(3.0 * n));
}

TEST(Randomize, ActionNoiseHasConfiguredSpread) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kWalk, 4);
  NoiseConfig noise = NoiseConfig::none();
  noise.action_sigma = 0.02;
  std::mt19937_64 rng(79);
  env.randomize(noise, rng);
  const Action rest = standing_action();
  double sum = 0, sq = 0;
  std::size_t count = 0;
  while (count < 100000) {
    const StepResult r = env.step(rest);
    for (std::size_t j = 0; j < 6; ++j) {
      const double d = r.applied[j] - rest[j];
      sum += d;
      sq += d * d;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double sd = std::sqrt(sq / static_cast<double>(count) - mean * mean);
  EXPECT_NEAR(sd, 0.02, 0.002);
  EXPECT_NEAR(mean, 0.0, 0.001);
}

TEST(Randomize, SensorNoisePerturbsObservedQuaternion) {
  ChairEnv env(bundled_model(), PhysicsConfig{}, kWalk, 4);
  NoiseConfig noise = NoiseConfig::none();
  noise.sensor_sigma = 0.01;
  std::mt19937_64 rng(80);
  env.randomize(noise, rng);
  const Action rest = standing_action();
  double sq = 0;
  int n = 0;
  for (int i = 0; i < 3000; ++i) {
    const StepResult r = env.step(rest);
    if (!r.status.live()) continue;
    const Quat q{r.observation[30], r.observation[31], r.observation[32], r.observation[33]};
    ASSERT_NEAR(q.norm(), 1.0, 1e-12);
    sq += (q.x - r.state.q.x) * (q.x - r.state.q.x);
    ++n;
  }
  EXPECT_NEAR(std::sqrt(sq / n), 0.01, 0.002);
}

TEST(VecEnv, BatchEqualsSequential) {
  const std::size_t n = 7;
  VecEnv batch(bundled_model(), PhysicsConfig{}, kStandup, n, 11, 3);
  VecEnv seq(bundled_model(), PhysicsConfig{}, kStandup, n, 11, 1);
  batch.randomize(NoiseConfig{}, 5);
  seq.randomize(NoiseConfig{}, 5);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-0.87, 0.87);
  std::vector<Action> actions(n);
  std::vector<StepResult> results(n);
  for (int step = 0; step < 30; ++step) {
    for (Action& a : actions) {
      for (double& x : a) x = u(rng);
    }
    batch.step(actions, results);
    for (std::size_t i = 0; i < n; ++i) {
      const StepResult r = seq[i].step(actions[i]);
      ASSERT_EQ(r.observation, results[i].observation);
      ASSERT_EQ(r.state, results[i].state);
      ASSERT_EQ(r.reward.total, results[i].reward.total);
    }
  }
}

TEST(VecEnv, EnvironmentsAreSeededIndependently) {
  VecEnv v(bundled_model(), PhysicsConfig{}, kStandup, 8, 3);
  std::array<int, 4> seen{};
  for (std::size_t i = 0; i < v.size(); ++i) seen[static_cast<std::size_t>(v[i].initial_pose())]++;
  int kinds = 0;
  for (int c : seen) kinds += c > 0;
  EXPECT_GE(kinds, 2);
}

TEST(TaskConfig, BundledFilesMatchDefaults) {
  EXPECT_EQ(load_task_config(testing::source_dir() / "configs" / "walk.cfg"), kWalk);
  EXPECT_EQ(load_task_config(testing::source_dir() / "configs" / "standup.cfg"), kStandup);
  for (const TaskConfig& c : {kWalk, kStandup}) EXPECT_EQ(task_config_from(to_config_file(c)), c);
}

TEST(TaskConfig, InvalidValuesAreRejected) {
  TaskConfig c = kWalk;
  c.walk.up_weight = std::nan("");
  EXPECT_THROW(validate_task_config(c), ValidationError);
  EXPECT_THROW(task_config_from(ConfigFile::parse("task = swim\n")), ParseError);
  EXPECT_THROW(task_config_from(ConfigFile::parse("task = walk\nfold_limit = 1\n")), ParseError);
  EXPECT_EQ(task_from_string("standup"), Task::kStandup);
}

}  // namespace
}  // namespace chairbot
