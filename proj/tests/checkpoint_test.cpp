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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "chairbot/error.hpp"
#include "chairbot/io.hpp"
#include "chairbot/trainer.hpp"
#include "test_support.hpp"

namespace chairbot {
namespace {

PolicyCheckpoint tiny_checkpoint() {
  PolicyCheckpoint ck;
  ck.config.n_envs = 8;
  ck.config.hidden = 2;
  ck.epoch = 3;
  ck.net = PolicyNet::for_model(2, testing::bundled_model());
  for (Eigen::Index i = 0; i < ck.net.params().size(); ++i) {
    ck.net.params()[i] = 0.125 * static_cast<double>(i % 17) - 1.0 + 1e-17 * static_cast<double>(i);
  }
  ck.net.obs_stats().update(Eigen::MatrixXd::Identity(kObservationSize, 2) * 0.1);
  std::mt19937_64 rng(7);
  rng.discard(3);
  ck.rng_state = rng_to_string(rng);
  return ck;
}

TEST(Checkpoint, MatchesGoldenFile) {
  EXPECT_EQ(serialize_checkpoint(tiny_checkpoint()), testing::read_golden("tiny.policy"));
}

TEST(Checkpoint, SaveLoadSaveIsByteIdentical) {
  const auto path = testing::scratch("roundtrip.policy");
  const PolicyCheckpoint ck = tiny_checkpoint();
  save_checkpoint(ck, path);
  const PolicyCheckpoint loaded = load_checkpoint(path);
  EXPECT_TRUE(loaded.net == ck.net);
  EXPECT_EQ(loaded.config, ck.config);
  EXPECT_EQ(loaded.epoch, 3);
  EXPECT_EQ(serialize_checkpoint(loaded), read_file(path));
  std::mt19937_64 a = rng_from_string(loaded.rng_state), b(7);
  b.discard(3);
  EXPECT_EQ(a(), b());
}

TEST(Checkpoint, RoundTripsRandomInitializedNet) {
  PolicyCheckpoint ck;
  ck.net = PolicyNet::for_model(16, testing::bundled_model());
  std::mt19937_64 rng(8);
  ck.net.initialize(rng, -1.0);
  ck.config.hidden = 16;
  ck.rng_state = rng_to_string(rng);
  const PolicyCheckpoint back = parse_checkpoint(serialize_checkpoint(ck));
  EXPECT_TRUE(back.net == ck.net);
  for (Eigen::Index i = 0; i < ck.net.params().size(); ++i) {
    ASSERT_EQ(back.net.params()[i], ck.net.params()[i]);
  }
}

TEST(Checkpoint, EveryTruncationIsRejected) {
  const std::string text = serialize_checkpoint(tiny_checkpoint());
  for (std::size_t cut = 0; cut < text.size(); cut += 7) {
    EXPECT_THROW(parse_checkpoint(text.substr(0, cut)), Error) << "cut at " << cut;
  }
}

TEST(Checkpoint, VersionMismatchNamesBothVersions) {
  std::string text = serialize_checkpoint(tiny_checkpoint());
  text.replace(0, std::string("CHAIRPOLICY v1").size(), "CHAIRPOLICY v7");
  try {
    parse_checkpoint(text);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("v7"), std::string::npos);
    EXPECT_NE(what.find("v1"), std::string::npos);
  }
}

TEST(Checkpoint, TrailingContentIsRejected) {
  EXPECT_THROW(parse_checkpoint(serialize_checkpoint(tiny_checkpoint()) + "extra\n"), ParseError);
}

TEST(Checkpoint, InvalidRngStateIsNotWritten) {
  PolicyCheckpoint ck = tiny_checkpoint();
  ck.rng_state.clear();
  EXPECT_THROW(serialize_checkpoint(ck), Error);
}

TEST(Checkpoint, MissingFileFails) {
  EXPECT_THROW(load_checkpoint("/nonexistent/x.policy"), Error);
}

TEST(Checkpoint, TaskMismatchWarning) {
  const PolicyCheckpoint ck = tiny_checkpoint();
  EXPECT_FALSE(task_mismatch(ck, Task::kWalk).has_value());
  const auto warning = task_mismatch(ck, Task::kStandup);
  ASSERT_TRUE(warning.has_value());
  EXPECT_NE(warning->find("walk"), std::string::npos);
  EXPECT_NE(warning->find("standup"), std::string::npos);
}

// Training loop.

TrainConfig tiny_training(std::uint64_t seed) {
  TrainConfig c;
  c.n_envs = 8;
  c.epochs = 1;
  c.horizon = 16;
  c.hidden = 16;
  c.seed = seed;
  return c;
}

TEST(Train, CurveCsvHeaderIsPinned) {
  EXPECT_EQ(curve_csv_header() + "\n", testing::read_golden("curve_header.csv"));
}

TEST(Train, SeededRunIsBitwiseReproducible) {
  const auto curve_a = testing::scratch("a.curve.csv"), curve_b = testing::scratch("b.curve.csv");
  const auto ck_a = testing::scratch("a.policy"), ck_b = testing::scratch("b.policy");
  const TaskConfig task = TaskConfig::defaults(Task::kWalk);
  train(testing::bundled_model(), PhysicsConfig{}, task, tiny_training(5), {ck_a, curve_a, {}});
  train(testing::bundled_model(), PhysicsConfig{}, task, tiny_training(5), {ck_b, curve_b, {}});
  EXPECT_EQ(read_file(curve_a), read_file(curve_b));
  EXPECT_EQ(read_file(ck_a), read_file(ck_b));
  const std::string curve = read_file(curve_a);
  EXPECT_EQ(curve.substr(0, curve.find('\n')), curve_csv_header());
}

TEST(Train, NoiseStageIsLabelled) {
  TrainConfig c = tiny_training(6);
  c.task = Task::kStandup;
  c.noise_epochs = 1;
  int calls = 0;
  const TrainResult r = train(testing::bundled_model(), PhysicsConfig{}, TaskConfig::defaults(Task::kStandup),
                              c, {{}, {}, [&](const CurveRow&) { ++calls; }});
  ASSERT_EQ(r.curve.size(), 2u);
  EXPECT_FALSE(r.curve[0].noise);
  EXPECT_TRUE(r.curve[1].noise);
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(r.checkpoint.epoch, 2);
  EXPECT_EQ(r.checkpoint.task(), Task::kStandup);
}

TEST(Train, NonFiniteLossSavesLastGoodPolicy) {
  TaskConfig task = TaskConfig::defaults(Task::kWalk);
  task.walk.alive_weight = 1e308;
  task.walk.height_weight = 1e308;
  const auto ck = testing::scratch("diverged.policy");
  std::filesystem::remove(ck);
  EXPECT_THROW(train(testing::bundled_model(), PhysicsConfig{}, task, tiny_training(7), {ck, {}, {}}),
               TrainingError);
  ASSERT_TRUE(std::filesystem::exists(ck));
  const PolicyCheckpoint saved = load_checkpoint(ck);
  EXPECT_TRUE(saved.net.params().allFinite());
}

TEST(Evaluate, StandupCyclesThroughInitialPoses) {
  const EvalSummary s = evaluate(testing::bundled_model(), PhysicsConfig{},
                                 TaskConfig::defaults(Task::kStandup),
                                 random_policy(testing::bundled_model(), 3), {6, 1});
  ASSERT_EQ(s.episodes.size(), 6u);
  EXPECT_EQ(s.by_pose[static_cast<std::size_t>(InitialPose::kRightSide)].episodes, 2u);
  EXPECT_EQ(s.by_pose[static_cast<std::size_t>(InitialPose::kLeftSide)].episodes, 2u);
  EXPECT_EQ(s.by_pose[static_cast<std::size_t>(InitialPose::kBack)].episodes, 2u);
  for (const EpisodeResult& e : s.episodes) EXPECT_NE(e.reason, ResetReason::kNone);
}

TEST(Evaluate, RandomWalkPolicyFallsQuickly) {
  const EvalSummary s = evaluate(testing::bundled_model(), PhysicsConfig{},
                                 TaskConfig::defaults(Task::kWalk),
                                 random_policy(testing::bundled_model(), 4), {10, 1});
  EXPECT_LT(s.mean_length, 50.0);
  EXPECT_EQ(s.success_rate, 0.0);
}

}  // namespace
}  // namespace chairbot
