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

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

#include "chairbot/checkpoint.hpp"
#include "chairbot/env.hpp"
#include "chairbot/error.hpp"
#include "chairbot/format.hpp"
#include "chairbot/gait.hpp"
#include "chairbot/io.hpp"
#include "chairbot/model.hpp"
#include "chairbot/physics.hpp"
#include "chairbot/trainer.hpp"
#include "plot.hpp"
#include "trajectory.hpp"
#include "wire.hpp"

namespace chairbot::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string model;
  std::string physics;
};

struct GaitOptions {
  std::string script;
  std::string pose = "standing";
  std::optional<double> seconds;
  std::string out;
};

struct TrainOptions {
  std::string task;
  std::optional<std::size_t> envs;
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
  bool noise = false;
  int noise_epochs = 30;
  std::string out;
  std::string curve;
  std::string task_config;
  std::string train_config;
  std::optional<std::size_t> threads;
};

struct EvalOptions {
  std::string task;
  std::string policy;
  std::size_t episodes = 30;
  std::uint64_t seed = 1;
  std::string out;
  std::string task_config;
};

struct PlotOptions {
  std::string in;
  std::string out;
};

struct DumpOptions {
  std::string script;
  std::string policy;
  std::string out;
  std::size_t cycles = 1;
  std::size_t steps = 350;
  std::string pose;
  bool imu = false;
  std::uint64_t seed = 1;
};

RobotModel model_of(const Common& c) {
  return load_model(c.model.empty() ? default_model_path() : fs::path(c.model));
}

PhysicsConfig physics_of(const Common& c) {
  return c.physics.empty() ? PhysicsConfig{} : load_physics_config(c.physics);
}

std::string fixed(double v, int decimals) { return format_fixed(v, decimals); }

// -------------------------------------------------------------------------

int cmd_gait(const Common& common, const GaitOptions& o, std::ostream& out) {
  const RobotModel model = model_of(common);
  const Simulator sim(model, physics_of(common));
  const GaitScript script = load_script(o.script);
  const InitialPose pose = initial_pose_from_string(o.pose);
  if (o.seconds && !(*o.seconds > 0.0)) throw ValidationError("--seconds must be positive");

  const CommandTrace pass = compile_script(script);
  std::size_t steps = script.loop ? 100 : pass.size();
  if (o.seconds) steps = static_cast<std::size_t>(std::llround(*o.seconds / kControlPeriod));
  const CommandTrace trace = script.loop ? unroll_script(script, steps) : pass;

  const TaskConfig monitor = TaskConfig::defaults(Task::kWalk);
  RobotState state = sim.reset_to(pose);
  const Vec3 start = state.p;
  std::vector<TrajectoryRow> rows;
  std::size_t triggers = 0, clamped = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    const Posture& command = trace[std::min(k, trace.size() - 1)].posture;
    if (servo_to_joint(command, model).clamped) ++clamped;
    state = sim.step(state, command);
    const ResetReason reason = walk_reset(state, EpisodeStatus{}, monitor).reason;
    if (reason != ResetReason::kNone) ++triggers;
    rows.push_back(make_row(cycle_time(k + 1), state, command, std::nullopt, reason));
  }
  write_file_atomic(o.out, format_trajectory(rows));

  const Rpy rpy = quat_to_rpy(state.q);
  out << "gait " << fs::path(o.script).filename().string() << " from " << to_string(pose) << ": "
      << trace.size() << " commands, " << steps << " steps, " << clamped << " clamped, dx "
      << fixed(state.p.x - start.x, 4) << " m, dy " << fixed(state.p.y - start.y, 4)
      << " m, final roll " << fixed(rpy.roll, 2) << " pitch " << fixed(rpy.pitch, 2) << " yaw "
      << fixed(rpy.yaw, 2) << " deg, final u_prj " << fixed(u_prj(state.q), 4)
      << ", reset triggers " << triggers << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------------

int cmd_train(const Common& common, const TrainOptions& o, std::ostream& out) {
  const Task task = task_from_string(o.task);
  TrainConfig config = o.train_config.empty() ? TrainConfig::defaults(task)
                                              : train_config_from(ConfigFile::load(o.train_config));
  config.task = task;
  if (o.epochs) config.epochs = *o.epochs;
  if (o.envs) config.n_envs = *o.envs;
  if (o.seed) config.seed = *o.seed;
  if (o.threads) config.threads = *o.threads;
  if (o.noise) config.noise_epochs = o.noise_epochs;
  validate_train_config(config);

  const TaskConfig task_config =
      o.task_config.empty() ? TaskConfig::defaults(task) : load_task_config(o.task_config);
  if (task_config.task != task) throw ValidationError("--task-config is for a different task");
  const RobotModel model = model_of(common);
  const PhysicsConfig physics = physics_of(common);

  TrainOutputs outputs;
  outputs.checkpoint = o.out;
  outputs.curve = o.curve.empty() ? fs::path(o.out + ".curve.csv") : fs::path(o.curve);
  outputs.on_epoch = [&out](const CurveRow& r) {
    out << "epoch " << r.epoch << (r.noise ? " noise" : "") << ": return "
        << (r.episodes ? fixed(r.mean_return, 1) : std::string("-")) << ", length "
        << (r.episodes ? fixed(r.mean_length, 1) : std::string("-")) << ", episodes "
        << r.episodes << ", step reward " << fixed(r.mean_step_reward, 3) << ", kl "
        << fixed(r.loss.approx_kl, 5) << ", clip " << fixed(r.loss.clip_fraction, 3) << "\n"
        << std::flush;
  };
  const TrainResult result = train(model, physics, task_config, config, outputs);
  out << "saved " << o.out << " after " << result.checkpoint.epoch << " epochs\n";
  return kExitOk;
}

// -------------------------------------------------------------------------

int cmd_eval(const Common& common, const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const PolicyCheckpoint ck = load_checkpoint(o.policy);
  const Task task = o.task.empty() ? ck.task() : task_from_string(o.task);
  TaskConfig task_config =
      o.task_config.empty() ? TaskConfig::defaults(task) : load_task_config(o.task_config);
  if (task_config.task != task) throw ValidationError("--task-config is for a different task");
  const RobotModel model = model_of(common);
  const PhysicsConfig physics = physics_of(common);

  const auto warning = task_mismatch(ck, task);
  if (warning) err << "warning: " << *warning << "\n";

  std::vector<TrajectoryRow> rows;
  auto record = [&](std::size_t, const StepResult& r) {
    const Posture command = joint_to_servo(JointAngles{r.applied}, model);
    rows.push_back(make_row(cycle_time(rows.size() + 1), r.state, command, r.reward.total,
                            r.status.reason));
  };
  const EvalSummary s = evaluate(model, physics, task_config, deterministic_policy(ck.net),
                                 EvalConfig{o.episodes, o.seed}, record);
  if (!o.out.empty()) write_file_atomic(o.out, format_trajectory(rows));

  out << "eval " << to_string(task) << ": " << s.episodes.size() << " episodes, success rate "
      << fixed(s.success_rate, 3) << ", mean return " << fixed(s.mean_return, 2)
      << ", mean length " << fixed(s.mean_length, 1) << ", mean dx " << fixed(s.mean_dx, 4)
      << " m, mean final u_prj " << fixed(s.mean_final_u_prj, 4) << ", mean yaw "
      << fixed(s.mean_yaw_deg, 2) << " deg";
  if (warning) out << ", warning: " << *warning;
  out << "\n";
  if (task == Task::kStandup) {
    for (InitialPose p : {InitialPose::kRightSide, InitialPose::kLeftSide, InitialPose::kBack}) {
      const PoseTally& t = s.by_pose[static_cast<std::size_t>(p)];
      out << "  " << to_string(p) << ": " << t.successes << "/" << t.episodes << " stood up\n";
    }
  }
  return kExitOk;
}

// -------------------------------------------------------------------------

int cmd_plot(const PlotOptions& o, std::ostream& out) {
  const CsvTable table =
      parse_csv(read_file(o.in), {"t", "x", "y", "roll", "pitch", "yaw", "theta0", "theta1",
                                  "theta2", "theta3", "theta4", "theta5"});
  write_file_atomic(o.out, render_plot(table));
  out << "plotted " << table.rows.size() << " rows to " << o.out << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------------

int cmd_serial_dump(const Common& common, const DumpOptions& o, std::ostream& out) {
  const RobotModel model = model_of(common);
  const PhysicsConfig physics = physics_of(common);
  std::string text;
  std::size_t lines = 0;

  if (!o.script.empty()) {
    const GaitScript script = load_script(o.script);
    const CommandTrace trace =
        script.loop ? unroll_script(script, o.cycles * loop_period(script)) : compile_script(script);
    const Simulator sim(model, physics);
    RobotState state;
    if (o.imu) state = sim.reset_to(initial_pose_from_string(o.pose.empty() ? "standing" : o.pose));
    for (std::size_t k = 0; k < trace.size(); ++k) {
      text += cmd_line(cycle_time(k), trace[k].posture) + "\n";
      ++lines;
      if (o.imu) {
        state = sim.step(state, trace[k].posture);
        text += imu_line(cycle_time(k + 1), state.q) + "\n";
      }
    }
  } else {
    const PolicyCheckpoint ck = load_checkpoint(o.policy);
    TaskConfig task = TaskConfig::defaults(ck.task());
    ChairEnv env(model, physics, task, o.seed);
    env.reset(o.pose.empty() ? (ck.task() == Task::kWalk ? InitialPose::kStanding
                                                         : InitialPose::kRightSide)
                             : initial_pose_from_string(o.pose));
    const ActionSource policy = deterministic_policy(ck.net);
    text += imu_line(0.0, env.state().q) + "\n";
    for (std::size_t k = 0; k < o.steps; ++k) {
      const Action a = env.clamp_action(policy(env.observation()));
      text += cmd_line(cycle_time(k), joint_to_servo(JointAngles{a}, model)) + "\n";
      ++lines;
      const StepResult r = env.step(a);
      text += imu_line(cycle_time(k + 1), r.state.q) + "\n";
      if (!r.status.live()) break;
    }
  }
  write_file_atomic(o.out, text);
  out << "wrote " << lines << " commands to " << o.out << "\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model, "Chair model file (default: $CHAIR_MODEL or the bundled model)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--physics", c.physics, "Physics config file")->check(CLI::ExistingFile);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chair robot gait simulator and trainer", "chairbot"};
  app.require_subcommand(1);
  Common common;
  GaitOptions gait;
  TrainOptions train_opts;
  EvalOptions eval;
  PlotOptions plot;
  DumpOptions dump;

  auto* g = app.add_subcommand("gait", "Play a gait script in simulation and log the trajectory");
  g->add_option("--script", gait.script, "Gait script file")->required()->check(CLI::ExistingFile);
  g->add_option("--pose", gait.pose, "Initial pose")
      ->check(CLI::IsMember({"standing", "right_side", "left_side", "back"}));
  g->add_option("--seconds", gait.seconds, "Duration; defaults to 10 s or one pass");
  g->add_option("--out", gait.out, "Trajectory CSV")->required();
  add_common(g, common);

  auto* t = app.add_subcommand("train", "Train a policy with PPO");
  t->add_option("--task", train_opts.task, "walk or standup")
      ->required()
      ->check(CLI::IsMember({"walk", "standup"}));
  t->add_option("--envs", train_opts.envs, "Parallel environments");
  t->add_option("--epochs", train_opts.epochs, "Training epochs (walk 100, standup 250)");
  t->add_option("--seed", train_opts.seed, "Random seed");
  t->add_flag("--noise", train_opts.noise, "Add a domain-randomization stage");
  t->add_option("--noise-epochs", train_opts.noise_epochs, "Epochs in the randomization stage")
      ->capture_default_str();
  t->add_option("--out", train_opts.out, "Checkpoint file")->required();
  t->add_option("--curve", train_opts.curve, "Learning-curve CSV (default: <out>.curve.csv)");
  t->add_option("--task-config", train_opts.task_config, "Task config file")->check(CLI::ExistingFile);
  t->add_option("--train-config", train_opts.train_config, "Training config file")
      ->check(CLI::ExistingFile);
  t->add_option("--threads", train_opts.threads, "Worker threads for stepping");
  add_common(t, common);

  auto* e = app.add_subcommand("eval", "Evaluate a trained policy");
  e->add_option("--task", eval.task, "walk or standup (default: the policy's task)")
      ->check(CLI::IsMember({"walk", "standup"}));
  e->add_option("--policy", eval.policy, "Checkpoint file")->required()->check(CLI::ExistingFile);
  e->add_option("--episodes", eval.episodes, "Episodes")->capture_default_str();
  e->add_option("--seed", eval.seed, "Random seed")->capture_default_str();
  e->add_option("--out", eval.out, "Trajectory CSV");
  e->add_option("--task-config", eval.task_config, "Task config file")->check(CLI::ExistingFile);
  add_common(e, common);

  auto* p = app.add_subcommand("plot", "Plot a trajectory CSV as SVG");
  p->add_option("--in", plot.in, "Trajectory CSV")->required()->check(CLI::ExistingFile);
  p->add_option("--out", plot.out, "SVG file")->required();

  auto* d = app.add_subcommand("serial-dump", "Write the serial command stream");
  auto* script_opt = d->add_option("--script", dump.script, "Gait script file")->check(CLI::ExistingFile);
  auto* policy_opt = d->add_option("--policy", dump.policy, "Checkpoint file")->check(CLI::ExistingFile);
  script_opt->excludes(policy_opt);
  d->add_option("--out", dump.out, "Output file")->required();
  d->add_option("--cycles", dump.cycles, "Repetitions of a looping script")->capture_default_str();
  d->add_option("--steps", dump.steps, "Closed-loop steps for --policy")->capture_default_str();
  d->add_option("--pose", dump.pose, "Initial pose")
      ->check(CLI::IsMember({"standing", "right_side", "left_side", "back"}));
  d->add_flag("--imu", dump.imu, "Interleave simulated IMU lines for --script");
  d->add_option("--seed", dump.seed, "Random seed")->capture_default_str();
  add_common(d, common);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    if (d->parsed() && dump.script.empty() == dump.policy.empty()) {
      throw CLI::ValidationError("serial-dump", "exactly one of --script and --policy is required");
    }
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_gait(common, gait, out);
    if (t->parsed()) return cmd_train(common, train_opts, out);
    if (e->parsed()) return cmd_eval(common, eval, out, err);
    if (p->parsed()) return cmd_plot(plot, out);
    return cmd_serial_dump(common, dump, out);
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace chairbot::cli
