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

#include "chairbot/trainer.hpp"

#include <cmath>
#include <sstream>

#include "chairbot/format.hpp"
#include "chairbot/io.hpp"

namespace chairbot {

std::string curve_csv_header() {
  std::string h = "epoch,stage,mean_return,mean_length,episodes";
  for (std::size_t r = 1; r < kNumResetReasons; ++r) {
    h += ",reset_" + std::string(to_string(static_cast<ResetReason>(r)));
  }
  h += ",mean_step_reward,policy_loss,value_loss,entropy,approx_kl,clip_fraction";
  return h;
}

std::string curve_csv_row(const CurveRow& row) {
  auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string(); };
  std::string out = std::to_string(row.epoch) + "," + (row.noise ? "noise" : "main") + "," +
                    num(row.mean_return) + "," + num(row.mean_length) + "," +
                    std::to_string(row.episodes);
  for (std::size_t r = 1; r < kNumResetReasons; ++r) out += "," + std::to_string(row.resets[r]);
  out += "," + num(row.mean_step_reward) + "," + num(row.loss.policy_loss) + "," +
         num(row.loss.value_loss) + "," + num(row.loss.entropy) + "," + num(row.loss.approx_kl) +
         "," + num(row.loss.clip_fraction);
  return out;
}

namespace {

void write_curve(const std::filesystem::path& path, const std::vector<CurveRow>& rows) {
  if (path.empty()) return;
  std::string text = curve_csv_header() + "\n";
  for (const CurveRow& r : rows) text += curve_csv_row(r) + "\n";
  write_file_atomic(path, text);
}

Action column(const Eigen::MatrixXd& m, Eigen::Index c) {
  Action a{};
  for (std::size_t j = 0; j < kNumJoints; ++j) a[j] = m(static_cast<Eigen::Index>(j), c);
  return a;
}

}  // namespace

TrainResult train(const RobotModel& model, const PhysicsConfig& physics, const TaskConfig& task,
                  const TrainConfig& config, const TrainOutputs& outputs) {
  validate_train_config(config);
  validate_task_config(task);
  if (task.task != config.task) throw ValidationError("task config and training config disagree on the task");

  const auto n = static_cast<Eigen::Index>(config.n_envs);
  const auto horizon = static_cast<Eigen::Index>(config.horizon);
  std::mt19937_64 rng(config.seed);
  PolicyNet net = PolicyNet::for_model(config.hidden, model);
  net.initialize(rng, config.init_log_std);
  if (config.init_action) net.set_action_bias(*config.init_action);
  Adam optimizer(net.params().size(), config.lr);
  VecEnv envs(model, physics, task, config.n_envs, config.seed, config.threads);

  std::vector<Observation> obs(config.n_envs);
  for (std::size_t i = 0; i < config.n_envs; ++i) obs[i] = envs[i].observation();
  std::vector<Action> actions(config.n_envs);
  std::vector<StepResult> results(config.n_envs);
  std::vector<double> episode_return(config.n_envs, 0.0);
  RunningStats return_stats(1);
  Eigen::VectorXd discounted = Eigen::VectorXd::Zero(n);

  TrainResult result;
  result.checkpoint.config = config;
  result.checkpoint.net = net;
  result.checkpoint.rng_state = rng_to_string(rng);

  auto save = [&](const PolicyCheckpoint& ck) {
    if (!outputs.checkpoint.empty()) save_checkpoint(ck, outputs.checkpoint);
  };

  const int total_epochs = config.epochs + config.noise_epochs;
  for (int epoch = 1; epoch <= total_epochs; ++epoch) {
    const bool noise = epoch > config.epochs;
    if (noise && epoch == config.epochs + 1) envs.randomize(task.noise, config.seed + 0x5eedULL);

    CurveRow row;
    row.epoch = epoch;
    row.noise = noise;
    double return_sum = 0.0, length_sum = 0.0;

    RolloutBuffer buffer(n, horizon);
    for (Eigen::Index t = 0; t < horizon; ++t) {
      const Eigen::MatrixXd m = to_matrix(obs);
      const ActBatch act = act_batch(net, m, ActMode::kStochastic, rng);
      for (Eigen::Index i = 0; i < n; ++i) actions[static_cast<std::size_t>(i)] = column(act.action, i);
      envs.step(actions, results);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const Eigen::Index k = buffer.index(t, i);
        const StepResult& r = results[ui];
        buffer.obs.col(k) = m.col(i);
        buffer.raw.col(k) = act.raw.col(i);
        buffer.log_prob[k] = act.log_prob[i];
        buffer.value[k] = act.value[i];
        buffer.reward[k] = r.reward.total;
        buffer.done[static_cast<std::size_t>(k)] = r.status.live() ? 0 : 1;
        buffer.reason[static_cast<std::size_t>(k)] = r.status.reason;
        episode_return[ui] += r.reward.total;
        row.mean_step_reward += r.reward.total;
        if (!r.status.live()) {
          ++row.episodes;
          ++row.resets[static_cast<std::size_t>(r.status.reason)];
          return_sum += episode_return[ui];
          length_sum += r.status.step;
          episode_return[ui] = 0.0;
        }
        obs[ui] = r.observation;
      }
    }
    row.mean_step_reward /= static_cast<double>(buffer.size());
    if (row.episodes) {
      row.mean_return = return_sum / static_cast<double>(row.episodes);
      row.mean_length = length_sum / static_cast<double>(row.episodes);
    }
    buffer.bootstrap = net.critic().forward(net.critic_params(), net.obs_stats().normalize(to_matrix(obs))).row(0).transpose();

    if (config.normalize_rewards) {
      Eigen::MatrixXd sample(1, n);
      for (Eigen::Index t = 0; t < horizon; ++t) {
        for (Eigen::Index i = 0; i < n; ++i) {
          const Eigen::Index k = buffer.index(t, i);
          discounted[i] = discounted[i] * config.gamma + buffer.reward[k];
          sample(0, i) = discounted[i];
          if (buffer.done[static_cast<std::size_t>(k)]) discounted[i] = 0.0;
        }
        return_stats.update(sample);
      }
      buffer.reward /= std::sqrt(return_stats.var[0] + 1e-8);
    }

    const Advantages adv = compute_gae(buffer, config.gamma, config.lambda);
    try {
      row.loss = ppo_update(net, optimizer, buffer, adv, config, rng);
    } catch (const TrainingError&) {
      save(result.checkpoint);
      write_curve(outputs.curve, result.curve);
      throw;
    }
    net.obs_stats().update(buffer.obs);

    result.checkpoint.net = net;
    result.checkpoint.epoch = epoch;
    result.checkpoint.rng_state = rng_to_string(rng);
    result.curve.push_back(row);
    write_curve(outputs.curve, result.curve);
    if (outputs.on_epoch) outputs.on_epoch(row);
    if (config.save_interval > 0 && epoch % config.save_interval == 0) save(result.checkpoint);
  }
  save(result.checkpoint);
  return result;
}

// ---------------------------------------------------------------------------

ActionSource deterministic_policy(PolicyNet net) {
  return [net = std::move(net), rng = std::mt19937_64(0)](const Observation& o) mutable {
    return policy_act(net, o, ActMode::kDeterministic, rng).action;
  };
}

ActionSource random_policy(const RobotModel& model, std::uint64_t seed) {
  Action low{}, high{};
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    low[j] = model.joints[j].min_deg * kDegToRad;
    high[j] = model.joints[j].max_deg * kDegToRad;
  }
  return [low, high, rng = std::mt19937_64(seed)](const Observation&) mutable {
    Action a{};
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      a[j] = std::uniform_real_distribution<double>(low[j], high[j])(rng);
    }
    return a;
  };
}

EvalSummary evaluate(const RobotModel& model, const PhysicsConfig& physics, const TaskConfig& task,
                     const ActionSource& policy, const EvalConfig& config,
                     const std::function<void(std::size_t, const StepResult&)>& on_step) {
  if (config.episodes == 0) throw ValidationError("evaluation needs at least one episode");
  ChairEnv env(model, physics, task, config.seed);
  EvalSummary summary;
  double yaw_sum = 0.0;
  std::size_t yaw_count = 0;
  for (std::size_t e = 0; e < config.episodes; ++e) {
    const InitialPose pose =
        task.task == Task::kWalk ? InitialPose::kStanding
                                 : task.standup.initial_poses[e % task.standup.initial_poses.size()];
    env.reset(pose);
    EpisodeResult ep;
    ep.pose = pose;
    const Vec3 start = env.state().p;
    double episode_yaw = 0.0;
    for (;;) {
      const StepResult r = env.step(policy(env.observation()));
      if (on_step) on_step(e, r);
      const double up = u_prj(r.state.q);
      const double yaw = quat_to_rpy(r.state.q).yaw;
      episode_yaw += yaw;
      yaw_sum += yaw;
      ++yaw_count;
      ep.total_return += r.reward.total;
      ep.max_u_prj = std::max(ep.max_u_prj, up);
      if (!r.status.live()) {
        ep.length = r.status.step;
        ep.reason = r.status.reason;
        ep.final_u_prj = up;
        ep.dx = r.state.p.x - start.x;
        ep.dy = r.state.p.y - start.y;
        break;
      }
    }
    ep.mean_yaw_deg = episode_yaw / ep.length;
    ep.success = task.task == Task::kWalk ? ep.reason == ResetReason::kMaxEpisode
                                          : ep.max_u_prj > task.standup.standing_gate;
    PoseTally& tally = summary.by_pose[static_cast<std::size_t>(pose)];
    ++tally.episodes;
    if (ep.success) ++tally.successes;
    summary.mean_return += ep.total_return;
    summary.mean_length += ep.length;
    summary.mean_dx += ep.dx;
    summary.mean_final_u_prj += ep.final_u_prj;
    summary.success_rate += ep.success ? 1.0 : 0.0;
    summary.episodes.push_back(ep);
  }
  const double inv = 1.0 / static_cast<double>(config.episodes);
  summary.mean_return *= inv;
  summary.mean_length *= inv;
  summary.mean_dx *= inv;
  summary.mean_final_u_prj *= inv;
  summary.success_rate *= inv;
  summary.mean_yaw_deg = yaw_sum / static_cast<double>(yaw_count);
  return summary;
}

}  // namespace chairbot
