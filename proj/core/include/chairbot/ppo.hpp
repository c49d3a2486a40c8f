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

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chairbot/config_file.hpp"
#include "chairbot/env.hpp"
#include "chairbot/error.hpp"
#include "chairbot/policy.hpp"

namespace chairbot {

struct TrainConfig {
  Task task = Task::kWalk;
  std::size_t n_envs = 1024;
  int horizon = 32;
  int epochs = 100;
  // Extra epochs run with domain randomization after the main stage.
  int noise_epochs = 0;
  int update_epochs = 5;
  int minibatches = 4;
  double gamma = 0.99;
  double lambda = 0.95;
  double clip = 0.2;
  double lr = 3e-4;
  double entropy_coef = 0.0;
  double value_coef = 0.5;
  double max_grad_norm = 1.0;
  int hidden = 64;
  double init_log_std = -1.0;
  // Deterministic action of the untrained policy; unset means the range midpoint.
  std::optional<Action> init_action;
  bool normalize_advantages = true;
  bool normalize_rewards = true;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  // Checkpoint every this many epochs; 0 writes only the final one.
  int save_interval = 0;

  /// Per-task settings used by the bundled train_<task>.cfg files.
  static TrainConfig defaults(Task task);
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Throws ValidationError unless every count and coefficient is in range.
void validate_train_config(const TrainConfig& config);
TrainConfig train_config_from(const ConfigFile& file);
ConfigFile to_config_file(const TrainConfig& config);

/// Transitions of N environments over T steps. Column t * N + i holds
/// environment i at step t.
struct RolloutBuffer {
  Eigen::Index n_envs = 0;
  Eigen::Index horizon = 0;
  Eigen::MatrixXd obs;  // 40 x TN, raw observations
  Eigen::MatrixXd raw;  // 6 x TN, pre-squash actions
  Eigen::VectorXd log_prob;
  Eigen::VectorXd value;
  Eigen::VectorXd reward;
  std::vector<std::uint8_t> done;
  std::vector<ResetReason> reason;
  // Value of the observation that follows the last step, per environment.
  Eigen::VectorXd bootstrap;

  RolloutBuffer() = default;
  RolloutBuffer(Eigen::Index n_envs, Eigen::Index horizon);
  Eigen::Index size() const { return n_envs * horizon; }
  Eigen::Index index(Eigen::Index t, Eigen::Index env) const { return t * n_envs + env; }
};

struct Advantages {
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;  // advantages + values
};

/// Generalized advantage estimation. A done flag at step t cuts both the
/// bootstrap and the recursion after t. The advantages are not normalized.
Advantages compute_gae(const RolloutBuffer& buffer, double gamma, double lambda);

/// Shifts and scales to mean 0 and standard deviation 1.
Eigen::VectorXd normalize_advantages(const Eigen::VectorXd& advantages);

struct Minibatch {
  Eigen::MatrixXd obs;
  Eigen::MatrixXd raw;
  Eigen::VectorXd old_log_prob;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;
};

struct LossStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double total = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;
};

/// Raised when a loss or parameter becomes non-finite.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Clipped surrogate + value_coef * mean squared value error - entropy_coef *
/// entropy. When `grad` is non-null the gradient with respect to the flat
/// parameters is added to it.
LossStats ppo_loss(const PolicyNet& net, const Minibatch& batch, const TrainConfig& config,
                   Eigen::VectorXd* grad);

class Adam {
 public:
  explicit Adam(Eigen::Index size = 0, double lr = 3e-4, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

 private:
  Eigen::VectorXd m_, v_;
  long long t_ = 0;
  double lr_, beta1_, beta2_, eps_;
};

/// Scales `grad` so its norm is at most `max_norm`; returns the norm before.
double clip_grad_norm(Eigen::VectorXd& grad, double max_norm);

/// Runs update_epochs passes of shuffled minibatches over the buffer.
/// Returns statistics averaged over all minibatches.
LossStats ppo_update(PolicyNet& net, Adam& optimizer, const RolloutBuffer& buffer,
                     const Advantages& advantages, const TrainConfig& config, std::mt19937_64& rng);

}  // namespace chairbot
