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
#include <random>

#include "chairbot/env.hpp"
#include "chairbot/model.hpp"

namespace chairbot {

/// Running mean and population variance, merged batch by batch.
struct RunningStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  double count = 0.0;

  explicit RunningStats(Eigen::Index size = 0);
  /// Columns of `batch` are samples.
  void update(const Eigen::MatrixXd& batch);
  /// (x - mean) / sqrt(var + 1e-8), clipped to [-clip, clip]. Identity while count == 0.
  Eigen::MatrixXd normalize(const Eigen::MatrixXd& x, double clip = 5.0) const;
};

/// Fully connected in -> hidden -> hidden -> out with tanh hidden units and a
/// linear output. Parameters live in a caller-owned flat vector laid out as
/// W1, b1, W2, b2, W3, b3 with column-major weights.
class Mlp {
 public:
  Mlp() = default;
  Mlp(Eigen::Index in, Eigen::Index hidden, Eigen::Index out);

  Eigen::Index in() const { return in_; }
  Eigen::Index hidden() const { return hidden_; }
  Eigen::Index out() const { return out_; }
  Eigen::Index parameter_count() const;

  struct Cache {
    Eigen::MatrixXd x, h1, h2;
  };

  /// Columns of `x` are samples. Fills `cache` when non-null.
  Eigen::MatrixXd forward(const Eigen::Ref<const Eigen::VectorXd>& params, const Eigen::MatrixXd& x,
                          Cache* cache = nullptr) const;
  /// Adds d(loss)/d(params) to `grad` given d(loss)/d(output).
  void backward(const Eigen::Ref<const Eigen::VectorXd>& params, const Cache& cache,
                const Eigen::MatrixXd& d_out, Eigen::Ref<Eigen::VectorXd> grad) const;
  /// Gaussian weights with std gain / sqrt(fan_in), zero biases. The output
  /// layer uses `out_gain`.
  void initialize(Eigen::Ref<Eigen::VectorXd> params, std::mt19937_64& rng, double out_gain) const;

 private:
  Eigen::Index in_ = 0, hidden_ = 0, out_ = 0;
};

inline constexpr double kMinLogStd = -5.0;
inline constexpr double kMaxLogStd = 2.0;

/// Gaussian actor with tanh squashing onto the joint ranges, plus a critic.
/// Flat parameter layout: actor MLP, log-std, critic MLP.
class PolicyNet {
 public:
  PolicyNet() = default;
  PolicyNet(Eigen::Index hidden, const Action& low, const Action& high);
  static PolicyNet for_model(Eigen::Index hidden, const RobotModel& model);

  void initialize(std::mt19937_64& rng, double init_log_std);
  /// Sets the actor output bias so a zero hidden response maps to `action`.
  void set_action_bias(const Action& action);

  Eigen::Index hidden() const { return actor_.hidden(); }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  auto actor_params() { return params_.segment(0, actor_.parameter_count()); }
  auto actor_params() const { return params_.segment(0, actor_.parameter_count()); }
  auto log_std() { return params_.segment(actor_.parameter_count(), kNumJoints); }
  auto log_std() const { return params_.segment(actor_.parameter_count(), kNumJoints); }
  auto critic_params() { return params_.tail(critic_.parameter_count()); }
  auto critic_params() const { return params_.tail(critic_.parameter_count()); }
  Eigen::Index actor_offset() const { return 0; }
  Eigen::Index log_std_offset() const { return actor_.parameter_count(); }
  Eigen::Index critic_offset() const { return actor_.parameter_count() + kNumJoints; }

  /// Keeps log-std inside [kMinLogStd, kMaxLogStd].
  void clamp_log_std();

  RunningStats& obs_stats() { return obs_stats_; }
  const RunningStats& obs_stats() const { return obs_stats_; }
  const Action& low() const { return low_; }
  const Action& high() const { return high_; }

  /// Maps pre-squash samples (6 x B) to joint angles.
  Eigen::MatrixXd squash(const Eigen::MatrixXd& u) const;
  /// Log-density of squashed actions, from their pre-squash values.
  Eigen::VectorXd log_prob(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& u) const;

  friend bool operator==(const PolicyNet& a, const PolicyNet& b);

 private:
  Mlp actor_;
  Mlp critic_;
  Eigen::VectorXd params_;
  RunningStats obs_stats_;
  Action low_{};
  Action high_{};
};

enum class ActMode { kStochastic, kDeterministic };

struct ActBatch {
  Eigen::MatrixXd action;  // 6 x B, joint angles
  Eigen::MatrixXd raw;     // 6 x B, pre-squash samples
  Eigen::VectorXd log_prob;
  Eigen::VectorXd value;
};

/// Columns of `obs` are raw observations. Throws Error on non-finite input.
ActBatch act_batch(const PolicyNet& net, const Eigen::MatrixXd& obs, ActMode mode,
                   std::mt19937_64& rng);

struct ActResult {
  Action action{};
  Action raw{};
  double log_prob = 0.0;
  double value = 0.0;
};

ActResult policy_act(const PolicyNet& net, const Observation& obs, ActMode mode,
                     std::mt19937_64& rng);

Eigen::MatrixXd to_matrix(std::span<const Observation> obs);

}  // namespace chairbot
