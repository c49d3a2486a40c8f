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

#include "chairbot/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chairbot/format.hpp"

namespace chairbot {

void validate_train_config(const TrainConfig& c) {
  auto require = [](bool ok, const char* message) {
    if (!ok) throw ValidationError(message);
  };
  require(c.n_envs > 0, "n_envs must be positive");
  require(c.horizon > 0, "horizon must be positive");
  require(c.epochs >= 0 && c.noise_epochs >= 0 && c.epochs + c.noise_epochs > 0,
          "epochs must be non-negative and not all zero");
  require(c.update_epochs > 0, "update_epochs must be positive");
  require(c.minibatches > 0, "minibatches must be positive");
  require(static_cast<std::size_t>(c.minibatches) <= c.n_envs * static_cast<std::size_t>(c.horizon),
          "more minibatches than transitions");
  require(c.gamma >= 0.0 && c.gamma <= 1.0, "gamma must lie in [0, 1]");
  require(c.lambda >= 0.0 && c.lambda <= 1.0, "lambda must lie in [0, 1]");
  require(c.clip > 0.0 && c.clip < 1.0, "clip must lie in (0, 1)");
  require(std::isfinite(c.lr) && c.lr >= 0.0, "lr must be finite and >= 0");
  require(std::isfinite(c.entropy_coef) && c.entropy_coef >= 0.0, "entropy_coef must be >= 0");
  require(std::isfinite(c.value_coef) && c.value_coef > 0.0, "value_coef must be positive");
  require(c.max_grad_norm > 0.0, "max_grad_norm must be positive");
  require(c.hidden > 0, "hidden must be positive");
  require(c.init_log_std >= kMinLogStd && c.init_log_std <= kMaxLogStd,
          "init_log_std must lie in [-5, 2]");
  if (c.init_action) {
    for (double a : *c.init_action) require(std::isfinite(a), "init_action must be finite");
  }
  require(c.threads > 0, "threads must be positive");
  require(c.save_interval >= 0, "save_interval must be >= 0");
}

TrainConfig TrainConfig::defaults(Task task) {
  TrainConfig c;
  c.task = task;
  if (task == Task::kStandup) {
    c.epochs = 250;
    // Legs spread toward a_expand, inside the fold-safe region.
    c.init_action = Action{-0.5, -0.5, 0.0, 0.5, 0.0, -0.5};
  }
  return c;
}

TrainConfig train_config_from(const ConfigFile& file) {
  file.require_known({"task", "n_envs", "horizon", "epochs", "noise_epochs", "update_epochs",
                      "minibatches", "gamma", "lambda", "clip", "lr", "entropy_coef",
                      "value_coef", "max_grad_norm", "hidden", "init_log_std", "init_action",
                      "normalize_advantages", "normalize_rewards", "seed", "threads",
                      "save_interval"});
  TrainConfig c;
  if (auto t = file.get("task")) c.task = task_from_string(*t);
  auto count = [&file](std::string_view key, long long fallback) {
    const long long v = file.get_int(key, fallback);
    if (v < 0) throw ParseError(std::string(key) + " must be >= 0");
    return v;
  };
  c.n_envs = static_cast<std::size_t>(count("n_envs", static_cast<long long>(c.n_envs)));
  c.horizon = static_cast<int>(count("horizon", c.horizon));
  c.epochs = static_cast<int>(count("epochs", c.epochs));
  c.noise_epochs = static_cast<int>(count("noise_epochs", c.noise_epochs));
  c.update_epochs = static_cast<int>(count("update_epochs", c.update_epochs));
  c.minibatches = static_cast<int>(count("minibatches", c.minibatches));
  c.gamma = file.get_double("gamma", c.gamma);
  c.lambda = file.get_double("lambda", c.lambda);
  c.clip = file.get_double("clip", c.clip);
  c.lr = file.get_double("lr", c.lr);
  c.entropy_coef = file.get_double("entropy_coef", c.entropy_coef);
  c.value_coef = file.get_double("value_coef", c.value_coef);
  c.max_grad_norm = file.get_double("max_grad_norm", c.max_grad_norm);
  c.hidden = static_cast<int>(count("hidden", c.hidden));
  c.init_log_std = file.get_double("init_log_std", c.init_log_std);
  if (auto a = file.get("init_action")) {
    Action action{};
    std::size_t j = 0;
    std::string_view rest = *a;
    for (;;) {
      const std::size_t comma = rest.find(',');
      if (j == kNumJoints) throw ParseError("init_action needs 6 comma-separated angles");
      action[j++] = parse_double(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (j != kNumJoints) throw ParseError("init_action needs 6 comma-separated angles");
    c.init_action = action;
  }
  c.normalize_advantages = file.get_bool("normalize_advantages", c.normalize_advantages);
  c.normalize_rewards = file.get_bool("normalize_rewards", c.normalize_rewards);
  if (auto s = file.get("seed")) {
    std::uint64_t seed = 0;
    std::istringstream in(*s);
    if (!(in >> seed) || !in.eof()) throw ParseError("seed must be an unsigned integer");
    c.seed = seed;
  }
  c.threads = static_cast<std::size_t>(count("threads", static_cast<long long>(c.threads)));
  c.save_interval = static_cast<int>(count("save_interval", c.save_interval));
  validate_train_config(c);
  return c;
}

ConfigFile to_config_file(const TrainConfig& c) {
  ConfigFile f;
  f.set("task", std::string(to_string(c.task)));
  f.set("n_envs", std::to_string(c.n_envs));
  f.set("horizon", std::to_string(c.horizon));
  f.set("epochs", std::to_string(c.epochs));
  f.set("noise_epochs", std::to_string(c.noise_epochs));
  f.set("update_epochs", std::to_string(c.update_epochs));
  f.set("minibatches", std::to_string(c.minibatches));
  f.set("gamma", c.gamma);
  f.set("lambda", c.lambda);
  f.set("clip", c.clip);
  f.set("lr", c.lr);
  f.set("entropy_coef", c.entropy_coef);
  f.set("value_coef", c.value_coef);
  f.set("max_grad_norm", c.max_grad_norm);
  f.set("hidden", std::to_string(c.hidden));
  f.set("init_log_std", c.init_log_std);
  if (c.init_action) {
    std::string text;
    for (double a : *c.init_action) text += (text.empty() ? "" : ",") + format_double(a);
    f.set("init_action", text);
  }
  f.set("normalize_advantages", std::string(c.normalize_advantages ? "true" : "false"));
  f.set("normalize_rewards", std::string(c.normalize_rewards ? "true" : "false"));
  f.set("seed", std::to_string(c.seed));
  f.set("threads", std::to_string(c.threads));
  f.set("save_interval", std::to_string(c.save_interval));
  return f;
}

// ---------------------------------------------------------------------------

RolloutBuffer::RolloutBuffer(Eigen::Index n, Eigen::Index t)
    : n_envs(n),
      horizon(t),
      obs(kObservationSize, n * t),
      raw(kNumJoints, n * t),
      log_prob(n * t),
      value(n * t),
      reward(n * t),
      done(static_cast<std::size_t>(n * t), 0),
      reason(static_cast<std::size_t>(n * t), ResetReason::kNone),
      bootstrap(Eigen::VectorXd::Zero(n)) {}

Advantages compute_gae(const RolloutBuffer& b, double gamma, double lambda) {
  Advantages out;
  out.advantages.resize(b.size());
  for (Eigen::Index i = 0; i < b.n_envs; ++i) {
    double next_value = b.bootstrap[i];
    double next_advantage = 0.0;
    for (Eigen::Index t = b.horizon - 1; t >= 0; --t) {
      const Eigen::Index k = b.index(t, i);
      const double live = b.done[static_cast<std::size_t>(k)] ? 0.0 : 1.0;
      const double delta = b.reward[k] + gamma * next_value * live - b.value[k];
      next_advantage = delta + gamma * lambda * live * next_advantage;
      out.advantages[k] = next_advantage;
      next_value = b.value[k];
    }
  }
  out.returns = out.advantages + b.value;
  return out;
}

Eigen::VectorXd normalize_advantages(const Eigen::VectorXd& a) {
  if (a.size() == 0) return a;
  const double mean = a.mean();
  const double var = (a.array() - mean).square().mean();
  return ((a.array() - mean) / (std::sqrt(var) + 1e-8)).matrix();
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

std::string describe(const Minibatch& batch, const Eigen::VectorXd& ratio) {
  std::ostringstream out;
  out << "non-finite loss on a minibatch of " << batch.obs.cols() << ": advantages ["
      << batch.advantages.minCoeff() << ", " << batch.advantages.maxCoeff() << "], returns ["
      << batch.returns.minCoeff() << ", " << batch.returns.maxCoeff() << "], ratio ["
      << ratio.minCoeff() << ", " << ratio.maxCoeff() << "]";
  return out.str();
}

}  // namespace

LossStats ppo_loss(const PolicyNet& net, const Minibatch& batch, const TrainConfig& config,
                   Eigen::VectorXd* grad) {
  const Eigen::Index n = batch.obs.cols();
  if (n == 0) throw Error("empty minibatch");
  const double inv_n = 1.0 / static_cast<double>(n);

  const Eigen::MatrixXd x = net.obs_stats().normalize(batch.obs);
  Mlp::Cache actor_cache, critic_cache;
  const Eigen::MatrixXd mean = net.actor().forward(net.actor_params(), x, &actor_cache);
  const Eigen::MatrixXd value = net.critic().forward(net.critic_params(), x, &critic_cache);
  const Eigen::VectorXd log_prob = net.log_prob(mean, batch.raw);
  const Eigen::VectorXd ratio = (log_prob - batch.old_log_prob).array().exp().matrix();
  const auto ls = net.log_std();

  LossStats s;
  Eigen::VectorXd d_log_prob(n);
  double clipped_count = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    const double r = ratio[b];
    const double a = batch.advantages[b];
    const double unclipped = r * a;
    const double clipped = std::clamp(r, 1.0 - config.clip, 1.0 + config.clip) * a;
    s.policy_loss -= std::min(unclipped, clipped) * inv_n;
    d_log_prob[b] = unclipped <= clipped ? -unclipped * inv_n : 0.0;
    if (std::abs(r - 1.0) > config.clip) clipped_count += 1.0;
    s.approx_kl += ((r - 1.0) - std::log(r)) * inv_n;
    const double e = value(0, b) - batch.returns[b];
    s.value_loss += e * e * inv_n;
  }
  s.clip_fraction = clipped_count * inv_n;
  for (Eigen::Index j = 0; j < ls.size(); ++j) s.entropy += ls[j] + 0.5 * (1.0 + kLogTwoPi);
  s.total = s.policy_loss + config.value_coef * s.value_loss - config.entropy_coef * s.entropy;
  if (!std::isfinite(s.total)) throw TrainingError(describe(batch, ratio));
  if (!grad) return s;

  Eigen::MatrixXd d_mean(mean.rows(), n);
  Eigen::VectorXd d_log_std = Eigen::VectorXd::Constant(ls.size(), -config.entropy_coef);
  for (Eigen::Index j = 0; j < mean.rows(); ++j) {
    const double var = std::exp(2.0 * ls[j]);
    for (Eigen::Index b = 0; b < n; ++b) {
      const double diff = batch.raw(j, b) - mean(j, b);
      d_mean(j, b) = d_log_prob[b] * diff / var;
      d_log_std[j] += d_log_prob[b] * (diff * diff / var - 1.0);
    }
  }
  const Eigen::MatrixXd d_value =
      ((value.row(0).transpose() - batch.returns) * (2.0 * config.value_coef * inv_n)).transpose();

  net.actor().backward(net.actor_params(), actor_cache, d_mean,
                       grad->segment(net.actor_offset(), net.actor().parameter_count()));
  grad->segment(net.log_std_offset(), ls.size()) += d_log_std;
  net.critic().backward(net.critic_params(), critic_cache, d_value,
                        grad->segment(net.critic_offset(), net.critic().parameter_count()));
  return s;
}

// ---------------------------------------------------------------------------

Adam::Adam(Eigen::Index size, double lr, double beta1, double beta2, double eps)
    : m_(Eigen::VectorXd::Zero(size)),
      v_(Eigen::VectorXd::Zero(size)),
      lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (grad.size() != m_.size() || params.size() != m_.size()) throw Error("Adam: size mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  if (lr_ == 0.0) return;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

double clip_grad_norm(Eigen::VectorXd& grad, double max_norm) {
  const double norm = grad.norm();
  if (norm > max_norm) grad *= max_norm / norm;
  return norm;
}

LossStats ppo_update(PolicyNet& net, Adam& optimizer, const RolloutBuffer& buffer,
                     const Advantages& adv, const TrainConfig& config, std::mt19937_64& rng) {
  const Eigen::Index total = buffer.size();
  const Eigen::VectorXd advantages =
      config.normalize_advantages ? normalize_advantages(adv.advantages) : adv.advantages;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index per_batch = total / config.minibatches;

  LossStats mean;
  int count = 0;
  Minibatch mb;
  Eigen::VectorXd grad(net.params().size());
  for (int epoch = 0; epoch < config.update_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int m = 0; m < config.minibatches; ++m) {
      const Eigen::Index begin = m * per_batch;
      const Eigen::Index size = (m + 1 == config.minibatches) ? total - begin : per_batch;
      mb.obs.resize(buffer.obs.rows(), size);
      mb.raw.resize(buffer.raw.rows(), size);
      mb.old_log_prob.resize(size);
      mb.advantages.resize(size);
      mb.returns.resize(size);
      for (Eigen::Index k = 0; k < size; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(begin + k)];
        mb.obs.col(k) = buffer.obs.col(src);
        mb.raw.col(k) = buffer.raw.col(src);
        mb.old_log_prob[k] = buffer.log_prob[src];
        mb.advantages[k] = advantages[src];
        mb.returns[k] = adv.returns[src];
      }
      grad.setZero();
      LossStats s = ppo_loss(net, mb, config, &grad);
      s.grad_norm = clip_grad_norm(grad, config.max_grad_norm);
      if (!grad.allFinite()) throw TrainingError("non-finite gradient");
      optimizer.step(net.params(), grad);
      net.clamp_log_std();

      mean.policy_loss += s.policy_loss;
      mean.value_loss += s.value_loss;
      mean.entropy += s.entropy;
      mean.total += s.total;
      mean.approx_kl += s.approx_kl;
      mean.clip_fraction += s.clip_fraction;
      mean.grad_norm += s.grad_norm;
      ++count;
    }
  }
  const double inv = 1.0 / count;
  mean.policy_loss *= inv;
  mean.value_loss *= inv;
  mean.entropy *= inv;
  mean.total *= inv;
  mean.approx_kl *= inv;
  mean.clip_fraction *= inv;
  mean.grad_norm *= inv;
  if (!net.params().allFinite()) throw TrainingError("non-finite parameters after update");
  return mean;
}

}  // namespace chairbot
