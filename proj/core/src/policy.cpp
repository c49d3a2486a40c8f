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

#include "chairbot/policy.hpp"

#include <algorithm>
#include <cmath>

#include "chairbot/error.hpp"
#include "chairbot/geom.hpp"

namespace chairbot {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
constexpr double kLogTwo = 0.69314718055994530941723212145818;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

// ---------------------------------------------------------------------------

RunningStats::RunningStats(Eigen::Index size)
    : mean(Eigen::VectorXd::Zero(size)), var(Eigen::VectorXd::Ones(size)) {}

void RunningStats::update(const Eigen::MatrixXd& batch) {
  if (batch.cols() == 0) return;
  if (batch.rows() != mean.size()) throw Error("RunningStats: dimension mismatch");
  const double n = static_cast<double>(batch.cols());
  const Eigen::VectorXd batch_mean = batch.rowwise().mean();
  const Eigen::VectorXd batch_var =
      (batch.colwise() - batch_mean).array().square().rowwise().sum() / n;
  if (count == 0.0) {
    mean = batch_mean;
    var = batch_var;
    count = n;
    return;
  }
  const double total = count + n;
  const Eigen::VectorXd delta = batch_mean - mean;
  mean += delta * (n / total);
  var = ((var * count + batch_var * n).array() + delta.array().square() * (count * n / total)) / total;
  count = total;
}

Eigen::MatrixXd RunningStats::normalize(const Eigen::MatrixXd& x, double clip) const {
  if (count == 0.0) return x;
  const Eigen::ArrayXd inv_std = (var.array() + 1e-8).rsqrt();
  Eigen::MatrixXd out = ((x.colwise() - mean).array().colwise() * inv_std).matrix();
  return out.cwiseMax(-clip).cwiseMin(clip);
}

// ---------------------------------------------------------------------------

Mlp::Mlp(Eigen::Index in, Eigen::Index hidden, Eigen::Index out) : in_(in), hidden_(hidden), out_(out) {
  if (in <= 0 || hidden <= 0 || out <= 0) throw ValidationError("layer sizes must be positive");
}

Eigen::Index Mlp::parameter_count() const {
  return hidden_ * in_ + hidden_ + hidden_ * hidden_ + hidden_ + out_ * hidden_ + out_;
}

namespace {

struct Layers {
  Eigen::Map<const Eigen::MatrixXd> w1, w2, w3;
  Eigen::Map<const Eigen::VectorXd> b1, b2, b3;
};

struct GradLayers {
  Eigen::Map<Eigen::MatrixXd> w1, w2, w3;
  Eigen::Map<Eigen::VectorXd> b1, b2, b3;
};

template <typename Out, typename Ptr>
Out slice(Ptr p, Eigen::Index in, Eigen::Index hidden, Eigen::Index out) {
  Ptr w1 = p;
  Ptr b1 = w1 + hidden * in;
  Ptr w2 = b1 + hidden;
  Ptr b2 = w2 + hidden * hidden;
  Ptr w3 = b2 + hidden;
  Ptr b3 = w3 + out * hidden;
  return Out{{w1, hidden, in}, {w2, hidden, hidden}, {w3, out, hidden},
             {b1, hidden},     {b2, hidden},         {b3, out}};
}

}  // namespace

Eigen::MatrixXd Mlp::forward(const Eigen::Ref<const Eigen::VectorXd>& params, const Eigen::MatrixXd& x,
                             Cache* cache) const {
  if (params.size() != parameter_count()) throw Error("Mlp: parameter vector has the wrong size");
  if (x.rows() != in_) throw Error("Mlp: input has the wrong dimension");
  const Layers l = slice<Layers>(params.data(), in_, hidden_, out_);
  Eigen::MatrixXd h1 = ((l.w1 * x).colwise() + l.b1).array().tanh().matrix();
  Eigen::MatrixXd h2 = ((l.w2 * h1).colwise() + l.b2).array().tanh().matrix();
  Eigen::MatrixXd y = (l.w3 * h2).colwise() + l.b3;
  if (cache) {
    cache->x = x;
    cache->h1 = std::move(h1);
    cache->h2 = std::move(h2);
  }
  return y;
}

void Mlp::backward(const Eigen::Ref<const Eigen::VectorXd>& params, const Cache& cache,
                   const Eigen::MatrixXd& d_out, Eigen::Ref<Eigen::VectorXd> grad) const {
  const Layers l = slice<Layers>(params.data(), in_, hidden_, out_);
  GradLayers g = slice<GradLayers>(grad.data(), in_, hidden_, out_);
  g.w3.noalias() += d_out * cache.h2.transpose();
  g.b3 += d_out.rowwise().sum();
  const Eigen::MatrixXd d2 =
      ((l.w3.transpose() * d_out).array() * (1.0 - cache.h2.array().square())).matrix();
  g.w2.noalias() += d2 * cache.h1.transpose();
  g.b2 += d2.rowwise().sum();
  const Eigen::MatrixXd d1 =
      ((l.w2.transpose() * d2).array() * (1.0 - cache.h1.array().square())).matrix();
  g.w1.noalias() += d1 * cache.x.transpose();
  g.b1 += d1.rowwise().sum();
}

void Mlp::initialize(Eigen::Ref<Eigen::VectorXd> params, std::mt19937_64& rng, double out_gain) const {
  GradLayers g = slice<GradLayers>(params.data(), in_, hidden_, out_);
  auto fill = [&rng](Eigen::Map<Eigen::MatrixXd>& w, double gain) {
    std::normal_distribution<double> n(0.0, gain / std::sqrt(static_cast<double>(w.cols())));
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = n(rng);
    }
  };
  fill(g.w1, 1.0);
  fill(g.w2, 1.0);
  if (out_gain == 0.0) {
    g.w3.setZero();
  } else {
    fill(g.w3, out_gain);
  }
  g.b1.setZero();
  g.b2.setZero();
  g.b3.setZero();
}

// ---------------------------------------------------------------------------

PolicyNet::PolicyNet(Eigen::Index hidden, const Action& low, const Action& high)
    : actor_(kObservationSize, hidden, kNumJoints),
      critic_(kObservationSize, hidden, 1),
      params_(Eigen::VectorXd::Zero(actor_.parameter_count() + kNumJoints + critic_.parameter_count())),
      obs_stats_(kObservationSize),
      low_(low),
      high_(high) {
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (!(low[j] < high[j])) throw ValidationError("action range is empty");
  }
}

PolicyNet PolicyNet::for_model(Eigen::Index hidden, const RobotModel& model) {
  Action low{}, high{};
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    low[j] = model.joints[j].min_deg * kDegToRad;
    high[j] = model.joints[j].max_deg * kDegToRad;
  }
  return PolicyNet(hidden, low, high);
}

void PolicyNet::initialize(std::mt19937_64& rng, double init_log_std) {
  actor_.initialize(actor_params(), rng, 0.01);
  log_std().setConstant(init_log_std);
  clamp_log_std();
  critic_.initialize(critic_params(), rng, 1.0);
}

void PolicyNet::set_action_bias(const Action& action) {
  auto bias = actor_params().tail(kNumJoints);
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const double mid = 0.5 * (high_[j] + low_[j]);
    const double half = 0.5 * (high_[j] - low_[j]);
    const double t = std::clamp((action[j] - mid) / half, -0.999, 0.999);
    bias[static_cast<Eigen::Index>(j)] = std::atanh(t);
  }
}

void PolicyNet::clamp_log_std() {
  auto ls = log_std();
  ls = ls.cwiseMax(kMinLogStd).cwiseMin(kMaxLogStd);
}

Eigen::MatrixXd PolicyNet::squash(const Eigen::MatrixXd& u) const {
  Eigen::MatrixXd out(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double mid = 0.5 * (high_[j] + low_[j]);
    const double half = 0.5 * (high_[j] - low_[j]);
    out.row(j) = (mid + half * u.row(j).array().tanh()).matrix();
  }
  return out;
}

Eigen::VectorXd PolicyNet::log_prob(const Eigen::MatrixXd& mean, const Eigen::MatrixXd& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u.cols());
  const auto ls = log_std();
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double sigma = std::exp(ls[j]);
    const double log_half = std::log(0.5 * (high_[j] - low_[j]));
    for (Eigen::Index b = 0; b < u.cols(); ++b) {
      const double z = (u(j, b) - mean(j, b)) / sigma;
      // log(1 - tanh(u)^2) in a form that stays finite for large |u|.
      const double log_dtanh = 2.0 * (kLogTwo - u(j, b) - softplus(-2.0 * u(j, b)));
      out[b] += -0.5 * z * z - ls[j] - 0.5 * kLogTwoPi - log_half - log_dtanh;
    }
  }
  return out;
}

bool operator==(const PolicyNet& a, const PolicyNet& b) {
  return a.hidden() == b.hidden() && a.params_.size() == b.params_.size() &&
         a.params_ == b.params_ && a.obs_stats_.count == b.obs_stats_.count &&
         a.obs_stats_.mean == b.obs_stats_.mean && a.obs_stats_.var == b.obs_stats_.var &&
         a.low_ == b.low_ && a.high_ == b.high_;
}

// ---------------------------------------------------------------------------

ActBatch act_batch(const PolicyNet& net, const Eigen::MatrixXd& obs, ActMode mode,
                   std::mt19937_64& rng) {
  if (!obs.allFinite()) throw Error("policy input is not finite");
  const Eigen::MatrixXd x = net.obs_stats().normalize(obs);
  const Eigen::MatrixXd mean = net.actor().forward(net.actor_params(), x);
  ActBatch out;
  out.value = net.critic().forward(net.critic_params(), x).row(0).transpose();
  if (mode == ActMode::kDeterministic) {
    out.raw = mean;
  } else {
    out.raw = mean;
    std::normal_distribution<double> n(0.0, 1.0);
    const auto ls = net.log_std();
    for (Eigen::Index b = 0; b < out.raw.cols(); ++b) {
      for (Eigen::Index j = 0; j < out.raw.rows(); ++j) out.raw(j, b) += std::exp(ls[j]) * n(rng);
    }
  }
  out.action = net.squash(out.raw);
  out.log_prob = net.log_prob(mean, out.raw);
  return out;
}

ActResult policy_act(const PolicyNet& net, const Observation& obs, ActMode mode,
                     std::mt19937_64& rng) {
  const ActBatch b = act_batch(net, to_matrix(std::span(&obs, 1)), mode, rng);
  ActResult r;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    r.action[j] = b.action(static_cast<Eigen::Index>(j), 0);
    r.raw[j] = b.raw(static_cast<Eigen::Index>(j), 0);
  }
  r.log_prob = b.log_prob[0];
  r.value = b.value[0];
  return r;
}

Eigen::MatrixXd to_matrix(std::span<const Observation> obs) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(kObservationSize), static_cast<Eigen::Index>(obs.size()));
  for (std::size_t b = 0; b < obs.size(); ++b) {
    out.col(static_cast<Eigen::Index>(b)) =
        Eigen::Map<const Eigen::VectorXd>(obs[b].data(), kObservationSize);
  }
  return out;
}

}  // namespace chairbot
