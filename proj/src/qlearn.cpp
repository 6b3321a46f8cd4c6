#include "sweeprl/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sweeprl/error.hpp"

namespace sweeprl {

double epsilon_at(const DqnConfig& cfg, long step) {
  if (cfg.epsilon_decay_steps <= 0 || step >= cfg.epsilon_decay_steps) return cfg.epsilon_end;
  const double frac = static_cast<double>(step) / static_cast<double>(cfg.epsilon_decay_steps);
  return cfg.epsilon_start + frac * (cfg.epsilon_end - cfg.epsilon_start);
}

double td_target(double reward, double q_next_max, double gamma, bool done) {
  return reward + (done ? 0.0 : gamma * q_next_max);
}

std::vector<double> dueling_merge(double v, std::span<const double> advantages) {
  const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) /
                      static_cast<double>(advantages.size());
  std::vector<double> q(advantages.size());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = v + advantages[k] - mean;
  return q;
}

std::vector<double> q_values(const Network& net, const Activations& acts) {
  switch (net.architecture().heads) {
    case HeadLayout::Q: return acts.heads[0];
    case HeadLayout::Dueling: return dueling_merge(acts.heads[0][0], acts.heads[1]);
    case HeadLayout::ActorCritic: break;
  }
  throw Error(ErrorCode::ShapeMismatch, "network has no Q head");
}

ReplayMemory::ReplayMemory(std::size_t capacity, std::size_t obs_size)
    : capacity_(capacity), obs_size_(obs_size), obs_(capacity * obs_size),
      next_obs_(capacity * obs_size), actions_(capacity), rewards_(capacity), dones_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::InvalidConfig, "replay capacity must be positive");
}

void ReplayMemory::push(std::span<const double> obs, int action, double reward,
                        std::span<const double> next_obs, bool done) {
  if (obs.size() != obs_size_ || next_obs.size() != obs_size_)
    throw Error(ErrorCode::ShapeMismatch, "observation length does not match replay memory");
  std::copy(obs.begin(), obs.end(), obs_.begin() + static_cast<std::ptrdiff_t>(head_ * obs_size_));
  std::copy(next_obs.begin(), next_obs.end(),
            next_obs_.begin() + static_cast<std::ptrdiff_t>(head_ * obs_size_));
  actions_[head_] = action;
  rewards_[head_] = reward;
  dones_[head_] = done ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::vector<std::size_t> ReplayMemory::sample_indices(std::size_t count, Rng& rng) const {
  if (size_ == 0) throw Error(ErrorCode::InsufficientSamples, "replay memory is empty");
  std::vector<std::size_t> idx(count);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(size_));
  return idx;
}

std::span<const double> ReplayMemory::obs(std::size_t i) const {
  return std::span<const double>(obs_).subspan(i * obs_size_, obs_size_);
}

std::span<const double> ReplayMemory::next_obs(std::size_t i) const {
  return std::span<const double>(next_obs_).subspan(i * obs_size_, obs_size_);
}

bool TargetNet::maybe_sync(const Network& online, long step) {
  if (sync_period_ <= 0 || step <= 0 || step % sync_period_ != 0) return false;
  sync(online);
  return true;
}

double dqn_loss(const Network& net, std::span<const DqnBatchItem> batch, bool huber,
                std::span<double> grad) {
  if (batch.empty()) return 0.0;
  const HeadLayout layout = net.architecture().heads;
  if (layout == HeadLayout::ActorCritic)
    throw Error(ErrorCode::ShapeMismatch, "network has no Q head");
  const std::size_t actions = net.architecture().actions;
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  Activations acts;
  std::vector<double> dq(actions), dadv(actions);
  std::vector<double> dv(1);
  double loss = 0.0;
  for (const DqnBatchItem& item : batch) {
    net.forward(item.obs, acts);
    const auto q = q_values(net, acts);
    const auto a = static_cast<std::size_t>(item.action);
    const double err = q[a] - item.target;
    double dloss_dq;
    if (huber) {
      const double abs_err = std::abs(err);
      loss += (abs_err <= 1.0 ? 0.5 * err * err : abs_err - 0.5) * inv_n;
      dloss_dq = std::clamp(err, -1.0, 1.0) * inv_n;
    } else {
      loss += err * err * inv_n;
      dloss_dq = 2.0 * err * inv_n;
    }
    std::fill(dq.begin(), dq.end(), 0.0);
    dq[a] = dloss_dq;
    if (layout == HeadLayout::Q) {
      net.backward(acts, {std::span<const double>(dq)}, grad);
    } else {
      // Q_k = v + a_k - mean(a)
      const double sum = std::accumulate(dq.begin(), dq.end(), 0.0);
      dv[0] = sum;
      for (std::size_t k = 0; k < actions; ++k)
        dadv[k] = dq[k] - sum / static_cast<double>(actions);
      net.backward(acts, {std::span<const double>(dv), std::span<const double>(dadv)}, grad);
    }
  }
  return loss;
}

DqnAgent::DqnAgent(Architecture arch, DqnConfig cfg, std::uint64_t init_seed)
    : net_(std::move(arch)), cfg_(cfg) {
  if (net_.architecture().heads == HeadLayout::ActorCritic)
    throw Error(ErrorCode::ShapeMismatch, "DQN needs a Q or dueling network");
  net_.initialize(init_seed);
  adam_ = Adam(net_.num_params(), AdamConfig{cfg_.lr});
}

int DqnAgent::act(std::span<const double> obs, double epsilon, Rng& rng) {
  const auto actions = net_.architecture().actions;
  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return static_cast<int>(rng.below(actions));
  net_.forward(obs, acts_);
  const auto q = q_values(net_, acts_);
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

double DqnAgent::update(const ReplayMemory& memory, const TargetNet& target, Rng& rng) {
  if (memory.size() < cfg_.batch)
    throw Error(ErrorCode::InsufficientSamples,
                "replay memory holds " + std::to_string(memory.size()) + " < batch " +
                    std::to_string(cfg_.batch));
  const auto idx = memory.sample_indices(cfg_.batch, rng);
  std::vector<DqnBatchItem> batch;
  batch.reserve(idx.size());
  Activations next;
  for (const std::size_t i : idx) {
    double q_next_max = 0.0;
    if (!memory.done(i)) {
      target.network().forward(memory.next_obs(i), next);
      const auto q = q_values(target.network(), next);
      q_next_max = *std::max_element(q.begin(), q.end());
    }
    batch.push_back({memory.obs(i), memory.action(i),
                     td_target(memory.reward(i), q_next_max, cfg_.gamma, memory.done(i))});
  }
  std::vector<double> grad(net_.num_params(), 0.0);
  const double loss = dqn_loss(net_, batch, cfg_.huber, grad);
  if (cfg_.max_grad_norm > 0.0) {
    double sq = 0.0;
    for (const double g : grad) sq += g * g;
    const double norm = std::sqrt(sq);
    if (norm > cfg_.max_grad_norm)
      for (double& g : grad) g *= cfg_.max_grad_norm / norm;
  }
  adam_.step(net_.params(), grad);
  return loss;
}

}  // namespace sweeprl
