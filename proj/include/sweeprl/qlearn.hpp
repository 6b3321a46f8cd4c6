#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sweeprl/neural.hpp"
#include "sweeprl/rng.hpp"

namespace sweeprl {

struct DqnConfig {
  double gamma = 0.99;
  double lr = 1e-3;
  std::size_t batch = 64;
  std::size_t capacity = 50000;
  long sync_period = 1000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  long epsilon_decay_steps = 20000;
  /// Updates begin once the memory holds this many transitions.
  std::size_t warmup = 1000;
  /// Huber (delta 1) on the TD error; false gives plain squared error.
  bool huber = true;
  bool dueling = false;
  double max_grad_norm = 10.0;
};

/// Linear epsilon schedule; flat at epsilon_end after the decay window.
double epsilon_at(const DqnConfig& cfg, long step);

/// r + gamma * q_next_max * (1 - done).
double td_target(double reward, double q_next_max, double gamma, bool done);

/// Q_k = v + a_k - mean(a).
std::vector<double> dueling_merge(double v, std::span<const double> advantages);

/// Action values from a forward record of a Q or Dueling network.
std::vector<double> q_values(const Network& net, const Activations& acts);

/// Fixed-capacity ring buffer of (s, a, r, s', done) with uniform sampling.
class ReplayMemory {
 public:
  ReplayMemory(std::size_t capacity, std::size_t obs_size);

  void push(std::span<const double> obs, int action, double reward,
            std::span<const double> next_obs, bool done);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t obs_size() const noexcept { return obs_size_; }

  /// `count` indices drawn uniformly with replacement from the stored items.
  std::vector<std::size_t> sample_indices(std::size_t count, Rng& rng) const;

  std::span<const double> obs(std::size_t i) const;
  std::span<const double> next_obs(std::size_t i) const;
  int action(std::size_t i) const { return actions_[i]; }
  double reward(std::size_t i) const { return rewards_[i]; }
  bool done(std::size_t i) const { return dones_[i] != 0; }

 private:
  std::size_t capacity_;
  std::size_t obs_size_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::vector<double> obs_;
  std::vector<double> next_obs_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
};

/// Frozen copy of the online network, refreshed every `sync_period` steps.
class TargetNet {
 public:
  TargetNet(const Network& online, long sync_period)
      : net_(online), sync_period_(sync_period) {}

  void sync(const Network& online) { net_ = online; }

  /// Syncs when `step` is a positive multiple of the period. Returns true on sync.
  bool maybe_sync(const Network& online, long step);

  const Network& network() const noexcept { return net_; }
  long sync_period() const noexcept { return sync_period_; }

 private:
  Network net_;
  long sync_period_;
};

struct DqnBatchItem {
  std::span<const double> obs;
  int action;
  double target;
};

/// Mean Huber (or squared) loss of Q(s, a) against fixed targets; adds the
/// parameter gradient into `grad`.
double dqn_loss(const Network& net, std::span<const DqnBatchItem> batch, bool huber,
                std::span<double> grad);

class DqnAgent {
 public:
  DqnAgent(Architecture arch, DqnConfig cfg, std::uint64_t init_seed);

  /// Epsilon-greedy over Q; greedy when epsilon is 0.
  int act(std::span<const double> obs, double epsilon, Rng& rng);

  /// One minibatch step against the target network. Throws
  /// Error(InsufficientSamples) when memory holds fewer than cfg.batch items.
  double update(const ReplayMemory& memory, const TargetNet& target, Rng& rng);

  const Network& network() const noexcept { return net_; }
  Network& network() noexcept { return net_; }
  const DqnConfig& config() const noexcept { return cfg_; }

 private:
  Network net_;
  DqnConfig cfg_;
  Adam adam_;
  Activations acts_;
};

}  // namespace sweeprl
