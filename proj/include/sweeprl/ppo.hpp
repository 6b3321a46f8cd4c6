#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sweeprl/neural.hpp"
#include "sweeprl/rng.hpp"

namespace sweeprl {

struct PpoConfig {
  double gamma = 0.99;
  double lam = 0.95;
  double clip_eps = 0.2;
  int epochs = 4;
  std::size_t minibatch = 64;
  double lr = 3e-4;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  int episodes_per_update = 8;
  bool normalize_advantages = true;
  /// Value head regresses returns divided by a running RMS of observed
  /// returns; shaped returns span several orders of magnitude.
  bool normalize_returns = true;
  /// Global gradient-norm clip per minibatch; <= 0 disables.
  double max_grad_norm = 0.0;

  /// Throws Error(InvalidConfig) when a field is out of range.
  void validate() const;
};

/// pi_new(a|s) / pi_old(a|s) from log-probabilities.
double ratio(double log_prob_new, double log_prob_old);

/// min(r A, clip(r, 1 - eps, 1 + eps) A).
double clipped_term(double r, double advantage, double eps);

struct Transition {
  std::vector<double> obs;
  int action = 0;
  double log_prob_old = 0.0;
  double base_reward = 0.0;
  double shaped_reward = 0.0;
  double value_old = 0.0;
  bool done = false;
};

struct Episode {
  std::vector<Transition> steps;
  /// V(s_T) for an episode cut short without finishing; 0 after completion.
  double bootstrap_value = 0.0;
  bool kept = true;
};

struct Advantages {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// GAE over one episode: delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t,
/// A_t = delta_t + gamma lam (1 - done_t) A_{t+1}, returns = A + V. The
/// value after the last step is `bootstrap_value`.
Advantages compute_gae(std::span<const double> rewards, std::span<const double> values,
                       std::span<const std::uint8_t> dones, double gamma, double lam,
                       double bootstrap_value = 0.0);

/// Kept episodes flattened into training samples.
struct RolloutBuffer {
  std::vector<Episode> episodes;

  // Filled by finalize().
  std::vector<const Transition*> samples;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t kept_transitions() const;

  /// GAE on shaped rewards over kept episodes only, then optional advantage
  /// normalization to zero mean and unit (population) std.
  void finalize(const PpoConfig& cfg);
};

struct PpoSample {
  std::span<const double> obs;
  int action;
  double log_prob_old;
  double advantage;
  double value_target;  // in value-head units
};

struct PpoLoss {
  double total = 0.0;
  double policy = 0.0;   // -mean clipped term
  double value = 0.0;    // mean squared error
  double entropy = 0.0;  // mean policy entropy
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
};

/// Loss = -mean(clipped) + value_coef * mean((V - target)^2)
///        - entropy_coef * mean(H). Adds d loss / d params into `grad`.
PpoLoss ppo_loss(const Network& net, std::span<const PpoSample> batch, const PpoConfig& cfg,
                 std::span<double> grad);

struct PpoUpdateStats {
  bool skipped = false;
  std::size_t samples = 0;
  double first_minibatch_ratio = 0.0;
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
};

struct PolicyStep {
  int action;
  double log_prob;
  double value;  // in return units
};

class PpoAgent {
 public:
  PpoAgent(Architecture arch, PpoConfig cfg, std::uint64_t init_seed);

  /// Samples an action (or takes the argmax when greedy).
  PolicyStep act(std::span<const double> obs, Rng& rng, bool greedy = false);

  /// Action probabilities and value (return units) for one observation.
  void evaluate(std::span<const double> obs, std::span<double> probs, double& value);

  /// Runs cfg.epochs passes of shuffled minibatches over the finalized
  /// buffer. Throws Error(EmptyBuffer) when no kept transitions remain.
  PpoUpdateStats update(RolloutBuffer& buffer, Rng& rng);

  const Network& network() const noexcept { return net_; }
  Network& network() noexcept { return net_; }
  const PpoConfig& config() const noexcept { return cfg_; }
  double return_scale() const noexcept { return return_scale_; }

 private:
  void observe_returns(std::span<const double> returns);

  Network net_;
  PpoConfig cfg_;
  Adam adam_;
  Activations acts_;
  std::vector<double> logp_;
  double return_scale_ = 1.0;
  double returns_sq_sum_ = 0.0;
  std::uint64_t returns_count_ = 0;
};

}  // namespace sweeprl
