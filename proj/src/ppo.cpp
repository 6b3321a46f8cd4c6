#include "sweeprl/ppo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "sweeprl/error.hpp"

namespace sweeprl {

void PpoConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidConfig, "gamma must be in (0, 1]");
  if (!(lam >= 0.0 && lam <= 1.0)) throw Error(ErrorCode::InvalidConfig, "lambda must be in [0, 1]");
  if (!(clip_eps > 0.0)) throw Error(ErrorCode::InvalidConfig, "clip epsilon must be positive");
  if (epochs < 1 || minibatch < 1 || episodes_per_update < 1)
    throw Error(ErrorCode::InvalidConfig, "epochs, minibatch and episodes per update must be >= 1");
  if (!(lr >= 0.0)) throw Error(ErrorCode::InvalidConfig, "learning rate must be non-negative");
}

double ratio(double log_prob_new, double log_prob_old) {
  return std::exp(log_prob_new - log_prob_old);
}

double clipped_term(double r, double advantage, double eps) {
  return std::min(r * advantage, std::clamp(r, 1.0 - eps, 1.0 + eps) * advantage);
}

Advantages compute_gae(std::span<const double> rewards, std::span<const double> values,
                       std::span<const std::uint8_t> dones, double gamma, double lam,
                       double bootstrap_value) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "rewards, values and dones must align");
  Advantages out{std::vector<double>(n), std::vector<double>(n)};
  double next_value = bootstrap_value;
  double next_adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double live = dones[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * next_value * live - values[t];
    next_adv = delta + gamma * lam * live * next_adv;
    out.advantages[t] = next_adv;
    out.returns[t] = next_adv + values[t];
    next_value = values[t];
  }
  return out;
}

std::size_t RolloutBuffer::kept_transitions() const {
  std::size_t n = 0;
  for (const auto& ep : episodes)
    if (ep.kept) n += ep.steps.size();
  return n;
}

void RolloutBuffer::finalize(const PpoConfig& cfg) {
  samples.clear();
  advantages.clear();
  returns.clear();
  std::vector<double> r, v;
  std::vector<std::uint8_t> d;
  for (const auto& ep : episodes) {
    if (!ep.kept) continue;
    r.clear();
    v.clear();
    d.clear();
    for (const auto& t : ep.steps) {
      r.push_back(t.shaped_reward);
      v.push_back(t.value_old);
      d.push_back(t.done ? 1 : 0);
      samples.push_back(&t);
    }
    const auto gae = compute_gae(r, v, d, cfg.gamma, cfg.lam, ep.bootstrap_value);
    advantages.insert(advantages.end(), gae.advantages.begin(), gae.advantages.end());
    returns.insert(returns.end(), gae.returns.begin(), gae.returns.end());
  }
  if (cfg.normalize_advantages && advantages.size() > 1) {
    const double n = static_cast<double>(advantages.size());
    const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
    double var = 0.0;
    for (const double a : advantages) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / n);
    for (double& a : advantages) a = sd > 0.0 ? (a - mean) / sd : 0.0;
  }
}

PpoLoss ppo_loss(const Network& net, std::span<const PpoSample> batch, const PpoConfig& cfg,
                 std::span<double> grad) {
  const std::size_t actions = net.architecture().actions;
  if (net.architecture().heads != HeadLayout::ActorCritic)
    throw Error(ErrorCode::ShapeMismatch, "PPO needs an actor-critic network");

  PpoLoss loss;
  if (batch.empty()) return loss;
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  Activations acts;
  std::vector<double> logp(actions), probs(actions), dlogits(actions);
  std::array<double, 1> dvalue{};

  for (const PpoSample& s : batch) {
    net.forward(s.obs, acts);
    const auto& logits = acts.heads[0];
    const double value = acts.heads[1][0];
    log_softmax(logits, logp);
    double entropy = 0.0;
    for (std::size_t k = 0; k < actions; ++k) {
      probs[k] = std::exp(logp[k]);
      entropy -= probs[k] * logp[k];
    }

    const auto a = static_cast<std::size_t>(s.action);
    const double r = ratio(logp[a], s.log_prob_old);
    const double unclipped = r * s.advantage;
    const double clipped = std::clamp(r, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * s.advantage;
    const double term = std::min(unclipped, clipped);
    // The objective depends on r only through the unclipped branch.
    const double dterm_dr = unclipped <= clipped ? s.advantage : 0.0;
    const double err = value - s.value_target;

    loss.policy -= term * inv_n;
    loss.value += err * err * inv_n;
    loss.entropy += entropy * inv_n;
    loss.mean_ratio += r * inv_n;
    if (std::abs(r - 1.0) > cfg.clip_eps) loss.clip_fraction += inv_n;

    const double dlogp = -inv_n * dterm_dr * r;
    for (std::size_t k = 0; k < actions; ++k) {
      const double indicator = k == a ? 1.0 : 0.0;
      dlogits[k] = dlogp * (indicator - probs[k]) +
                   cfg.entropy_coef * inv_n * probs[k] * (logp[k] + entropy);
    }
    dvalue[0] = cfg.value_coef * inv_n * 2.0 * err;
    net.backward(acts, {std::span<const double>(dlogits), std::span<const double>(dvalue)}, grad);
  }
  loss.total = loss.policy + cfg.value_coef * loss.value - cfg.entropy_coef * loss.entropy;
  return loss;
}

PpoAgent::PpoAgent(Architecture arch, PpoConfig cfg, std::uint64_t init_seed)
    : net_(std::move(arch)), cfg_(cfg) {
  cfg_.validate();
  if (net_.architecture().heads != HeadLayout::ActorCritic)
    throw Error(ErrorCode::ShapeMismatch, "PPO needs an actor-critic network");
  net_.initialize(init_seed);
  adam_ = Adam(net_.num_params(), AdamConfig{cfg_.lr});
}

void PpoAgent::evaluate(std::span<const double> obs, std::span<double> probs, double& value) {
  net_.forward(obs, acts_);
  softmax(acts_.heads[0], probs);
  value = acts_.heads[1][0] * return_scale_;
}

PolicyStep PpoAgent::act(std::span<const double> obs, Rng& rng, bool greedy) {
  net_.forward(obs, acts_);
  const auto& logits = acts_.heads[0];
  logp_.resize(logits.size());
  const std::span<double> lp(logp_);
  log_softmax(logits, lp);

  int action = 0;
  if (greedy) {
    action = static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
  } else {
    const double u = rng.uniform();
    double cum = 0.0;
    action = static_cast<int>(lp.size()) - 1;
    for (std::size_t k = 0; k < lp.size(); ++k) {
      cum += std::exp(lp[k]);
      if (u < cum) {
        action = static_cast<int>(k);
        break;
      }
    }
  }
  return {action, lp[static_cast<std::size_t>(action)], acts_.heads[1][0] * return_scale_};
}

void PpoAgent::observe_returns(std::span<const double> returns) {
  for (const double r : returns) returns_sq_sum_ += r * r;
  returns_count_ += returns.size();
  if (returns_count_ > 0)
    return_scale_ = std::max(1.0, std::sqrt(returns_sq_sum_ / static_cast<double>(returns_count_)));
}

PpoUpdateStats PpoAgent::update(RolloutBuffer& buffer, Rng& rng) {
  buffer.finalize(cfg_);
  const std::size_t n = buffer.samples.size();
  if (n == 0) throw Error(ErrorCode::EmptyBuffer, "every episode in the batch was truncated");

  if (cfg_.normalize_returns) observe_returns(buffer.returns);

  std::vector<PpoSample> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Transition& t = *buffer.samples[i];
    all[i] = {t.obs, t.action, t.log_prob_old, buffer.advantages[i],
              buffer.returns[i] / return_scale_};
  }

  PpoUpdateStats stats;
  stats.samples = n;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<PpoSample> mb;
  std::vector<double> grad(net_.num_params());
  std::size_t minibatches = 0;

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += cfg_.minibatch) {
      const std::size_t stop = std::min(n, start + cfg_.minibatch);
      mb.clear();
      for (std::size_t i = start; i < stop; ++i) mb.push_back(all[order[i]]);
      std::fill(grad.begin(), grad.end(), 0.0);
      const PpoLoss loss = ppo_loss(net_, mb, cfg_, grad);
      if (minibatches == 0) stats.first_minibatch_ratio = loss.mean_ratio;

      if (cfg_.max_grad_norm > 0.0) {
        double sq = 0.0;
        for (const double g : grad) sq += g * g;
        const double norm = std::sqrt(sq);
        if (norm > cfg_.max_grad_norm) {
          const double s = cfg_.max_grad_norm / norm;
          for (double& g : grad) g *= s;
        }
      }
      adam_.step(net_.params(), grad);

      ++minibatches;
      stats.mean_ratio += loss.mean_ratio;
      stats.clip_fraction += loss.clip_fraction;
      stats.policy_loss += loss.policy;
      stats.value_loss += loss.value;
      stats.entropy += loss.entropy;
    }
  }
  const double m = static_cast<double>(minibatches);
  stats.mean_ratio /= m;
  stats.clip_fraction /= m;
  stats.policy_loss /= m;
  stats.value_loss /= m;
  stats.entropy /= m;
  return stats;
}

}  // namespace sweeprl
