#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sweeprl {

/// Output heads on top of the shared tanh trunk.
///   ActorCritic: head 0 = 8 policy logits, head 1 = scalar value
///   Q:           head 0 = 8 action values
///   Dueling:     head 0 = scalar state value, head 1 = 8 advantages
enum class HeadLayout : std::uint8_t { ActorCritic = 0, Q = 1, Dueling = 2 };

struct Architecture {
  std::size_t inputs = 19;
  std::vector<std::size_t> hidden{64, 64};
  HeadLayout heads = HeadLayout::ActorCritic;
  std::size_t actions = 8;

  std::vector<std::size_t> head_sizes() const;
  friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Weights W (out x in, row-major) followed by biases b (out), at an offset
/// into the flat parameter vector.
struct DenseLayer {
  std::size_t in;
  std::size_t out;
  std::size_t weight_offset;
  std::size_t bias_offset;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Per-sample forward record needed by backward().
struct Activations {
  std::vector<std::vector<double>> trunk;  // [0] = input, [l+1] = tanh output of layer l
  std::vector<std::vector<double>> heads;  // raw head outputs

  std::span<const double> features() const { return trunk.back(); }
};

class Network {
 public:
  Network() = default;
  explicit Network(Architecture arch);

  /// Fan-in scaled uniform weights, zero biases; the policy logits layer is
  /// additionally scaled by `policy_scale` so the initial policy is near uniform.
  void initialize(std::uint64_t seed, double policy_scale = 0.01);

  const Architecture& architecture() const noexcept { return arch_; }
  std::size_t num_params() const noexcept { return params_.size(); }
  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }

  const std::vector<DenseLayer>& trunk_layers() const noexcept { return trunk_; }
  const std::vector<DenseLayer>& head_layers() const noexcept { return heads_; }

  /// Throws Error(ShapeMismatch) when input has the wrong length.
  void forward(std::span<const double> input, Activations& acts) const;

  /// Accumulates into `grad` (num_params entries) the gradient of a scalar
  /// loss whose partials w.r.t. each raw head output are `head_grads`.
  void backward(const Activations& acts, const std::vector<std::span<const double>>& head_grads,
                std::span<double> grad) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  Architecture arch_;
  std::vector<DenseLayer> trunk_;
  std::vector<DenseLayer> heads_;
  std::vector<double> params_;
};

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t num_params, AdamConfig cfg);

  /// Bias-corrected Adam step. Throws Error(ShapeMismatch) on size mismatch.
  void step(std::span<double> params, std::span<const double> grad);

  const AdamConfig& config() const noexcept { return cfg_; }
  void set_lr(double lr) noexcept { cfg_.lr = lr; }
  std::uint64_t steps() const noexcept { return t_; }
  std::span<const double> first_moment() const noexcept { return m_; }
  std::span<const double> second_moment() const noexcept { return v_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

/// Max-shifted softmax; finite for any finite logits.
void softmax(std::span<const double> logits, std::span<double> probs);
void log_softmax(std::span<const double> logits, std::span<double> out);

}  // namespace sweeprl
