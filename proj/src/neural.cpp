#include "sweeprl/neural.hpp"

#include <algorithm>
#include <cmath>

#include "sweeprl/error.hpp"
#include "sweeprl/kernels.hpp"
#include "sweeprl/rng.hpp"

namespace sweeprl {

std::vector<std::size_t> Architecture::head_sizes() const {
  switch (heads) {
    case HeadLayout::ActorCritic: return {actions, 1};
    case HeadLayout::Q: return {actions};
    case HeadLayout::Dueling: return {1, actions};
  }
  return {};
}

Network::Network(Architecture arch) : arch_(std::move(arch)) {
  if (arch_.inputs == 0 || arch_.actions == 0)
    throw Error(ErrorCode::ShapeMismatch, "network needs inputs and actions");
  std::size_t offset = 0;
  auto add = [&offset](std::size_t in, std::size_t out) {
    DenseLayer l{in, out, offset, offset + in * out};
    offset += in * out + out;
    return l;
  };
  std::size_t width = arch_.inputs;
  for (const std::size_t h : arch_.hidden) {
    trunk_.push_back(add(width, h));
    width = h;
  }
  for (const std::size_t out : arch_.head_sizes()) heads_.push_back(add(width, out));
  params_.assign(offset, 0.0);
}

void Network::initialize(std::uint64_t seed, double policy_scale) {
  Rng rng(seed);
  auto fill = [&](const DenseLayer& l, double scale) {
    const double bound = scale / std::sqrt(static_cast<double>(l.in));
    for (std::size_t i = 0; i < l.in * l.out; ++i)
      params_[l.weight_offset + i] = rng.uniform(-bound, bound);
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(l.bias_offset), l.out, 0.0);
  };
  for (const auto& l : trunk_) fill(l, 1.0);
  for (std::size_t h = 0; h < heads_.size(); ++h) {
    const bool policy_logits = arch_.heads == HeadLayout::ActorCritic && h == 0;
    fill(heads_[h], policy_logits ? policy_scale : 1.0);
  }
}

void Network::forward(std::span<const double> input, Activations& acts) const {
  if (input.size() != arch_.inputs)
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(arch_.inputs) +
                                              " inputs, got " + std::to_string(input.size()));
  acts.trunk.resize(trunk_.size() + 1);
  acts.heads.resize(heads_.size());
  acts.trunk[0].assign(input.begin(), input.end());

  const std::span<const double> p = params_;
  for (std::size_t l = 0; l < trunk_.size(); ++l) {
    const DenseLayer& layer = trunk_[l];
    auto& out = acts.trunk[l + 1];
    out.resize(layer.out);
    kernels::matvec(p.subspan(layer.weight_offset, layer.in * layer.out), acts.trunk[l],
                    p.subspan(layer.bias_offset, layer.out), out);
    for (double& v : out) v = std::tanh(v);
  }
  for (std::size_t h = 0; h < heads_.size(); ++h) {
    const DenseLayer& layer = heads_[h];
    acts.heads[h].resize(layer.out);
    kernels::matvec(p.subspan(layer.weight_offset, layer.in * layer.out), acts.trunk.back(),
                    p.subspan(layer.bias_offset, layer.out), acts.heads[h]);
  }
}

void Network::backward(const Activations& acts,
                       const std::vector<std::span<const double>>& head_grads,
                       std::span<double> grad) const {
  if (grad.size() != params_.size() || head_grads.size() != heads_.size())
    throw Error(ErrorCode::ShapeMismatch, "gradient buffers do not match the network");

  const std::span<const double> p = params_;
  thread_local std::vector<double> upstream;
  thread_local std::vector<double> downstream;

  const auto& top = acts.trunk.back();
  upstream.assign(top.size(), 0.0);
  for (std::size_t h = 0; h < heads_.size(); ++h) {
    const DenseLayer& layer = heads_[h];
    const auto g = head_grads[h];
    if (g.size() != layer.out) throw Error(ErrorCode::ShapeMismatch, "head gradient length");
    for (std::size_t o = 0; o < layer.out; ++o) {
      if (g[o] == 0.0) continue;
      kernels::axpy(g[o], top, grad.subspan(layer.weight_offset + o * layer.in, layer.in));
      grad[layer.bias_offset + o] += g[o];
      kernels::axpy(g[o], p.subspan(layer.weight_offset + o * layer.in, layer.in), upstream);
    }
  }

  for (std::size_t l = trunk_.size(); l-- > 0;) {
    const DenseLayer& layer = trunk_[l];
    const auto& out = acts.trunk[l + 1];
    const auto& in = acts.trunk[l];
    // d tanh(z) = 1 - tanh(z)^2
    for (std::size_t o = 0; o < layer.out; ++o) upstream[o] *= 1.0 - out[o] * out[o];
    const bool need_input_grad = l > 0;
    if (need_input_grad) downstream.assign(layer.in, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double dz = upstream[o];
      if (dz == 0.0) continue;
      kernels::axpy(dz, in, grad.subspan(layer.weight_offset + o * layer.in, layer.in));
      grad[layer.bias_offset + o] += dz;
      if (need_input_grad)
        kernels::axpy(dz, p.subspan(layer.weight_offset + o * layer.in, layer.in), downstream);
    }
    if (need_input_grad) upstream.swap(downstream);
  }
}

Adam::Adam(std::size_t num_params, AdamConfig cfg)
    : cfg_(cfg), m_(num_params, 0.0), v_(num_params, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw Error(ErrorCode::ShapeMismatch, "Adam state does not match parameter count");
  ++t_;
  const kernels::AdamCoeffs c{cfg_.lr,
                              cfg_.beta1,
                              cfg_.beta2,
                              cfg_.eps,
                              1.0 - std::pow(cfg_.beta1, static_cast<double>(t_)),
                              1.0 - std::pow(cfg_.beta2, static_cast<double>(t_))};
  kernels::adam(params, grad, m_, v_, c);
}

void softmax(std::span<const double> logits, std::span<double> probs) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - mx);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
}

void log_softmax(std::span<const double> logits, std::span<double> out) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (const double z : logits) sum += std::exp(z - mx);
  const double lse = mx + std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
}

}  // namespace sweeprl
