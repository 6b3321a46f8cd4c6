#include "sweeprl/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace sweeprl::kernels {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_neon(const double* w, const double* x, const double* b, double* y, std::size_t rows,
                 std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = b[r] + dot_neon(w + r * cols, x, cols);
}

void adam_neon(double* param, const double* grad, double* m, double* v, std::size_t n,
               const AdamCoeffs& c) {
  const float64x2_t b1 = vdupq_n_f64(c.beta1), b2 = vdupq_n_f64(c.beta2);
  const float64x2_t omb1 = vdupq_n_f64(1.0 - c.beta1), omb2 = vdupq_n_f64(1.0 - c.beta2);
  const float64x2_t bias1 = vdupq_n_f64(c.bias1), bias2 = vdupq_n_f64(c.bias2);
  const float64x2_t lr = vdupq_n_f64(c.lr), eps = vdupq_n_f64(c.eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t g = vld1q_f64(grad + i);
    const float64x2_t mi = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(omb1, g));
    const float64x2_t vi =
        vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(omb2, vmulq_f64(g, g)));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t step = vdivq_f64(vmulq_f64(lr, vdivq_f64(mi, bias1)),
                                       vaddq_f64(vsqrtq_f64(vdivq_f64(vi, bias2)), eps));
    vst1q_f64(param + i, vsubq_f64(vld1q_f64(param + i), step));
  }
  for (; i < n; ++i) {
    const double g = grad[i];
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (g * g);
    param[i] -= c.lr * (m[i] / c.bias1) / (std::sqrt(v[i] / c.bias2) + c.eps);
  }
}

constexpr Table kNeon{Isa::Neon, dot_neon, axpy_neon, matvec_neon, adam_neon};

}  // namespace

const Table* neon_table() { return &kNeon; }

}  // namespace sweeprl::kernels

#else

namespace sweeprl::kernels {
const Table* neon_table() { return nullptr; }
}  // namespace sweeprl::kernels

#endif
