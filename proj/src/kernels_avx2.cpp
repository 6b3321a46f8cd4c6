#include "sweeprl/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

#define SWEEPRL_AVX2 __attribute__((target("avx2,fma")))

namespace sweeprl::kernels {

namespace {

SWEEPRL_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

SWEEPRL_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Multiply and add kept separate (and the TU built with -ffp-contract=off)
// so results match the scalar kernel bit for bit.
SWEEPRL_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

SWEEPRL_AVX2 void matvec_avx2(const double* w, const double* x, const double* b, double* y,
                              std::size_t rows, std::size_t cols) {
  std::size_t r = 0;
  // Four rows share each load of x.
  for (; r + 4 <= rows; r += 4) {
    const double* w0 = w + r * cols;
    const double* w1 = w0 + cols;
    const double* w2 = w1 + cols;
    const double* w3 = w2 + cols;
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      const __m256d vx = _mm256_loadu_pd(x + c);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(w0 + c), vx, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(w1 + c), vx, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(w2 + c), vx, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(w3 + c), vx, a3);
    }
    double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
    for (; c < cols; ++c) {
      s0 += w0[c] * x[c];
      s1 += w1[c] * x[c];
      s2 += w2[c] * x[c];
      s3 += w3[c] * x[c];
    }
    y[r] = b[r] + s0;
    y[r + 1] = b[r + 1] + s1;
    y[r + 2] = b[r + 2] + s2;
    y[r + 3] = b[r + 3] + s3;
  }
  for (; r < rows; ++r) y[r] = b[r] + dot_avx2(w + r * cols, x, cols);
}

SWEEPRL_AVX2 void adam_avx2(double* param, const double* grad, double* m, double* v,
                            std::size_t n, const AdamCoeffs& c) {
  const __m256d b1 = _mm256_set1_pd(c.beta1);
  const __m256d b2 = _mm256_set1_pd(c.beta2);
  const __m256d omb1 = _mm256_set1_pd(1.0 - c.beta1);
  const __m256d omb2 = _mm256_set1_pd(1.0 - c.beta2);
  const __m256d bias1 = _mm256_set1_pd(c.bias1);
  const __m256d bias2 = _mm256_set1_pd(c.bias2);
  const __m256d lr = _mm256_set1_pd(c.lr);
  const __m256d eps = _mm256_set1_pd(c.eps);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    const __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                     _mm256_mul_pd(omb1, g));
    const __m256d vi = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                     _mm256_mul_pd(omb2, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_div_pd(mi, bias1);
    const __m256d v_hat = _mm256_div_pd(vi, bias2);
    const __m256d step =
        _mm256_div_pd(_mm256_mul_pd(lr, m_hat), _mm256_add_pd(_mm256_sqrt_pd(v_hat), eps));
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
  }
  for (; i < n; ++i) {
    const double g = grad[i];
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (g * g);
    const double m_hat = m[i] / c.bias1;
    const double v_hat = v[i] / c.bias2;
    param[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

constexpr Table kAvx2{Isa::Avx2, dot_avx2, axpy_avx2, matvec_avx2, adam_avx2};

}  // namespace

const Table* avx2_table() { return &kAvx2; }

}  // namespace sweeprl::kernels

#else

namespace sweeprl::kernels {
const Table* avx2_table() { return nullptr; }
}  // namespace sweeprl::kernels

#endif
