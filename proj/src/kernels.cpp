#include "sweeprl/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace sweeprl::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* w, const double* x, const double* b, double* y, std::size_t rows,
                   std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = b[r] + dot_scalar(w + r * cols, x, cols);
}

void adam_scalar(double* param, const double* grad, double* m, double* v, std::size_t n,
                 const AdamCoeffs& c) {
  const double one_m_b1 = 1.0 - c.beta1;
  const double one_m_b2 = 1.0 - c.beta2;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    m[i] = c.beta1 * m[i] + one_m_b1 * g;
    v[i] = c.beta2 * v[i] + one_m_b2 * (g * g);
    const double m_hat = m[i] / c.bias1;
    const double v_hat = v[i] / c.bias2;
    param[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

constexpr Table kScalar{Isa::Scalar, dot_scalar, axpy_scalar, matvec_scalar, adam_scalar};

const Table* detect() {
  if (const char* env = std::getenv("SWEEPRL_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && cpu_supports(Isa::Avx2)) return avx2_table();
    if (want == "neon" && cpu_supports(Isa::Neon)) return neon_table();
  }
  if (cpu_supports(Isa::Avx2)) return avx2_table();
  if (cpu_supports(Isa::Neon)) return neon_table();
  return &kScalar;
}

const Table*& current() {
  static const Table* table = detect();
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

const Table& scalar_table() { return kScalar; }

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return avx2_table() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon: return neon_table() != nullptr;
  }
  return false;
}

const Table& active() { return *current(); }

bool select(Isa isa) {
  if (!cpu_supports(isa)) return false;
  switch (isa) {
    case Isa::Scalar: current() = &kScalar; break;
    case Isa::Avx2: current() = avx2_table(); break;
    case Isa::Neon: current() = neon_table(); break;
  }
  return true;
}

}  // namespace sweeprl::kernels
