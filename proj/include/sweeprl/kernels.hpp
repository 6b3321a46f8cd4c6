#pragma once

// Dense float64 kernels behind the MLP. Each kernel has a scalar reference
// and vector variants; one table is selected at startup from CPUID (or the
// SWEEPRL_SIMD environment variable: "scalar", "avx2", "neon").
//
// Elementwise kernels (axpy, adam) are bit-identical across variants. The
// reductions (dot, matvec) reassociate sums, so variants agree only to
// rounding; a process always uses one table, which keeps runs reproducible.

#include <cstddef>
#include <span>
#include <string_view>

namespace sweeprl::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct AdamCoeffs {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias1;  // 1 - beta1^t
  double bias2;  // 1 - beta2^t
};

struct Table {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = W x + b, W row-major rows x cols
  void (*matvec)(const double* w, const double* x, const double* b, double* y,
                 std::size_t rows, std::size_t cols);
  void (*adam)(double* param, const double* grad, double* m, double* v, std::size_t n,
               const AdamCoeffs& c);
};

const Table& scalar_table();
// Null when the variant is not compiled in for this target.
const Table* avx2_table();
const Table* neon_table();

bool cpu_supports(Isa isa);

/// The table used by the free functions below.
const Table& active();

/// Overrides the runtime choice. Returns false (and changes nothing) when the
/// variant is unavailable on this machine.
bool select(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void matvec(std::span<const double> w, std::span<const double> x,
                   std::span<const double> b, std::span<double> y) {
  active().matvec(w.data(), x.data(), b.data(), y.data(), y.size(), x.size());
}

inline void adam(std::span<double> param, std::span<const double> grad, std::span<double> m,
                 std::span<double> v, const AdamCoeffs& c) {
  active().adam(param.data(), grad.data(), m.data(), v.data(), param.size(), c);
}

}  // namespace sweeprl::kernels
