#pragma once

#include <cstddef>

// Dense double-precision kernels used by the simplex tableau updates and the
// trajectory clearance checks. A scalar reference implementation is always
// available; AVX2/FMA (x86-64) and NEON (aarch64) variants are selected once
// at startup. MVMILP_KERNELS=scalar|avx2|neon forces a specific table.
namespace mvmilp::kernels {

// y[i] += a * x[i]
using AxpyFn = void (*)(double* y, const double* x, double a, std::size_t n);
// x[i] *= a
using ScalFn = void (*)(double* x, double a, std::size_t n);
// sum_i x[i] * y[i]
using DotFn = double (*)(const double* x, const double* y, std::size_t n);
// min_i (x[i]-cx)^2 + (y[i]-cy)^2
using MinDist2Fn = double (*)(const double* x, const double* y, double cx,
                              double cy, std::size_t n);

struct Dispatch {
  AxpyFn axpy;
  ScalFn scal;
  DotFn dot;
  MinDist2Fn min_dist2;
  const char* name;
};

const Dispatch& scalar_table();

// Table picked for this process (env override, then CPU detection).
const Dispatch& active();

inline void axpy(double* y, const double* x, double a, std::size_t n) {
  active().axpy(y, x, a, n);
}
inline void scal(double* x, double a, std::size_t n) { active().scal(x, a, n); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline double min_dist2(const double* x, const double* y, double cx, double cy,
                        std::size_t n) {
  return active().min_dist2(x, y, cx, cy, n);
}

}  // namespace mvmilp::kernels
