#include <cmath>
#include <limits>

#include "mvmilp/kernels.hpp"

// Reference kernels. axpy/scal use std::fma so that the SIMD variants, which
// contract to FMA, produce bit-identical elementwise results.
namespace mvmilp::kernels {
namespace {

void axpy_scalar(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scal_scalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = std::fma(x[i], y[i], s);
  return s;
}

double min_dist2_scalar(const double* x, const double* y, double cx, double cy,
                        std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - cx;
    const double dy = y[i] - cy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best) best = d2;
  }
  return best;
}

}  // namespace

const Dispatch& scalar_table() {
  static const Dispatch table{axpy_scalar, scal_scalar, dot_scalar,
                              min_dist2_scalar, "scalar"};
  return table;
}

}  // namespace mvmilp::kernels
