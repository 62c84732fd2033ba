// NEON kernels for aarch64 builds.
#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "mvmilp/kernels.hpp"

namespace mvmilp::kernels {
namespace {

void axpy_neon(double* y, const double* x, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scal_neon(double* x, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s = std::fma(x[i], y[i], s);
  return s;
}

double min_dist2_neon(const double* x, const double* y, double cx, double cy,
                      std::size_t n) {
  const float64x2_t vcx = vdupq_n_f64(cx);
  const float64x2_t vcy = vdupq_n_f64(cy);
  float64x2_t vbest = vdupq_n_f64(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(x + i), vcx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(y + i), vcy);
    const float64x2_t d2 = vfmaq_f64(vmulq_f64(dx, dx), dy, dy);
    vbest = vminq_f64(vbest, d2);
  }
  double best = vgetq_lane_f64(vbest, 0);
  const double lane1 = vgetq_lane_f64(vbest, 1);
  if (lane1 < best) best = lane1;
  for (; i < n; ++i) {
    const double dx = x[i] - cx;
    const double dy = y[i] - cy;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best) best = d2;
  }
  return best;
}

}  // namespace

const Dispatch& neon_table() {
  static const Dispatch table{axpy_neon, scal_neon, dot_neon, min_dist2_neon,
                              "neon"};
  return table;
}

}  // namespace mvmilp::kernels

#endif  // aarch64
