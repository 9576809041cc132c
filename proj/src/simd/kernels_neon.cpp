#if defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "foliate/simd/kernels.hpp"

namespace foliate::simd::neon {

// Two float64x2 registers hold lanes {0, 1} and {2, 3}.
double block_dot(const double* v, const double* w, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(v + i), vld1q_f64(w + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(v + i + 2), vld1q_f64(w + i + 2)));
  }
  double lane[kLanes];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (std::size_t l = 0; i + l < n; ++l) lane[l] = lane[l] + v[i + l] * w[i + l];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_abs(const double* v, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  bool nan = false;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vabsq_f64(vld1q_f64(v + i));
    const uint64x2_t ordered = vceqq_f64(a, a);
    if ((vgetq_lane_u64(ordered, 0) & vgetq_lane_u64(ordered, 1)) == 0) nan = true;
    m = vmaxq_f64(m, a);
  }
  if (nan) return std::numeric_limits<double>::quiet_NaN();
  double r = std::fmax(vgetq_lane_f64(m, 0), vgetq_lane_f64(m, 1));
  for (; i < n; ++i) {
    const double a = std::fabs(v[i]);
    if (std::isnan(a)) return a;
    if (a > r) r = a;
  }
  return r;
}

}  // namespace foliate::simd::neon

#endif
