#include <cmath>

#include "foliate/simd/kernels.hpp"

namespace foliate::simd::scalar {

// One block of at most kBlock samples; lane l takes indices l, l + 4, ...
double block_dot(const double* v, const double* w, std::size_t n) {
  double lane[kLanes] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    for (std::size_t l = 0; l < kLanes; ++l) lane[l] = lane[l] + v[i + l] * w[i + l];
  for (std::size_t l = 0; i + l < n; ++l) lane[l] = lane[l] + v[i + l] * w[i + l];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_abs(const double* v, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(v[i]);
    if (std::isnan(a)) return a;
    if (a > m) m = a;
  }
  return m;
}

}  // namespace foliate::simd::scalar
