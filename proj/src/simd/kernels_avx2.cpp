#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "foliate/simd/kernels.hpp"

namespace foliate::simd::avx2 {

__attribute__((target("avx2"))) double block_dot(const double* v, const double* w,
                                                 std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(w + i)));
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, acc);
  for (std::size_t l = 0; i + l < n; ++l) lane[l] = lane[l] + v[i + l] * w[i + l];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

__attribute__((target("avx2"))) double max_abs(const double* v, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d nan = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(v + i));
    nan = _mm256_or_pd(nan, _mm256_cmp_pd(a, a, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, a);
  }
  if (_mm256_movemask_pd(nan) != 0) return std::numeric_limits<double>::quiet_NaN();
  alignas(32) double lane[kLanes];
  _mm256_store_pd(lane, m);
  double r = lane[0];
  for (std::size_t l = 1; l < kLanes; ++l)
    if (lane[l] > r) r = lane[l];
  for (; i < n; ++i) {
    const double a = std::fabs(v[i]);
    if (std::isnan(a)) return a;
    if (a > r) r = a;
  }
  return r;
}

}  // namespace foliate::simd::avx2

#endif
