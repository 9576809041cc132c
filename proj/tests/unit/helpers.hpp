#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "foliate/types.hpp"

namespace testing {

using foliate::Mat;
using foliate::Point;
using foliate::Vec;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Default warps written out by hand so the tests do not share code with the
// scenario builders.
inline double a0(double z) { return 2.0 + std::cos(z); }
inline double a1(double z) { return -std::sin(z); }
inline double a2(double z) { return -std::cos(z); }
inline double b0(double z) { return 2.0 + std::sin(z); }
inline double b1(double z) { return std::cos(z); }
inline double b2(double z) { return -std::sin(z); }

inline Point random_point(std::mt19937_64& rng, int m, double period = kTwoPi) {
  std::uniform_real_distribution<double> u(0.0, period);
  Point p(m);
  for (int i = 0; i < m; ++i) p[i] = u(rng);
  return p;
}

inline Mat random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

inline Vec random_vec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace testing
