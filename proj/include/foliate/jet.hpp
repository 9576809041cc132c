#pragma once

// Truncated Taylor arithmetic used to differentiate metric coefficients and
// frame fields exactly (to rounding).
//
// Gradients and Hessians are taken along the backend basis b_0..b_{m-1}:
//   Jet1::g[i]      = b_i(f)
//   Jet2::h(i, j)   = b_i(b_j(f))
// On chart backends b_i = d/dx^i and the Hessian is symmetric. Entries beyond
// the manifold dimension stay zero.

#include <array>
#include <cmath>

#include <Eigen/Core>

#include "foliate/types.hpp"

namespace foliate {
struct Jet1;
struct Jet2;
}  // namespace foliate

namespace Eigen {

template <>
struct NumTraits<foliate::Jet1> : NumTraits<double> {
  using Real = foliate::Jet1;
  using NonInteger = foliate::Jet1;
  using Nested = foliate::Jet1;
  using Literal = foliate::Jet1;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1 + foliate::kMaxDim,
    AddCost = 1 + foliate::kMaxDim,
    MulCost = 3 * foliate::kMaxDim
  };
};

template <>
struct NumTraits<foliate::Jet2> : NumTraits<double> {
  using Real = foliate::Jet2;
  using NonInteger = foliate::Jet2;
  using Nested = foliate::Jet2;
  using Literal = foliate::Jet2;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = foliate::kMaxDim * foliate::kMaxDim,
    AddCost = foliate::kMaxDim * foliate::kMaxDim,
    MulCost = 4 * foliate::kMaxDim * foliate::kMaxDim
  };
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<foliate::Jet1, double, BinaryOp> {
  using ReturnType = foliate::Jet1;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, foliate::Jet1, BinaryOp> {
  using ReturnType = foliate::Jet1;
};

}  // namespace Eigen


namespace foliate {

using Grad = std::array<double, kMaxDim>;

struct Jet1 {
  double v = 0.0;
  Grad g{};

  Jet1() = default;
  Jet1(double value) : v(value) {}  // NOLINT: implicit constants

  static Jet1 variable(double value, int axis) {
    Jet1 j(value);
    j.g[axis] = 1.0;
    return j;
  }

  /// Derivative along the vector with basis components `dir`.
  double along(const Vec& dir) const {
    double s = 0.0;
    for (int i = 0; i < dir.size(); ++i) s += dir[i] * g[i];
    return s;
  }

  Jet1& operator+=(const Jet1& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] += o.g[i];
    return *this;
  }
  Jet1& operator-=(const Jet1& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] -= o.g[i];
    return *this;
  }
  Jet1& operator*=(const Jet1& o) {
    for (int i = 0; i < kMaxDim; ++i) g[i] = g[i] * o.v + v * o.g[i];
    v *= o.v;
    return *this;
  }
  Jet1& operator*=(double s) {
    v *= s;
    for (auto& x : g) x *= s;
    return *this;
  }
  Jet1& operator/=(const Jet1& o) {
    const double inv = 1.0 / o.v;
    const double q = v * inv;
    for (int i = 0; i < kMaxDim; ++i) g[i] = (g[i] - q * o.g[i]) * inv;
    v = q;
    return *this;
  }
};

inline Jet1 operator-(Jet1 a) {
  a.v = -a.v;
  for (auto& x : a.g) x = -x;
  return a;
}
inline Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
inline Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
inline Jet1 operator*(Jet1 a, const Jet1& b) { return a *= b; }
inline Jet1 operator/(Jet1 a, const Jet1& b) { return a /= b; }
inline Jet1 operator+(Jet1 a, double s) { a.v += s; return a; }
inline Jet1 operator+(double s, Jet1 a) { a.v += s; return a; }
inline Jet1 operator-(Jet1 a, double s) { a.v -= s; return a; }
inline Jet1 operator-(double s, const Jet1& a) { return -a + s; }
inline Jet1 operator*(Jet1 a, double s) { return a *= s; }
inline Jet1 operator*(double s, Jet1 a) { return a *= s; }
inline Jet1 operator/(Jet1 a, double s) { return a *= (1.0 / s); }
inline Jet1 operator/(double s, const Jet1& a) { return Jet1(s) /= a; }

/// phi(f) given phi(f.v) and phi'(f.v).
inline Jet1 compose(const Jet1& f, double value, double d1) {
  Jet1 r(value);
  for (int i = 0; i < kMaxDim; ++i) r.g[i] = d1 * f.g[i];
  return r;
}

inline Jet1 sin(const Jet1& f) { return compose(f, std::sin(f.v), std::cos(f.v)); }
inline Jet1 cos(const Jet1& f) { return compose(f, std::cos(f.v), -std::sin(f.v)); }
inline Jet1 exp(const Jet1& f) {
  const double e = std::exp(f.v);
  return compose(f, e, e);
}
inline Jet1 log(const Jet1& f) { return compose(f, std::log(f.v), 1.0 / f.v); }
inline Jet1 sqrt(const Jet1& f) {
  const double s = std::sqrt(f.v);
  return compose(f, s, 0.5 / s);
}
inline Jet1 abs(const Jet1& f) { return f.v < 0 ? -f : f; }

struct Jet2 {
  double v = 0.0;
  Grad g{};
  std::array<double, kMaxDim * kMaxDim> hess{};

  Jet2() = default;
  Jet2(double value) : v(value) {}  // NOLINT: implicit constants

  static Jet2 variable(double value, int axis) {
    Jet2 j(value);
    j.g[axis] = 1.0;
    return j;
  }

  double& h(int i, int j) { return hess[i * kMaxDim + j]; }
  double h(int i, int j) const { return hess[i * kMaxDim + j]; }

  /// Value and first derivatives only.
  Jet1 truncate() const {
    Jet1 r(v);
    r.g = g;
    return r;
  }

  /// The jet of b_i(f): value b_i f, gradient b_l(b_i f).
  Jet1 derivative(int i) const {
    Jet1 r(g[i]);
    for (int l = 0; l < kMaxDim; ++l) r.g[l] = h(l, i);
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] += o.g[i];
    for (std::size_t k = 0; k < hess.size(); ++k) hess[k] += o.hess[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) g[i] -= o.g[i];
    for (std::size_t k = 0; k < hess.size(); ++k) hess[k] -= o.hess[k];
    return *this;
  }
  Jet2& operator*=(double s) {
    v *= s;
    for (auto& x : g) x *= s;
    for (auto& x : hess) x *= s;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    for (int i = 0; i < kMaxDim; ++i)
      for (int j = 0; j < kMaxDim; ++j)
        h(i, j) = h(i, j) * o.v + v * o.h(i, j) + g[i] * o.g[j] + g[j] * o.g[i];
    for (int i = 0; i < kMaxDim; ++i) g[i] = g[i] * o.v + v * o.g[i];
    v *= o.v;
    return *this;
  }
  Jet2& operator/=(const Jet2& o);
};

inline Jet2 operator-(Jet2 a) { return a *= -1.0; }
inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
inline Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
inline Jet2 operator+(Jet2 a, double s) { a.v += s; return a; }
inline Jet2 operator+(double s, Jet2 a) { a.v += s; return a; }
inline Jet2 operator-(Jet2 a, double s) { a.v -= s; return a; }
inline Jet2 operator-(double s, const Jet2& a) { return -a + s; }
inline Jet2 operator*(Jet2 a, double s) { return a *= s; }
inline Jet2 operator*(double s, Jet2 a) { return a *= s; }
inline Jet2 operator/(Jet2 a, double s) { return a *= (1.0 / s); }

/// phi(f) given phi, phi', phi'' at f.v (chain rule to second order).
inline Jet2 compose(const Jet2& f, double value, double d1, double d2) {
  Jet2 r(value);
  for (int i = 0; i < kMaxDim; ++i) r.g[i] = d1 * f.g[i];
  for (int i = 0; i < kMaxDim; ++i)
    for (int j = 0; j < kMaxDim; ++j) r.h(i, j) = d2 * f.g[i] * f.g[j] + d1 * f.h(i, j);
  return r;
}

inline Jet2 reciprocal(const Jet2& f) {
  const double inv = 1.0 / f.v;
  return compose(f, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2& Jet2::operator/=(const Jet2& o) { return *this *= reciprocal(o); }
inline Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
inline Jet2 operator/(double s, const Jet2& a) { return reciprocal(a) *= s; }

inline Jet2 sin(const Jet2& f) {
  const double s = std::sin(f.v), c = std::cos(f.v);
  return compose(f, s, c, -s);
}
inline Jet2 cos(const Jet2& f) {
  const double s = std::sin(f.v), c = std::cos(f.v);
  return compose(f, c, -s, -c);
}
inline Jet2 exp(const Jet2& f) {
  const double e = std::exp(f.v);
  return compose(f, e, e, e);
}
inline Jet2 log(const Jet2& f) { return compose(f, std::log(f.v), 1.0 / f.v, -1.0 / (f.v * f.v)); }
inline Jet2 sqrt(const Jet2& f) {
  const double s = std::sqrt(f.v);
  return compose(f, s, 0.5 / s, -0.25 / (s * f.v));
}

inline bool isfinite(const Jet1& f) {
  if (!std::isfinite(f.v)) return false;
  for (double x : f.g)
    if (!std::isfinite(x)) return false;
  return true;
}
inline bool isfinite(const Jet2& f) {
  if (!isfinite(f.truncate())) return false;
  for (double x : f.hess)
    if (!std::isfinite(x)) return false;
  return true;
}

template <class S>
Vector<Jet1> truncate(const Vector<S>& x);

template <>
inline Vector<Jet1> truncate(const Vector<Jet2>& x) {
  Vector<Jet1> r(x.size());
  for (int i = 0; i < x.size(); ++i) r[i] = x[i].truncate();
  return r;
}
template <>
inline Vector<Jet1> truncate(const Vector<Jet1>& x) {
  return x;
}

template <class S>
Vec values(const Vector<S>& x) {
  Vec r(x.size());
  for (int i = 0; i < x.size(); ++i) r[i] = x[i].v;
  return r;
}

template <class S>
Mat values(const Matrix<S>& x) {
  Mat r(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) r(i, j) = x(i, j).v;
  return r;
}

/// Constant-coefficient jets (no derivatives).
inline Vector<Jet2> constant_field(const Vec& c) {
  Vector<Jet2> r(c.size());
  for (int i = 0; i < c.size(); ++i) r[i] = Jet2(c[i]);
  return r;
}

}  // namespace foliate
