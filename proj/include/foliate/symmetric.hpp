#pragma once

// Symmetric functions of a leafwise operator and its Newton transformations.
//
// Templated on the scalar so the same code runs on plain matrices and on
// jet-valued matrices (which carries first derivatives of sigma_r and T_r
// through for the leafwise divergence computations).

#include <string>
#include <vector>

#include "foliate/errors.hpp"
#include "foliate/jet.hpp"
#include "foliate/types.hpp"

namespace foliate {

template <class S>
Matrix<S> identity_matrix(int n) {
  Matrix<S> r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = S(i == j ? 1.0 : 0.0);
  return r;
}

template <class S>
Matrix<S> product(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      S s(0.0);
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

template <class S>
S trace(const Matrix<S>& a) {
  S s(0.0);
  for (int i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

/// tr(a b) without forming the product.
template <class S>
S trace_product(const Matrix<S>& a, const Matrix<S>& b) {
  S s(0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s;
}

/// Power sums tau_j = tr(A^j); entry 0 holds n, entries 1..count the sums.
template <class S>
std::vector<S> power_sums(const Matrix<S>& A, int count) {
  const int n = static_cast<int>(A.rows());
  std::vector<S> tau(static_cast<std::size_t>(count + 1), S(0.0));
  tau[0] = S(static_cast<double>(n));
  Matrix<S> power = identity_matrix<S>(n);
  for (int j = 1; j <= count; ++j) {
    tau[static_cast<std::size_t>(j)] = trace_product(power, A);
    if (j < count) power = product(power, A);
  }
  return tau;
}

/// sigma_0..sigma_n from the power sums by Newton's identities:
///   r sigma_r = sum_{i=1}^r (-1)^{i-1} sigma_{r-i} tau_i.
template <class S>
std::vector<S> elementary_symmetric(const Matrix<S>& A) {
  const int n = static_cast<int>(A.rows());
  const std::vector<S> tau = power_sums(A, n);
  std::vector<S> sigma(static_cast<std::size_t>(n + 1), S(0.0));
  sigma[0] = S(1.0);
  for (int r = 1; r <= n; ++r) {
    S s(0.0);
    for (int i = 1; i <= r; ++i) {
      const S term = sigma[static_cast<std::size_t>(r - i)] * tau[static_cast<std::size_t>(i)];
      if (i % 2 == 1)
        s += term;
      else
        s -= term;
    }
    sigma[static_cast<std::size_t>(r)] = s * (1.0 / r);
  }
  return sigma;
}

inline void check_sigma_index(int r, int n) {
  if (r < 0 || r > n)
    throw RangeError("sigma index r = " + std::to_string(r) + " outside [0, " + std::to_string(n) +
                     "]");
}

template <class S>
S sigma(int r, const Matrix<S>& A) {
  check_sigma_index(r, static_cast<int>(A.rows()));
  return elementary_symmetric(A)[static_cast<std::size_t>(r)];
}

template <class S>
S tau(int j, const Matrix<S>& A) {
  if (j < 1) throw RangeError("power sum index must be positive");
  return power_sums(A, j)[static_cast<std::size_t>(j)];
}

/// sigma_r with sigma_r = 0 for r > n (used by the integral formulas, which
/// reach sigma_{r+2} for r up to n - 1).
template <class S>
S sigma_or_zero(const std::vector<S>& sigmas, int r) {
  if (r < 0 || r >= static_cast<int>(sigmas.size())) return S(0.0);
  return sigmas[static_cast<std::size_t>(r)];
}

/// T_0..T_n by T_r = sigma_r Id - A T_{r-1}.
template <class S>
std::vector<Matrix<S>> newton_transforms(const Matrix<S>& A, const std::vector<S>& sigmas) {
  const int n = static_cast<int>(A.rows());
  std::vector<Matrix<S>> T;
  T.reserve(static_cast<std::size_t>(n + 1));
  T.push_back(identity_matrix<S>(n));
  for (int r = 1; r <= n; ++r) {
    Matrix<S> next = product(A, T.back());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) next(i, j) = -next(i, j);
    for (int i = 0; i < n; ++i) next(i, i) += sigmas[static_cast<std::size_t>(r)];
    T.push_back(std::move(next));
  }
  return T;
}

template <class S>
Matrix<S> newton_transform(int r, const Matrix<S>& A) {
  const int n = static_cast<int>(A.rows());
  check_sigma_index(r, n);
  return newton_transforms(A, elementary_symmetric(A))[static_cast<std::size_t>(r)];
}

/// T_r = sum_{j=0}^r (-1)^j sigma_{r-j} A^j.
template <class S>
Matrix<S> newton_transform_explicit(int r, const Matrix<S>& A) {
  const int n = static_cast<int>(A.rows());
  check_sigma_index(r, n);
  const std::vector<S> sig = elementary_symmetric(A);
  Matrix<S> result = identity_matrix<S>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) result(i, j) = result(i, j) * sig[static_cast<std::size_t>(r)];
  Matrix<S> power = identity_matrix<S>(n);
  for (int j = 1; j <= r; ++j) {
    power = product(power, A);
    const S coeff = (j % 2 == 1 ? -1.0 : 1.0) * sig[static_cast<std::size_t>(r - j)];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) result(a, b) += coeff * power(a, b);
  }
  return result;
}

struct SymmetricFunctions {
  std::vector<double> sigma;  ///< sigma_0..sigma_n
  std::vector<double> tau;    ///< tau_1..tau_n at indices 1..n (index 0 holds n)
  double H = 0.0;             ///< sigma_1 / n
};

SymmetricFunctions symmetric_functions(const Mat& A);

/// Residuals of the algebraic trace identities for T_r(A):
///   tr T_r = (n - r) sigma_r
///   tr(A T_r) = (r + 1) sigma_{r+1}
///   tr(A^2 T_r) = sigma_1 sigma_{r+1} - (r + 2) sigma_{r+2}
struct TraceIdentityResiduals {
  double trace = 0.0;
  double trace_A = 0.0;
  double trace_A2 = 0.0;
  double max() const;
};

/// Requires 0 <= r <= n - 1 (RangeError otherwise).
TraceIdentityResiduals trace_identities(int r, const Mat& A);

/// Largest |T_r(recursive) - T_r(explicit)| and |A T_r - T_r A| over r = 0..n,
/// plus |T_n|.
struct NewtonConsistency {
  double recursive_vs_explicit = 0.0;
  double commutator = 0.0;
  double T_n = 0.0;
  double symmetry = 0.0;
};
NewtonConsistency newton_consistency(const Mat& A);

}  // namespace foliate
