#include "foliate/symmetric.hpp"

#include <algorithm>
#include <cmath>

namespace foliate {

SymmetricFunctions symmetric_functions(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  Matrix<double> a = A;
  SymmetricFunctions out;
  out.sigma = elementary_symmetric(a);
  out.tau = power_sums(a, n);
  out.H = n > 0 ? out.sigma[1] / n : 0.0;
  return out;
}

double TraceIdentityResiduals::max() const {
  return std::max({std::abs(trace), std::abs(trace_A), std::abs(trace_A2)});
}

TraceIdentityResiduals trace_identities(int r, const Mat& A) {
  const int n = static_cast<int>(A.rows());
  if (r < 0 || r > n - 1)
    throw RangeError("trace identities need 0 <= r <= n - 1, got r = " + std::to_string(r));
  Matrix<double> a = A;
  const std::vector<double> sig = elementary_symmetric(a);
  const auto T = newton_transforms(a, sig);
  const Matrix<double>& Tr = T[static_cast<std::size_t>(r)];
  const Matrix<double> A2 = product(a, a);
  TraceIdentityResiduals res;
  res.trace = trace(Tr) - (n - r) * sig[static_cast<std::size_t>(r)];
  res.trace_A = trace_product(a, Tr) - (r + 1) * sigma_or_zero(sig, r + 1);
  res.trace_A2 = trace_product(A2, Tr) -
                 (sig[1] * sigma_or_zero(sig, r + 1) - (r + 2) * sigma_or_zero(sig, r + 2));
  return res;
}

NewtonConsistency newton_consistency(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  Matrix<double> a = A;
  const std::vector<double> sig = elementary_symmetric(a);
  const auto T = newton_transforms(a, sig);
  NewtonConsistency out;
  for (int r = 0; r <= n; ++r) {
    const Matrix<double>& Tr = T[static_cast<std::size_t>(r)];
    const Matrix<double> explicit_form = newton_transform_explicit(r, a);
    out.recursive_vs_explicit =
        std::max(out.recursive_vs_explicit, (Tr - explicit_form).cwiseAbs().maxCoeff());
    out.commutator =
        std::max(out.commutator, (product(a, Tr) - product(Tr, a)).cwiseAbs().maxCoeff());
    out.symmetry = std::max(out.symmetry, (Tr - Tr.transpose()).cwiseAbs().maxCoeff());
  }
  out.T_n = T.back().cwiseAbs().maxCoeff();
  return out;
}

}  // namespace foliate
