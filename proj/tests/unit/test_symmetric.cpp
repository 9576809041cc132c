#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "foliate/symmetric.hpp"
#include "helpers.hpp"

using namespace foliate;

namespace {

// Elementary symmetric polynomials of the eigenvalues by subset enumeration.
std::vector<double> brute_sigma(const Vec& lambda) {
  const int n = static_cast<int>(lambda.size());
  std::vector<double> s(static_cast<std::size_t>(n + 1), 0.0);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double prod = 1.0;
    int count = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        prod *= lambda[i];
        ++count;
      }
    s[static_cast<std::size_t>(count)] += prod;
  }
  return s;
}

double choose(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("symmetric functions of small hand examples") {
  Mat A = Mat::Zero(2, 2);
  A.diagonal() << 1.0, 2.0;
  const SymmetricFunctions f = symmetric_functions(A);
  CHECK(f.sigma[0] == 1.0);
  CHECK(f.sigma[1] == doctest::Approx(3.0));
  CHECK(f.sigma[2] == doctest::Approx(2.0));
  CHECK(f.tau[1] == doctest::Approx(3.0));
  CHECK(f.tau[2] == doctest::Approx(5.0));
  CHECK(f.H == doctest::Approx(1.5));
  Mat T1 = Mat::Zero(2, 2);
  T1.diagonal() << 2.0, 1.0;
  CHECK((newton_transform(1, A) - T1).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(newton_transform(2, A).cwiseAbs().maxCoeff() <= 1e-15);

  const Mat I3 = Mat::Identity(3, 3);
  for (int r = 0; r <= 3; ++r) {
    CHECK(sigma(r, I3) == doctest::Approx(choose(3, r)));
    const Mat expect = choose(2, r) * Mat::Identity(3, 3);
    CHECK((newton_transform(r, I3) - expect).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("sigma_r matches the eigenvalue brute force") {
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 40; ++trial) {
      const Mat A = testing::random_symmetric(rng, n);
      const Eigen::SelfAdjointEigenSolver<Mat> eig(A);
      const std::vector<double> expect = brute_sigma(eig.eigenvalues());
      // Rounding scales with sigma_r of the absolute eigenvalues.
      const std::vector<double> scale = brute_sigma(eig.eigenvalues().cwiseAbs());
      const SymmetricFunctions f = symmetric_functions(A);
      for (std::size_t r = 0; r <= static_cast<std::size_t>(n); ++r)
        worst = std::max(worst, std::abs(f.sigma[r] - expect[r]) / (1.0 + scale[r]));
    }
  CHECK(worst <= 1e-11);
}

TEST_CASE("Newton transformations: recursion, explicit sum, Cayley-Hamilton, commutation") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 200; ++trial) {
      const Mat A = testing::random_symmetric(rng, n);
      const NewtonConsistency c = newton_consistency(A);
      CHECK(c.recursive_vs_explicit <= 1e-11);
      CHECK(c.commutator <= 1e-11);
      CHECK(c.T_n <= 1e-11);
      CHECK(c.symmetry <= 1e-12);
      for (int r = 0; r < n; ++r) CHECK(trace_identities(r, A).max() <= 1e-11);
    }
}

TEST_CASE("umbilical operators have binomial Newton transformations") {
  for (int n = 1; n <= 6; ++n)
    for (double lambda : {-1.3, 0.0, 0.7, 2.0}) {
      const Mat A = lambda * Mat::Identity(n, n);
      for (int r = 0; r <= n; ++r) {
        const Mat expect = choose(n - 1, r) * std::pow(lambda, r) * Mat::Identity(n, n);
        CHECK((newton_transform(r, A) - expect).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(sigma(r, A) == doctest::Approx(choose(n, r) * std::pow(lambda, r)));
      }
    }
}

TEST_CASE("index errors") {
  const Mat A = Mat::Identity(3, 3);
  CHECK_THROWS_AS(sigma(-1, A), RangeError);
  CHECK_THROWS_AS(sigma(4, A), RangeError);
  CHECK_THROWS_AS(newton_transform(4, A), RangeError);
  CHECK_THROWS_AS(newton_transform_explicit(-1, A), RangeError);
  CHECK_THROWS_AS(trace_identities(3, A), RangeError);
  CHECK_THROWS_AS(tau(0, A), RangeError);
  const std::vector<double> s{1.0, 2.0};
  CHECK(sigma_or_zero(s, 5) == 0.0);
}

TEST_CASE("jet-valued sigma carries the derivative of the eigenvalue sum") {
  // A(t) = diag(t, t^2): sigma_2 = t^3.
  const Jet2 t = Jet2::variable(0.7, 0);
  Matrix<Jet2> A(2, 2);
  A(0, 0) = t;
  A(1, 1) = t * t;
  A(0, 1) = A(1, 0) = Jet2(0.0);
  const Jet2 s2 = sigma(2, A);
  CHECK(s2.v == doctest::Approx(0.343));
  CHECK(s2.g[0] == doctest::Approx(3 * 0.49));
  CHECK(s2.h(0, 0) == doctest::Approx(6 * 0.7));
}
