#include "doctest.h"

#include <cstring>
#include <limits>

#include "foliate/errors.hpp"
#include "foliate/quadrature.hpp"
#include "foliate/scenarios.hpp"
#include "foliate/simd/kernels.hpp"
#include "helpers.hpp"

using namespace foliate;

namespace {

std::vector<simd::Isa> available_isas() {
  std::vector<simd::Isa> out;
  for (simd::Isa isa : {simd::Isa::Scalar, simd::Isa::Avx2, simd::Isa::Neon})
    if (simd::isa_supported(isa)) out.push_back(isa);
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("SIMD reductions are bitwise equal to the scalar kernels") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  const auto isas = available_isas();
  CHECK(simd::isa_supported(simd::Isa::Scalar));
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 63u, 64u, 65u, 127u, 1001u, 4099u}) {
    std::vector<double> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = u(rng);
      w[i] = u(rng) * 1e-3;
    }
    const double ref_sum = simd::weighted_sum(simd::Isa::Scalar, v.data(), w.data(), n);
    const double ref_max = simd::max_abs(simd::Isa::Scalar, v.data(), n);
    for (simd::Isa isa : isas) {
      INFO(simd::isa_name(isa) << " n = " << n);
      CHECK(same_bits(simd::weighted_sum(isa, v.data(), w.data(), n), ref_sum));
      CHECK(same_bits(simd::max_abs(isa, v.data(), n), ref_max));
    }
    long double exact = 0.0L;
    for (std::size_t i = 0; i < n; ++i) exact += static_cast<long double>(v[i]) * w[i];
    CHECK(std::abs(ref_sum - static_cast<double>(exact)) <= 1e-9 * (1.0 + std::abs(static_cast<double>(exact))));
  }
}

TEST_CASE("SIMD reductions propagate NaN") {
  std::vector<double> v(37, 1.0), w(37, 1.0);
  v[29] = std::numeric_limits<double>::quiet_NaN();
  for (simd::Isa isa : available_isas()) {
    INFO(simd::isa_name(isa));
    CHECK(std::isnan(simd::weighted_sum(isa, v.data(), w.data(), v.size())));
    CHECK(std::isnan(simd::max_abs(isa, v.data(), v.size())));
  }
}

TEST_CASE("active ISA is a supported one") {
  CHECK(simd::isa_supported(simd::active_isa()));
  CHECK_FALSE(simd::isa_name(simd::active_isa()).empty());
}

TEST_CASE("grid volumes") {
  const Scenario w = build_warped_torus_4();
  const QuadratureGrid g = QuadratureGrid::full(w.manifold(), {3, 3, 3, 32});
  CHECK(g.size() == 3u * 3u * 3u * 32u);
  const double vol = integrate(w.manifold(), [](const Point&) { return 1.0; }, g);
  // Vol = (2 pi)^3 * int (2 + cos z)(2 + sin z) dz = (2 pi)^4 * 4
  CHECK(vol == doctest::Approx(4.0 * std::pow(testing::kTwoPi, 4)).epsilon(1e-13));

  const Scenario s3 = build_round_s3();
  const QuadratureGrid h = QuadratureGrid::full(s3.manifold(), {8, 8, 8});
  CHECK(h.homogeneous());
  CHECK(h.size() == 1u);
  CHECK(integrate(s3.manifold(), [](const Point&) { return 1.0; }, h) ==
        doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi));

  const QuadratureGrid r = g.refined();
  CHECK(r.counts() == std::vector<int>{6, 6, 6, 64});
  CHECK_FALSE(r == g);
  CHECK(g == QuadratureGrid::full(w.manifold(), {3, 3, 3, 32}));
}

TEST_CASE("leaf grids carry the induced density") {
  const Scenario w = build_warped_torus_4();
  Point base = Point::Zero(4);
  base[3] = 1.0;
  const QuadratureGrid leaf = QuadratureGrid::sub(w.manifold(), base, {1, 2}, {8, 8});
  CHECK(leaf.size() == 64u);
  for (std::size_t k = 0; k < leaf.size(); ++k) CHECK(leaf.node(k)[3] == 1.0);
  const double area = integrate(w.manifold(), [](const Point&) { return 1.0; }, leaf);
  CHECK(area == doctest::Approx(testing::kTwoPi * testing::kTwoPi * testing::a0(1.0) * testing::b0(1.0)));
}

TEST_CASE("trapezoidal rule is spectrally accurate for sigma_1 on the warped torus") {
  // int sigma_1 dvol = -(2 pi)^3 int (ab)' dz = 0
  const Scenario w = build_warped_torus_4();
  const QuadratureGrid g = QuadratureGrid::full(w.manifold(), {2, 2, 2, 48});
  const double s1 = integrate(w.manifold(), [&](const Point& p) { return LocalFoliation(w.fm, p).sigma(1); }, g);
  CHECK(std::abs(s1) <= 1e-9);
}

TEST_CASE("non-finite samples raise EvaluationError naming the point") {
  const Scenario w = build_warped_torus_4();
  const QuadratureGrid g = QuadratureGrid::full(w.manifold(), {2, 2, 2, 4});
  auto bad = [](const Point& p, double* out) {
    out[0] = p[3] > 3.0 ? std::numeric_limits<double>::infinity() : 1.0;
  };
  CHECK_THROWS_AS(sample(w.manifold(), g, 1, bad, 2), EvaluationError);
  try {
    sample(w.manifold(), g, 1, bad, 2);
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("at point") != std::string::npos);
  }
}

TEST_CASE("results do not depend on the worker count") {
  const Scenario t = build_tilted_torus();
  const QuadratureGrid g = QuadratureGrid::full(t.manifold(), {3, 3, 3, 16});
  auto f = [&](const Point& p, double* out) {
    const LocalFoliation lf(t.fm, p);
    out[0] = lf.sigma(1);
    out[1] = lf.ricci_P(lf.normal());
  };
  const SampleTable one = sample(t.manifold(), g, 2, f, 1);
  for (int threads : {2, 3, 7}) {
    const SampleTable many = sample(t.manifold(), g, 2, f, threads);
    CHECK(many.data == one.data);
    CHECK(many.weights == one.weights);
    CHECK(same_bits(many.integrate(0), one.integrate(0)));
    CHECK(same_bits(many.integrate(1), one.integrate(1)));
  }
  CHECK(one.total_weight() == doctest::Approx(integrate(t.manifold(), [](const Point&) { return 1.0; }, g)));
}
