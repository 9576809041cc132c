#include "doctest.h"

#include <algorithm>

#include "foliate/errors.hpp"
#include "foliate/scenarios.hpp"
#include "helpers.hpp"

using namespace foliate;

namespace {

struct TiltedOracle {
  double z, ricNN, A11, A22, Zy2, Zz;
};

// Frozen output of tests/oracles/tilted_torus.py (sympy, 20 digits).
constexpr TiltedOracle kTilted[] = {
    {0.3, 0.44589140941494536974, 0.098905833419167555135, -0.34131561311294096772, 0.22997739530110163700,
     -0.078577881464853439921},
    {0.7, 0.49929553089473452180, 0.22102003986596851721, -0.15331250443936819001, 0.16298010363177034763,
     -0.14382320749218534972},
    {2.0, 0.084638644150804269335, 0.51578440779555970634, 0.037134856416577028788, -0.077125517428087878725,
     0.10967779553979158293},
};

}  // namespace

TEST_CASE("tilted torus matches the symbolic oracle") {
  const Scenario t = build_tilted_torus();
  for (const auto& o : kTilted) {
    Point p(4);
    p << 1.1, 0.5, 3.3, o.z;
    const LocalFoliation lf(t.fm, p);
    const Mat A = lf.shape_operator();
    INFO("z = " << o.z);
    CHECK(std::abs(A(0, 0) - o.A11) <= 1e-12);
    CHECK(std::abs(A(1, 1) - o.A22) <= 1e-12);
    CHECK(std::abs(lf.ricci_P(lf.normal()) - o.ricNN) <= 1e-12);
    CHECK(std::abs(lf.Z()[2] - o.Zy2) <= 1e-12);
    CHECK(std::abs(lf.Z()[3] - o.Zz) <= 1e-12);
    CHECK(std::abs(lf.Z()[0]) + std::abs(lf.Z()[1]) <= 1e-15);
  }
}

TEST_CASE("zero tilt reduces the tilted torus to the warped torus") {
  const Scenario t = build_tilted_torus(default_warp_a(), default_warp_b(), constant_profile(0.0));
  const Scenario w = build_warped_torus_4();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Point p = testing::random_point(rng, 4);
    const LocalFoliation u(t.fm, p), v(w.fm, p);
    CHECK((u.shape_operator() - v.shape_operator()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(u.Z().cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(u.ricci_P(u.normal()) == doctest::Approx(v.ricci_P(v.normal())).epsilon(1e-13));
  }
}

TEST_CASE("catalog: names, flags and expected values") {
  const std::vector<std::string> names = scenario_names();
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(names.size() >= 7);
  for (const auto& name : names) {
    const Scenario s = build_scenario(name);
    INFO(name);
    CHECK(s.name == name);
    CHECK(s.n() >= 1);
    CHECK(s.m() >= s.n() + 1);
    CHECK(s.flags.harmonic_perp);
    CHECK(s.measured.harmonic_max <= kFlagTolerance);
    CHECK(s.measured.integrability_max <= kIntegrabilityTolerance);
    if (s.flags.admissible)
      CHECK(s.measured.admissibility_max <= kAdmissibilityTolerance);
    else
      CHECK(s.measured.admissibility_max > kAdmissibilityTolerance);
    if (s.backend == Backend::Chart) CHECK(s.default_grid.size() == static_cast<std::size_t>(s.m()));
    // Every declared closed form agrees with the generic stack on the probes.
    double worst = 0.0;
    const auto probes = probe_points(s.manifold(), 16);
    for (const Point& p : probes) {
      const LocalFoliation lf(s.fm, p);
      for (const auto& e : s.expected)
        worst = std::max(worst, std::abs(e.measured(lf) - e.expected(p)));
    }
    CHECK(worst <= 1e-10);
  }
  CHECK_FALSE(build_heisenberg().flags.admissible);
  CHECK_FALSE(build_round_s3().flags.admissible);
  CHECK(build_warped_torus_4().flags.admissible);
  CHECK(build_warped_torus_4_umbilical().flags.umbilical);
  CHECK_FALSE(build_warped_torus_4().flags.umbilical);
  CHECK_FALSE(build_tilted_torus().flags.p_curvature_invariant);
}

TEST_CASE("probe points are deterministic and inside the chart") {
  const Scenario w = build_warped_torus_4();
  const auto a = probe_points(w.manifold()), b = probe_points(w.manifold());
  REQUIRE(a.size() == 128);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a[i].minCoeff() >= 0.0);
    CHECK(a[i].maxCoeff() < testing::kTwoPi);
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(build_scenario("no_such_scenario"), ConstructionError);
  CHECK_THROWS_AS(build_warped_torus(4, TrigProfile{0.5, {1.0}, {}}, default_warp_b()), ConstructionError);
  CHECK_THROWS_AS(build_tilted_torus(default_warp_a(), constant_profile(-1.0), default_tilt()), ConstructionError);
  CHECK_THROWS_AS(build_flat_torus(3, 2), ConstructionError);
  const Scenario w = build_warped_torus_4();
  CHECK_THROWS_AS(w.leaf("nowhere"), UnsupportedLeafError);
  CHECK_THROWS_AS(build_heisenberg().leaf("z=0"), UnsupportedLeafError);
  CHECK(w.leaf(w.leaves.front().name).free_axes.size() == 2);
}

TEST_CASE("trig profiles") {
  const TrigProfile p{1.0, {0.5, 0.25}, {0.0, -1.0}};
  const double z = 0.9;
  CHECK(p.value(z) == doctest::Approx(1.0 + 0.5 * std::cos(z) + 0.25 * std::cos(2 * z) - std::sin(2 * z)));
  CHECK(p.derivative(z, 1) ==
        doctest::Approx(-0.5 * std::sin(z) - 0.5 * std::sin(2 * z) - 2 * std::cos(2 * z)));
  CHECK(p.derivative(z, 2) ==
        doctest::Approx(-0.5 * std::cos(z) - std::cos(2 * z) + 4 * std::sin(2 * z)));
  const Jet2 j = p(Jet2::variable(z, 0));
  CHECK(j.v == doctest::Approx(p.value(z)));
  CHECK(j.g[0] == doctest::Approx(p.derivative(z, 1)));
  CHECK(j.h(0, 0) == doctest::Approx(p.derivative(z, 2)));
  CHECK(default_warp_a().scan_min() == doctest::Approx(1.0));
}
