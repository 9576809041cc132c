#include "doctest.h"

#include "foliate/errors.hpp"
#include "foliate/scenarios.hpp"
#include "helpers.hpp"

using namespace foliate;

namespace {

VectorField constant(const Vec& v) {
  return [v](const Point&) { return constant_field(v); };
}

}  // namespace

TEST_CASE("projector is idempotent and self-adjoint at random points") {
  std::mt19937_64 rng(17);
  for (const auto& name : scenario_names()) {
    const Scenario s = build_scenario(name);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Point p = testing::random_point(rng, s.m());
      const LocalDistribution local(s.fm.sr, p);
      const Mat P = local.projector();
      const Mat g = local.geometry().metric();
      worst = std::max(worst, (P * P - P).cwiseAbs().maxCoeff());
      // Self-adjoint for g: g P = P^T g.
      worst = std::max(worst, (g * P - P.transpose() * g).cwiseAbs().maxCoeff());
      const Projector pr = orthoprojector(s.fm.sr, p);
      worst = std::max(worst, (pr.P + pr.complement() - Mat::Identity(s.m(), s.m())).cwiseAbs().maxCoeff());
      if (s.backend == Backend::InvariantFrame) break;
    }
    INFO(name);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("projector oracles") {
  const Scenario flat = build_flat_torus(3, 1);
  const Mat P = orthoprojector(flat.fm.sr, Point::Constant(3, 0.1)).P;
  Mat expect = Mat::Zero(3, 3);
  // Flat 3-torus with leaf d0, normal d1: d2 spans D-perp.
  expect.diagonal() << 1.0, 1.0, 0.0;
  CHECK((P - expect).cwiseAbs().maxCoeff() <= 1e-15);

  const Scenario h = build_heisenberg();
  const Mat Ph = orthoprojector(h.fm.sr, Point::Zero(3)).P;
  Mat eh = Mat::Zero(3, 3);
  eh.diagonal() << 1.0, 0.0, 1.0;  // X, T kept, Y killed
  CHECK((Ph - eh).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("induced connection oracles") {
  const Scenario h = build_heisenberg();
  const Point o = Point::Zero(3);
  // nabla^P_X T = P(-Y / 2) = 0
  const TangentVector v = nabla_P(h.fm.sr, {o, Vec::Unit(3, 0)}, constant(Vec::Unit(3, 2)), o);
  CHECK(v.components.cwiseAbs().maxCoeff() <= 1e-15);
  // nabla^P_Y T = X / 2 (the non-admissible direction)
  const TangentVector w = nabla_P(h.fm.sr, {o, Vec::Unit(3, 1)}, constant(Vec::Unit(3, 2)), o);
  CHECK(w.components[0] == doctest::Approx(0.5));

  const Scenario wt = build_warped_torus_4();
  Point p(4);
  p << 0.3, 0.2, 0.1, 1.3;
  const double z = p[3];
  const Vec e1 = Vec::Unit(4, 1) / testing::a0(z);
  const TangentVector u = nabla_P(wt.fm.sr, {p, e1}, constant(Vec::Unit(4, 3)), p);
  const Vec expect = (testing::a1(z) / testing::a0(z)) * e1;
  CHECK((u.components - expect).cwiseAbs().maxCoeff() <= 1e-14);

  const Scenario flat = build_flat_torus();
  CHECK(nabla_P(flat.fm.sr, {Point::Zero(4), Vec::Unit(4, 0)}, constant(Vec::Unit(4, 2)), Point::Zero(4))
            .components.cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("induced connection is metric compatible on random D-sections") {
  const Scenario wt = build_tilted_torus();
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Point p = testing::random_point(rng, 4);
    const LocalDistribution local(wt.fm.sr, p);
    const Vec xdir = testing::random_vec(rng, 4);
    // U = f e1 + g N, V = h e2 + k N with smooth coefficients.
    auto section = [&](int i, int j, double phase) {
      const auto frame = wt.fm.sr.distribution.frame_D(p);
      const Jet2 z = Jet2::variable(p[3], 3), y = Jet2::variable(p[1], 1);
      const Jet2 f = sin(z + phase) + 0.3 * cos(y), g = cos(2.0 * z - phase);
      Vector<Jet2> u(4);
      for (int k = 0; k < 4; ++k) u[k] = f * frame[static_cast<std::size_t>(i)][k] + g * frame[static_cast<std::size_t>(j)][k];
      return u;
    };
    const Vector<Jet2> U = section(0, 2, 0.4), V = section(1, 2, 1.1);
    const Vector<Jet1> Xj = truncate(constant_field(xdir));
    const Vec nU = values(local.nabla_P(Xj, U)), nV = values(local.nabla_P(Xj, V));
    const Jet1 uv = local.geometry().inner(truncate(U), truncate(V));
    const double lhs = uv.along(xdir);
    const double rhs = local.geometry().inner(nU, values(V)) + local.geometry().inner(values(U), nV);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("projected curvature oracles and symmetries") {
  const Scenario h = build_heisenberg();
  const Point o = Point::Zero(3);
  const TangentVector r = curvature_P(h.fm.sr, {o, Vec::Unit(3, 0)}, {o, Vec::Unit(3, 2)}, constant(Vec::Unit(3, 2)), o);
  CHECK(r.components.cwiseAbs().maxCoeff() <= 1e-15);

  const Scenario s3 = build_round_s3();
  const TangentVector q = curvature_P(s3.fm.sr, {o, Vec::Unit(3, 0)}, {o, Vec::Unit(3, 1)}, constant(Vec::Unit(3, 1)), o);
  CHECK(q.components[0] == doctest::Approx(2.0).epsilon(1e-14));

  const Scenario flat = build_flat_torus();
  const Point p0 = Point::Constant(4, 0.7);
  CHECK(curvature_P(flat.fm.sr, {p0, Vec::Unit(4, 1)}, {p0, Vec::Unit(4, 3)}, constant(Vec::Unit(4, 2)), p0)
            .components.cwiseAbs()
            .maxCoeff() == 0.0);

  const Scenario wt = build_tilted_torus();
  std::mt19937_64 rng(8);
  double anti = 0.0, pair = 0.0, tensorial = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const Point p = testing::random_point(rng, 4);
    const LocalDistribution local(wt.fm.sr, p);
    const auto frame = wt.fm.sr.distribution.frame_D(p);
    const Vec X = testing::random_vec(rng, 4), Y = testing::random_vec(rng, 4);
    const Vec cv = testing::random_vec(rng, 3), cu = testing::random_vec(rng, 3);
    Vec V = Vec::Zero(4), U = Vec::Zero(4);
    for (int i = 0; i < 3; ++i) {
      V += cv[i] * values(frame[static_cast<std::size_t>(i)]);
      U += cu[i] * values(frame[static_cast<std::size_t>(i)]);
    }
    auto RP = [&](const Vec& a, const Vec& b, const Vec& c) {
      return local.curvature_P(constant_field(a), constant_field(b), constant_field(c));
    };
    const double g = local.geometry().inner(RP(X, Y, V), U);
    anti = std::max(anti, std::abs(g + local.geometry().inner(RP(Y, X, V), U)));
    pair = std::max(pair, std::abs(g + local.geometry().inner(RP(X, Y, U), V)));
    tensorial = std::max(tensorial, curvature_P_tensoriality_residual(wt.fm.sr, X, Y, V, p));
  }
  CHECK(anti <= 1e-9);
  CHECK(pair <= 1e-9);
  CHECK(tensorial <= 1e-9);
}

TEST_CASE("mean curvature of D-perp and harmonicity") {
  for (const char* name : {"flat_torus", "heisenberg", "warped_torus_4", "tilted_torus", "round_s3"}) {
    const Scenario s = build_scenario(name);
    const MeanCurvaturePerp h = mean_curvature_perp(s.fm.sr, Point::Constant(s.m(), 0.9));
    INFO(name);
    CHECK(h.norm <= 1e-12);
    CHECK(h.harmonic);
  }
}

TEST_CASE("admissibility residual oracles") {
  auto adm = [](const Scenario& s) { return LocalFoliation(s.fm, Point::Constant(s.m(), 0.4)).admissibility_residual(); };
  CHECK(adm(build_warped_torus_4()) <= 1e-15);
  CHECK(adm(build_flat_torus()) == 0.0);
  CHECK(adm(build_round_s3()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(adm(build_heisenberg()) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("domain and frame errors") {
  const Scenario h = build_heisenberg();
  const Point o = Point::Zero(3);
  // Y is not in D.
  CHECK_THROWS_AS(nabla_P(h.fm.sr, {o, Vec::Unit(3, 0)}, constant(Vec::Unit(3, 1)), o), DomainError);
  CHECK_THROWS_AS(curvature_P(h.fm.sr, {o, Vec::Unit(3, 0)}, {o, Vec::Unit(3, 2)}, constant(Vec::Unit(3, 1)), o),
                  DomainError);

  SubRiemannianManifold sr = build_flat_torus(3, 1).fm.sr;
  sr.distribution.frame_D = [](const Point&) {
    return std::vector<Vector<Jet2>>{constant_field(Vec::Unit(3, 1)), constant_field(2.0 * Vec::Unit(3, 2))};
  };
  CHECK_THROWS_AS(LocalDistribution(sr, Point::Zero(3)), FrameError);
}
