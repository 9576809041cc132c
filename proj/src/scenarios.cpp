#include "foliate/scenarios.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "foliate/errors.hpp"

namespace foliate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vector<Jet2> zero_field(int m) { return constant_field(Vec::Zero(m)); }

Vector<Jet2> coordinate_field(int m, int axis) {
  Vector<Jet2> v = zero_field(m);
  v[axis] = Jet2(1.0);
  return v;
}

Jet2 coordinate(const Point& p, int axis) { return Jet2::variable(p[axis], axis); }

/// Metric diag(1, a^2, b^2, 1) (m = 4) or diag(1, a^2, 1) (m = 3), z last.
MetricEvaluator warped_metric(int m, TrigProfile a, TrigProfile b) {
  return [m, a = std::move(a), b = std::move(b)](const Point& p) {
    const Jet2 z = coordinate(p, m - 1);
    Matrix<Jet2> g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = Jet2(i == j ? 1.0 : 0.0);
    const Jet2 av = a(z);
    g(1, 1) = av * av;
    if (m == 4) {
      const Jet2 bv = b(z);
      g(2, 2) = bv * bv;
    }
    return g;
  };
}

Vec full_periods(int m, double period) { return Vec::Constant(m, period); }

double leaf_entry(const LocalFoliation& lf, int j, int i) { return lf.shape_operator()(j, i); }

double det_density(const LocalFoliation& lf) { return std::sqrt(lf.geometry().metric().determinant()); }

ExpectedValue ev(std::string name, std::string derivation, std::function<double(const Point&)> e,
                 std::function<double(const LocalFoliation&)> m) {
  return {std::move(name), std::move(derivation), std::move(e), std::move(m)};
}

void add_common_zero_checks(Scenario& s) {
  s.expected.push_back(ev("H_perp_norm", "D-perp frame has geodesic integral curves",
                          [](const Point&) { return 0.0; },
                          [](const LocalFoliation& lf) {
                            return lf.geometry().norm(lf.mean_curvature_perp());
                          }));
}

LeafSpec coordinate_leaf(std::string name, std::vector<std::pair<int, double>> fixed, int m) {
  LeafSpec leaf{std::move(name), std::move(fixed), {}};
  for (int axis = 0; axis < m; ++axis) {
    const bool pinned = std::any_of(leaf.fixed.begin(), leaf.fixed.end(),
                                    [axis](const auto& f) { return f.first == axis; });
    if (!pinned) leaf.free_axes.push_back(axis);
  }
  return leaf;
}

}  // namespace

double TrigProfile::derivative(double z, int order) const {
  double s = order == 0 ? c0 : 0.0;
  for (std::size_t i = 0; i < cos_coeffs.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double c = std::cos(k * z), sn = std::sin(k * z);
    switch (order) {
      case 0: s += cos_coeffs[i] * c; break;
      case 1: s -= cos_coeffs[i] * k * sn; break;
      default: s -= cos_coeffs[i] * k * k * c; break;
    }
  }
  for (std::size_t i = 0; i < sin_coeffs.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double c = std::cos(k * z), sn = std::sin(k * z);
    switch (order) {
      case 0: s += sin_coeffs[i] * sn; break;
      case 1: s += sin_coeffs[i] * k * c; break;
      default: s -= sin_coeffs[i] * k * k * sn; break;
    }
  }
  return s;
}

Jet2 TrigProfile::operator()(const Jet2& z) const {
  return compose(z, derivative(z.v, 0), derivative(z.v, 1), derivative(z.v, 2));
}

double TrigProfile::scan_min() const {
  double lo = value(0.0);
  constexpr int kSamples = 4096;
  for (int i = 1; i < kSamples; ++i) lo = std::min(lo, value(kTwoPi * i / kSamples));
  return lo;
}

TrigProfile constant_profile(double c) { return TrigProfile{c, {}, {}}; }
TrigProfile default_warp_a() { return TrigProfile{2.0, {1.0}, {}}; }
TrigProfile default_warp_b() { return TrigProfile{2.0, {}, {1.0}}; }
TrigProfile default_tilt() { return TrigProfile{0.0, {}, {0.5}}; }

const LeafSpec& Scenario::leaf(const std::string& leaf_name) const {
  if (leaves.empty())
    throw UnsupportedLeafError("scenario '" + name + "' declares no closed leaves");
  for (const auto& l : leaves)
    if (l.name == leaf_name) return l;
  throw UnsupportedLeafError("scenario '" + name + "' has no leaf named '" + leaf_name + "'");
}

std::vector<Point> probe_points(const Manifold& manifold, int count) {
  const int m = manifold.dim();
  if (!manifold.is_chart()) return {Point::Zero(m)};
  // Kronecker sequence with the generalized golden ratio.
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (m + 1));
  Vec alpha(m);
  for (int i = 0; i < m; ++i) alpha[i] = std::fmod(std::pow(1.0 / phi, i + 1), 1.0);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Point p(m);
    for (int i = 0; i < m; ++i) {
      const double u = std::fmod(0.5 + alpha[i] * (k + 1), 1.0);
      p[i] = u * manifold.periods()[i];
    }
    pts.push_back(p);
  }
  return pts;
}

void verify_flags(Scenario& s) {
  FlagMeasurements& fm = s.measured;
  fm = FlagMeasurements{};
  for (const Point& p : probe_points(s.manifold())) {
    const LocalFoliation lf(s.fm, p);
    fm.harmonic_max = std::max(fm.harmonic_max, lf.geometry().norm(lf.mean_curvature_perp()));
    fm.admissibility_max = std::max(fm.admissibility_max, lf.admissibility_residual());
    fm.integrability_max = std::max(fm.integrability_max, lf.integrability_residual());
    fm.p_curvature_invariance_max =
        std::max(fm.p_curvature_invariance_max, p_curvature_invariance_residual(lf));
    if (s.flags.pcurv_c)
      fm.pcurv_c_max = std::max(fm.pcurv_c_max, constant_p_curvature_residual(lf, *s.flags.pcurv_c));
    fm.umbilicity_max = std::max(fm.umbilicity_max, umbilicity_residual(lf));
    if (lf.shape_asymmetry() > 1e-10)
      throw ConstructionError("scenario '" + s.name + "': shape operator is not symmetric");
  }
  auto check = [&](bool declared, bool measured, const std::string& what, double value) {
    if (declared != measured)
      throw ConstructionError("scenario '" + s.name + "': flag " + what + " declared " +
                              (declared ? "true" : "false") + " but measured " +
                              std::to_string(value));
  };
  if (fm.integrability_max > kIntegrabilityTolerance)
    throw ConstructionError("scenario '" + s.name + "': leaf frame is not integrable (residual " +
                            std::to_string(fm.integrability_max) + ")");
  check(s.flags.harmonic_perp, fm.harmonic_max <= kHarmonicTolerance, "harmonic_perp",
        fm.harmonic_max);
  check(s.flags.admissible, fm.admissibility_max <= kAdmissibilityTolerance, "admissible",
        fm.admissibility_max);
  check(s.flags.p_curvature_invariant, fm.p_curvature_invariance_max <= kFlagTolerance,
        "p_curvature_invariant", fm.p_curvature_invariance_max);
  if (s.flags.pcurv_c && fm.pcurv_c_max > kFlagTolerance)
    throw ConstructionError("scenario '" + s.name + "': constant P-curvature claim fails (" +
                            std::to_string(fm.pcurv_c_max) + ")");
  check(s.flags.umbilical, fm.umbilicity_max <= kFlagTolerance, "umbilical", fm.umbilicity_max);

  // Declared leaves must be tangent to their coordinate subtori.
  for (const auto& leaf : s.leaves) {
    const int m = s.m();
    for (const Point& q : probe_points(s.manifold(), 16)) {
      Point p = q;
      for (const auto& [axis, value] : leaf.fixed) p[axis] = value;
      const LocalFoliation lf(s.fm, p);
      for (int i = 0; i < s.n(); ++i) {
        const Vec e = lf.leaf(i);
        for (const auto& [axis, value] : leaf.fixed)
          if (std::abs(e[axis]) > 1e-12)
            throw ConstructionError("scenario '" + s.name + "': leaf '" + leaf.name +
                                    "' is not tangent to the foliation");
      }
      if (static_cast<int>(leaf.free_axes.size()) != s.n() || m - static_cast<int>(leaf.fixed.size()) != s.n())
        throw ConstructionError("leaf '" + leaf.name + "' has the wrong dimension");
    }
  }
}

Scenario build_flat_torus(int m, int n) {
  if (n < 1 || n >= m - 1 || m > kMaxDim)
    throw ConstructionError("flat torus needs 1 <= n < m - 1 <= " + std::to_string(kMaxDim - 1));
  Scenario s;
  s.name = "flat_torus";
  s.description = "flat unit-period " + std::to_string(m) + "-torus, coordinate foliation with n = " +
                  std::to_string(n);
  ChartManifold chart{m, full_periods(m, 1.0), [m](const Point&) {
                        Matrix<Jet2> g(m, m);
                        for (int i = 0; i < m; ++i)
                          for (int j = 0; j < m; ++j) g(i, j) = Jet2(i == j ? 1.0 : 0.0);
                        return g;
                      }};
  FoliationStructure fol;
  fol.leaf_dim = n;
  fol.leaf_frame = [m, n](const Point&) {
    std::vector<Vector<Jet2>> f;
    for (int i = 0; i < n; ++i) f.push_back(coordinate_field(m, i));
    return f;
  };
  fol.normal = [m, n](const Point&) { return coordinate_field(m, n); };
  fol.integrability_witness = "leaves are coordinate subtori {x_n, ..., x_{m-1} fixed}";
  auto perp = [m, n](const Point&) {
    std::vector<Vector<Jet2>> f;
    for (int i = n + 1; i < m; ++i) f.push_back(coordinate_field(m, i));
    return f;
  };
  s.fm = FoliatedManifold{SubRiemannianManifold{Manifold(std::move(chart)), distribution_from(fol, perp)},
                          fol};
  s.flags = {true, true, true, 0.0, true};
  s.expected = {
      ev("sigma1", "A vanishes for a flat product", [](const Point&) { return 0.0; },
         [](const LocalFoliation& lf) { return lf.sigma(1); }),
      ev("RicP_NN", "flat metric", [](const Point&) { return 0.0; },
         [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal()); }),
      ev("admissibility", "parallel frame", [](const Point&) { return 0.0; },
         [](const LocalFoliation& lf) { return lf.admissibility_residual(); }),
  };
  add_common_zero_checks(s);
  std::vector<std::pair<int, double>> fixed;
  for (int i = n; i < m; ++i) fixed.emplace_back(i, 0.0);
  s.leaves = {coordinate_leaf("origin", fixed, m)};
  s.default_grid.assign(static_cast<std::size_t>(m), 4);
  verify_flags(s);
  return s;
}

Scenario build_warped_torus(int m, const TrigProfile& a, const TrigProfile& b) {
  if (m != 3 && m != 4) throw ConstructionError("warped torus needs m = 3 or m = 4");
  if (!(a.scan_min() > 0.0) || (m == 4 && !(b.scan_min() > 0.0)))
    throw ConstructionError("warp profiles must be strictly positive");
  const int n = m - 2;
  const int zaxis = m - 1;
  Scenario s;
  s.name = m == 3 ? "warped_torus_3" : "warped_torus_4";
  s.description = m == 3 ? "dx^2 + a(z)^2 dy^2 + dz^2, D = span(dy, dz), N = dz"
                         : "dx^2 + a(z)^2 dy1^2 + b(z)^2 dy2^2 + dz^2, D = span(dy1, dy2, dz), N = dz";
  ChartManifold chart{m, full_periods(m, kTwoPi), warped_metric(m, a, b)};
  FoliationStructure fol;
  fol.leaf_dim = n;
  fol.leaf_frame = [m, a, b, zaxis](const Point& p) {
    const Jet2 z = coordinate(p, zaxis);
    std::vector<Vector<Jet2>> f;
    Vector<Jet2> e1 = zero_field(m);
    e1[1] = 1.0 / a(z);
    f.push_back(e1);
    if (m == 4) {
      Vector<Jet2> e2 = zero_field(m);
      e2[2] = 1.0 / b(z);
      f.push_back(e2);
    }
    return f;
  };
  fol.normal = [m, zaxis](const Point&) { return coordinate_field(m, zaxis); };
  fol.integrability_witness = "leaves are coordinate subtori {x, z fixed}";
  auto perp = [m](const Point&) { return std::vector<Vector<Jet2>>{coordinate_field(m, 0)}; };
  s.fm = FoliatedManifold{SubRiemannianManifold{Manifold(std::move(chart)), distribution_from(fol, perp)},
                          fol};
  // Umbilical iff a = b (n = 1 is always umbilical).
  const bool umbilical = m == 3 || a == b;
  s.flags = {true, true, true, std::nullopt, umbilical};

  auto zc = [zaxis](const Point& p) { return p[zaxis]; };
  // Warped-product oracles, derived by hand from the diagonal metric.
  s.expected.push_back(ev("A11", "-a'/a", [a, zc](const Point& p) {
    const double z = zc(p);
    return -a.derivative(z, 1) / a.value(z);
  }, [](const LocalFoliation& lf) { return leaf_entry(lf, 0, 0); }));
  s.expected.push_back(ev("Gamma^y1_{y1 z}", "a'/a", [a, zc](const Point& p) {
    const double z = zc(p);
    return a.derivative(z, 1) / a.value(z);
  }, [zaxis](const LocalFoliation& lf) { return lf.geometry().christoffel()(1, 1, zaxis); }));
  s.expected.push_back(ev("Gamma^z_{y1 y1}", "-a a'", [a, zc](const Point& p) {
    const double z = zc(p);
    return -a.value(z) * a.derivative(z, 1);
  }, [zaxis](const LocalFoliation& lf) { return lf.geometry().christoffel()(zaxis, 1, 1); }));
  s.expected.push_back(ev("<h(e1,e1),N>", "-a'/a", [a, zc](const Point& p) {
    const double z = zc(p);
    return -a.derivative(z, 1) / a.value(z);
  }, [](const LocalFoliation& lf) {
    return lf.geometry().inner(lf.second_fundamental_form(lf.leaf(0), lf.leaf(0)), lf.normal());
  }));
  s.expected.push_back(ev("<R(e1,N)N,e1>", "-a''/a", [a, zc](const Point& p) {
    const double z = zc(p);
    return -a.derivative(z, 2) / a.value(z);
  }, [](const LocalFoliation& lf) {
    const Vec R = lf.geometry().riemann(lf.leaf_frame()[0], lf.normal_field(), lf.normal_field());
    return lf.geometry().inner(R, lf.leaf(0));
  }));
  s.expected.push_back(ev("nablaF_N_A_11", "-(a'/a)'", [a, zc](const Point& p) {
    const double z = zc(p), v = a.value(z), d = a.derivative(z, 1);
    return -(a.derivative(z, 2) * v - d * d) / (v * v);
  }, [](const LocalFoliation& lf) { return lf.nablaF_N_A()(0, 0); }));
  s.expected.push_back(ev("Z_norm", "nabla_dz dz = 0", [](const Point&) { return 0.0; },
                          [](const LocalFoliation& lf) { return lf.geometry().norm(lf.Z()); }));
  s.expected.push_back(ev("admissibility", "nabla_dx dz = 0", [](const Point&) { return 0.0; },
                          [](const LocalFoliation& lf) { return lf.admissibility_residual(); }));
  if (m == 4) {
    s.expected.push_back(ev("A22", "-b'/b", [b, zc](const Point& p) {
      const double z = zc(p);
      return -b.derivative(z, 1) / b.value(z);
    }, [](const LocalFoliation& lf) { return leaf_entry(lf, 1, 1); }));
    s.expected.push_back(ev("A12", "diagonal metric", [](const Point&) { return 0.0; },
                            [](const LocalFoliation& lf) { return leaf_entry(lf, 0, 1); }));
    s.expected.push_back(ev("sigma1", "-(ab)'/(ab)", [a, b, zc](const Point& p) {
      const double z = zc(p);
      return -a.derivative(z, 1) / a.value(z) - b.derivative(z, 1) / b.value(z);
    }, [](const LocalFoliation& lf) { return lf.sigma(1); }));
    s.expected.push_back(ev("sigma2", "a'b'/(ab)", [a, b, zc](const Point& p) {
      const double z = zc(p);
      return a.derivative(z, 1) * b.derivative(z, 1) / (a.value(z) * b.value(z));
    }, [](const LocalFoliation& lf) { return lf.sigma(2); }));
    s.expected.push_back(ev("RicP_NN", "-a''/a - b''/b", [a, b, zc](const Point& p) {
      const double z = zc(p);
      return -a.derivative(z, 2) / a.value(z) - b.derivative(z, 2) / b.value(z);
    }, [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal()); }));
    s.expected.push_back(ev("nablaF_N_A_22", "-(b'/b)'", [b, zc](const Point& p) {
      const double z = zc(p), v = b.value(z), d = b.derivative(z, 1);
      return -(b.derivative(z, 2) * v - d * d) / (v * v);
    }, [](const LocalFoliation& lf) { return lf.nablaF_N_A()(1, 1); }));
    s.expected.push_back(ev("dvol", "a b", [a, b, zc](const Point& p) {
      const double z = zc(p);
      return a.value(z) * b.value(z);
    }, det_density));
  } else {
    s.expected.push_back(ev("sigma1", "-a'/a", [a, zc](const Point& p) {
      const double z = zc(p);
      return -a.derivative(z, 1) / a.value(z);
    }, [](const LocalFoliation& lf) { return lf.sigma(1); }));
    s.expected.push_back(ev("RicP_NN", "-a''/a", [a, zc](const Point& p) {
      const double z = zc(p);
      return -a.derivative(z, 2) / a.value(z);
    }, [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal()); }));
    s.expected.push_back(ev("dvol", "a", [a, zc](const Point& p) { return a.value(zc(p)); },
                            det_density));
  }
  add_common_zero_checks(s);
  for (double z0 : {0.0, 1.0, 2.5})
    s.leaves.push_back(coordinate_leaf("z=" + std::to_string(z0).substr(0, 3), {{0, 0.0}, {zaxis, z0}}, m));
  s.default_grid.assign(static_cast<std::size_t>(m), 4);
  s.default_grid.back() = 64;
  verify_flags(s);
  return s;
}

Scenario build_warped_torus_3() { return build_warped_torus(3, default_warp_a(), default_warp_b()); }
Scenario build_warped_torus_4() { return build_warped_torus(4, default_warp_a(), default_warp_b()); }

Scenario build_warped_torus_4_umbilical() {
  Scenario s = build_warped_torus(4, default_warp_a(), default_warp_a());
  s.name = "warped_torus_4_umbilical";
  s.description = "warped 4-torus with a = b = 2 + cos z (totally umbilical leaves)";
  return s;
}

Scenario build_warped_torus_3_classical(const TrigProfile& a, const TrigProfile& b) {
  if (!(a.scan_min() > 0.0) || !(b.scan_min() > 0.0))
    throw ConstructionError("warp profiles must be strictly positive");
  constexpr int m = 3;
  Scenario s;
  s.name = "warped_torus_3_classical";
  s.description = "a(z)^2 dy1^2 + b(z)^2 dy2^2 + dz^2 with D = TM (P = Id)";
  ChartManifold chart{m, full_periods(m, kTwoPi), [a, b](const Point& p) {
                        const Jet2 z = coordinate(p, 2);
                        Matrix<Jet2> g(3, 3);
                        for (int i = 0; i < 3; ++i)
                          for (int j = 0; j < 3; ++j) g(i, j) = Jet2(0.0);
                        const Jet2 av = a(z), bv = b(z);
                        g(0, 0) = av * av;
                        g(1, 1) = bv * bv;
                        g(2, 2) = Jet2(1.0);
                        return g;
                      }};
  FoliationStructure fol;
  fol.leaf_dim = 2;
  fol.leaf_frame = [a, b](const Point& p) {
    const Jet2 z = coordinate(p, 2);
    Vector<Jet2> e1 = zero_field(m), e2 = zero_field(m);
    e1[0] = 1.0 / a(z);
    e2[1] = 1.0 / b(z);
    return std::vector<Vector<Jet2>>{e1, e2};
  };
  fol.normal = [](const Point&) { return coordinate_field(m, 2); };
  fol.integrability_witness = "leaves are coordinate tori {z fixed}";
  s.fm = FoliatedManifold{SubRiemannianManifold{Manifold(std::move(chart)),
                                                distribution_from(fol, [](const Point&) {
                                                  return std::vector<Vector<Jet2>>{};
                                                })},
                          fol};
  s.flags = {true, true, true, std::nullopt, false};
  auto zc = [](const Point& p) { return p[2]; };
  s.expected.push_back(ev("A11", "-a'/a", [a, zc](const Point& p) {
    const double z = zc(p);
    return -a.derivative(z, 1) / a.value(z);
  }, [](const LocalFoliation& lf) { return leaf_entry(lf, 0, 0); }));
  s.expected.push_back(ev("Ric_NN", "-a''/a - b''/b", [a, b, zc](const Point& p) {
    const double z = zc(p);
    return -a.derivative(z, 2) / a.value(z) - b.derivative(z, 2) / b.value(z);
  }, [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal(), CurvatureKind::Riemannian); }));
  s.leaves.push_back(coordinate_leaf("z=0.0", {{2, 0.0}}, m));
  s.default_grid = {4, 4, 64};
  verify_flags(s);
  return s;
}

Scenario build_tilted_torus(const TrigProfile& a, const TrigProfile& b, const TrigProfile& theta) {
  if (!(a.scan_min() > 0.0) || !(b.scan_min() > 0.0))
    throw ConstructionError("warp profiles must be strictly positive");
  constexpr int m = 4;
  Scenario s;
  s.name = "tilted_torus";
  s.description =
      "warped 4-torus, N = cos(theta) dz + sin(theta) dy2/b, theta = theta(z), D-perp = span(dx)";
  ChartManifold chart{m, full_periods(m, kTwoPi), warped_metric(m, a, b)};
  FoliationStructure fol;
  fol.leaf_dim = 2;
  fol.leaf_frame = [a, b, theta](const Point& p) {
    const Jet2 z = coordinate(p, 3);
    const Jet2 t = theta(z);
    Vector<Jet2> e1 = zero_field(m), e2 = zero_field(m);
    e1[1] = 1.0 / a(z);
    e2[2] = cos(t) / b(z);
    e2[3] = -sin(t);
    return std::vector<Vector<Jet2>>{e1, e2};
  };
  fol.normal = [b, theta](const Point& p) {
    const Jet2 z = coordinate(p, 3);
    const Jet2 t = theta(z);
    Vector<Jet2> N = zero_field(m);
    N[2] = sin(t) / b(z);
    N[3] = cos(t);
    return N;
  };
  fol.integrability_witness =
      "TF = span(dy1, e2) with e2 independent of y1: [e1, e2] = 0 since e1 = dy1/a(z) has no z "
      "component";
  auto perp = [](const Point&) { return std::vector<Vector<Jet2>>{coordinate_field(m, 0)}; };
  s.fm = FoliatedManifold{SubRiemannianManifold{Manifold(std::move(chart)), distribution_from(fol, perp)},
                          fol};
  // With theta = 0 this is the warped torus, whose leaves are P-curvature
  // invariant (and umbilical when a = b).
  const bool untilted = theta == constant_profile(0.0);
  s.flags = {true, true, untilted, std::nullopt, untilted && a == b};

  auto th = [theta](const Point& p) { return theta.value(p[3]); };
  auto kappa = [b, theta](double z) {
    const double t = theta.value(z);
    return theta.derivative(z, 1) * std::cos(t) + b.derivative(z, 1) / b.value(z) * std::sin(t);
  };
  // Frame-rotation oracles (symbolic; see tests/oracles/tilted_torus.py).
  s.expected.push_back(ev("A11", "-cos(theta) a'/a", [a, th](const Point& p) {
    return -std::cos(th(p)) * a.derivative(p[3], 1) / a.value(p[3]);
  }, [](const LocalFoliation& lf) { return leaf_entry(lf, 0, 0); }));
  s.expected.push_back(ev("A22", "sin(theta) theta' - cos(theta) b'/b", [b, theta, th](const Point& p) {
    const double z = p[3], t = th(p);
    return std::sin(t) * theta.derivative(z, 1) - std::cos(t) * b.derivative(z, 1) / b.value(z);
  }, [](const LocalFoliation& lf) { return leaf_entry(lf, 1, 1); }));
  s.expected.push_back(ev("Z^y2", "kappa cos(theta)/b", [b, th, kappa](const Point& p) {
    return kappa(p[3]) * std::cos(th(p)) / b.value(p[3]);
  }, [](const LocalFoliation& lf) { return lf.Z()[2]; }));
  s.expected.push_back(ev("Z^z", "-kappa sin(theta)", [th, kappa](const Point& p) {
    return -kappa(p[3]) * std::sin(th(p));
  }, [](const LocalFoliation& lf) { return lf.Z()[3]; }));
  s.expected.push_back(ev("admissibility", "D-perp = span(dx) is parallel", [](const Point&) { return 0.0; },
                          [](const LocalFoliation& lf) { return lf.admissibility_residual(); }));
  add_common_zero_checks(s);
  // Leaves through the zeros of theta are closed coordinate tori.
  for (double z0 : {0.0, std::numbers::pi}) {
    if (std::abs(theta.value(z0)) > 1e-14) continue;
    s.leaves.push_back(coordinate_leaf(z0 == 0.0 ? "z=0" : "z=pi", {{0, 0.0}, {3, z0}}, m));
  }
  s.default_grid = {4, 4, 4, 64};
  verify_flags(s);
  return s;
}

Scenario build_tilted_torus() {
  return build_tilted_torus(default_warp_a(), default_warp_b(), default_tilt());
}

Scenario build_heisenberg() {
  // X = 0, Y = 1, T = 2 with [X, Y] = T.
  InvariantFrameManifold frame{3, std::vector<double>(27, 0.0), 1.0};
  frame.structure[(2 * 3 + 0) * 3 + 1] = 1.0;
  frame.structure[(2 * 3 + 1) * 3 + 0] = -1.0;
  Scenario s;
  s.name = "heisenberg";
  s.description = "Heisenberg nilmanifold, [X, Y] = T, D = span(X, T), TF = span(X), N = T";
  s.backend = Backend::InvariantFrame;
  FoliationStructure fol;
  fol.leaf_dim = 1;
  fol.leaf_frame = [](const Point&) { return std::vector<Vector<Jet2>>{coordinate_field(3, 0)}; };
  fol.normal = [](const Point&) { return coordinate_field(3, 2); };
  fol.integrability_witness = "rank-one distribution span(X)";
  auto perp = [](const Point&) { return std::vector<Vector<Jet2>>{coordinate_field(3, 1)}; };
  s.fm = FoliatedManifold{SubRiemannianManifold{Manifold(std::move(frame)), distribution_from(fol, perp)},
                          fol};
  s.flags = {true, false, true, std::nullopt, true};
  s.expected = {
      ev("A11", "Koszul: <nabla_X T, X> = 0", [](const Point&) { return 0.0; },
         [](const LocalFoliation& lf) { return leaf_entry(lf, 0, 0); }),
      ev("RicP_NN", "R^P(X, T)T = 0", [](const Point&) { return 0.0; },
         [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal()); }),
      ev("Ric_NN (Riemannian)", "<R(X, T)T, X> = 1/4", [](const Point&) { return 0.25; },
         [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal(), CurvatureKind::Riemannian); }),
      ev("Z_norm", "nabla_T T = 0", [](const Point&) { return 0.0; },
         [](const LocalFoliation& lf) { return lf.geometry().norm(lf.Z()); }),
      ev("admissibility", "|P nabla_Y T| = |X/2|", [](const Point&) { return 0.5; },
         [](const LocalFoliation& lf) { return lf.admissibility_residual(); }),
  };
  add_common_zero_checks(s);
  verify_flags(s);
  return s;
}

Scenario build_round_s3() {
  // [e1, e2] = 2 e3 and cyclic.
  InvariantFrameManifold frame{3, std::vector<double>(27, 0.0), 2.0 * std::numbers::pi * std::numbers::pi};
  auto set = [&frame](int k, int i, int j, double v) {
    frame.structure[static_cast<std::size_t>((k * 3 + i) * 3 + j)] = v;
    frame.structure[static_cast<std::size_t>((k * 3 + j) * 3 + i)] = -v;
  };
  set(2, 0, 1, 2.0);
  set(0, 1, 2, 2.0);
  set(1, 2, 0, 2.0);
  Scenario s;
  s.name = "round_s3";
  s.description = "unit round S^3 as SU(2), D = span(e1, e2), TF = span(e1), N = e2";
  s.backend = Backend::InvariantFrame;
  FoliationStructure fol;
  fol.leaf_dim = 1;
  fol.leaf_frame = [](const Point&) { return std::vector<Vector<Jet2>>{coordinate_field(3, 0)}; };
  fol.normal = [](const Point&) { return coordinate_field(3, 1); };
  fol.integrability_witness = "rank-one distribution span(e1)";
  auto perp = [](const Point&) { return std::vector<Vector<Jet2>>{coordinate_field(3, 2)}; };
  s.fm = FoliatedManifold{SubRiemannianManifold{Manifold(std::move(frame)), distribution_from(fol, perp)},
                          fol};
  s.flags = {true, false, true, std::nullopt, true};
  s.expected = {
      ev("RicP_NN", "invariant-frame Koszul computation", [](const Point&) { return 2.0; },
         [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal()); }),
      ev("<R(e1,e2)e2,e1>", "bi-invariant: |[X, Y]|^2 / 4", [](const Point&) { return 1.0; },
         [](const LocalFoliation& lf) { return lf.ricci_P(lf.normal(), CurvatureKind::Riemannian); }),
      ev("sigma1", "nabla_{e1} e2 = e3 leaves D", [](const Point&) { return 0.0; },
         [](const LocalFoliation& lf) { return lf.sigma(1); }),
      ev("admissibility", "|P(nabla_{e3} e2)| = |e1|", [](const Point&) { return 1.0; },
         [](const LocalFoliation& lf) { return lf.admissibility_residual(); }),
  };
  add_common_zero_checks(s);
  verify_flags(s);
  return s;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names = {"flat_torus",     "heisenberg",     "round_s3",
                                    "tilted_torus",   "warped_torus_3", "warped_torus_3_classical",
                                    "warped_torus_4", "warped_torus_4_umbilical"};
  std::sort(names.begin(), names.end());
  return names;
}

Scenario build_scenario(const std::string& name) {
  if (name == "flat_torus") return build_flat_torus();
  if (name == "heisenberg") return build_heisenberg();
  if (name == "round_s3") return build_round_s3();
  if (name == "tilted_torus") return build_tilted_torus();
  if (name == "warped_torus_3") return build_warped_torus_3();
  if (name == "warped_torus_3_classical")
    return build_warped_torus_3_classical(default_warp_a(), default_warp_b());
  if (name == "warped_torus_4") return build_warped_torus_4();
  if (name == "warped_torus_4_umbilical") return build_warped_torus_4_umbilical();
  throw ConstructionError("unknown scenario '" + name + "'");
}

}  // namespace foliate
