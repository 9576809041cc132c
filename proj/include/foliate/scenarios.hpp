#pragma once

// Catalog of closed foliated sub-Riemannian manifolds with known invariants.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "foliate/foliation.hpp"

namespace foliate {

/// f(z) = c0 + sum_k (cos_k cos(kz) + sin_k sin(kz)), k = 1, 2, ...
struct TrigProfile {
  double c0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double value(double z) const { return derivative(z, 0); }
  /// order in {0, 1, 2}
  double derivative(double z, int order) const;
  Jet2 operator()(const Jet2& z) const;
  /// Smallest value on a fine scan; used to reject nonpositive warps.
  double scan_min() const;

  bool operator==(const TrigProfile&) const = default;
};

TrigProfile constant_profile(double c);

enum class Backend { Chart, InvariantFrame };

struct ScenarioFlags {
  bool harmonic_perp = false;
  bool admissible = false;
  bool p_curvature_invariant = false;
  /// Constant P-curvature c, when claimed.
  std::optional<double> pcurv_c;
  bool umbilical = false;
};

/// A closed form checked against the generic stack.
struct ExpectedValue {
  std::string name;
  std::string derivation;
  std::function<double(const Point&)> expected;
  std::function<double(const LocalFoliation&)> measured;
};

/// A compact leaf tangent to a coordinate subtorus: coordinates in `fixed`
/// are pinned, the remaining axes run over full periods.
struct LeafSpec {
  std::string name;
  std::vector<std::pair<int, double>> fixed;
  std::vector<int> free_axes;
};

struct FlagMeasurements {
  double harmonic_max = 0.0;
  double admissibility_max = 0.0;
  double integrability_max = 0.0;
  double p_curvature_invariance_max = 0.0;
  double pcurv_c_max = 0.0;
  double umbilicity_max = 0.0;
};

struct Scenario {
  std::string name;
  std::string description;
  Backend backend = Backend::Chart;
  FoliatedManifold fm;
  ScenarioFlags flags;
  FlagMeasurements measured;
  std::vector<ExpectedValue> expected;
  std::vector<LeafSpec> leaves;
  /// Default per-axis node counts (ignored for invariant frames).
  std::vector<int> default_grid;

  const Manifold& manifold() const { return fm.manifold(); }
  int m() const { return fm.manifold().dim(); }
  int n() const { return fm.leaf_dim(); }
  const LeafSpec& leaf(const std::string& leaf_name) const;
};

inline constexpr double kAdmissibilityTolerance = 1e-8;
inline constexpr double kIntegrabilityTolerance = 1e-9;
inline constexpr double kFlagTolerance = 1e-9;

/// Fixed low-discrepancy probe set (128 points) on the scenario chart.
std::vector<Point> probe_points(const Manifold& manifold, int count = 128);

/// Measures every flag on the probe set and throws ConstructionError when a
/// declared flag disagrees with the measurement.
void verify_flags(Scenario& s);

Scenario build_flat_torus(int m = 4, int n = 2);
/// m = 3: metric dx^2 + a^2 dy^2 + dz^2, n = 1.
/// m = 4: metric dx^2 + a^2 dy1^2 + b^2 dy2^2 + dz^2, n = 2.
Scenario build_warped_torus(int m, const TrigProfile& a, const TrigProfile& b);
Scenario build_warped_torus_3();
Scenario build_warped_torus_4();
Scenario build_warped_torus_4_umbilical();
/// D = TM on the 3-dimensional warped metric a^2 dy1^2 + b^2 dy2^2 + dz^2.
Scenario build_warped_torus_3_classical(const TrigProfile& a, const TrigProfile& b);
/// Warped 4-torus with N = cos(theta) dz + sin(theta) dy2 / b.
Scenario build_tilted_torus(const TrigProfile& a, const TrigProfile& b, const TrigProfile& theta);
Scenario build_tilted_torus();
Scenario build_heisenberg();
Scenario build_round_s3();

TrigProfile default_warp_a();
TrigProfile default_warp_b();
TrigProfile default_tilt();

/// Sorted scenario names.
std::vector<std::string> scenario_names();
/// Throws ConstructionError for unknown names.
Scenario build_scenario(const std::string& name);

}  // namespace foliate
