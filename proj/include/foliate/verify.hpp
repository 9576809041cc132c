#pragma once

// Integral-formula verification over the scenario catalog.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "foliate/quadrature.hpp"
#include "foliate/scenarios.hpp"

namespace foliate {

enum class Verdict { Pass, Fail, Inadmissible, PreconditionViolation, Diagnostic };

std::string to_string(Verdict v);
/// Throws ParseError on unknown names.
Verdict verdict_from_string(const std::string& s);

struct GridMetadata {
  std::vector<int> axes;    ///< chart axes covered (empty on homogeneous spaces)
  std::vector<int> counts;  ///< nodes per axis
  std::size_t nodes = 0;
  double total_weight = 0.0;  ///< integral of 1 (volume of M or of the leaf)
  std::string isa;

  bool operator==(const GridMetadata&) const = default;
};

struct VerificationReport {
  std::string formula_id;
  std::string scenario;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Fail;
  double admissibility_max = 0.0;
  double harmonic_max = 0.0;
  GridMetadata grid;
  /// Named integrals or pointwise maxima contributing to the residual.
  std::map<std::string, double> terms;
  std::vector<std::string> notes;
  /// Residual on the grid with all counts doubled (convergence gate).
  std::optional<double> refined_residual;
  double wall_seconds = 0.0;

  bool operator==(const VerificationReport&) const = default;
};

inline constexpr double kQuadratureFloor = 1e-7;
inline constexpr double kAlgebraicTolerance = 1e-11;
inline constexpr double kDifferentialTolerance = 1e-8;
inline constexpr double kDivergenceTolerance = 1e-9;
inline constexpr double kConvergenceFraction = 0.1;

struct VerifyOptions {
  /// Per-axis node counts; empty means the scenario default.
  std::vector<int> grid;
  /// Overrides the calibrated quadrature tolerance.
  std::optional<double> tolerance;
  bool convergence_gate = true;
  int threads = 0;
};

/// Runs the verification suite on one scenario. Per-node geometry is
/// sampled once per grid and shared by all checks.
class Verifier {
 public:
  Verifier(const Scenario& scenario, VerifyOptions options = {});
  ~Verifier();

  const Scenario& scenario() const { return scenario_; }
  const QuadratureGrid& grid() const { return grid_; }

  /// integral of Div(sigma_1 N) on the working grid.
  double self_test_residual();
  /// max(1e-7, 10 x |self-test|) unless overridden.
  double tolerance();

  VerificationReport divergence_selftest();
  VerificationReport reeb();
  VerificationReport main(int r);
  /// One report per declared leaf (UnsupportedLeafError if none).
  std::vector<VerificationReport> leaf(int r);
  VerificationReport leaf(int r, const std::string& leaf_name);
  /// Pointwise identities at every grid node, one report per identity.
  std::vector<VerificationReport> pointwise();
  std::vector<VerificationReport> codazzi();
  std::vector<VerificationReport> trace_identities();
  VerificationReport closed_form_c(double c);
  VerificationReport sigma2_image(double c);
  /// Every expected value of the scenario re-derived on the probe set.
  VerificationReport expected_values(int probes = 100);

 private:
  struct Table;
  const Table& table(const QuadratureGrid& grid);
  VerificationReport integral_report(const std::string& id, const QuadratureGrid& grid,
                                     bool needs_harmonic, int r, bool on_leaf);
  GridMetadata metadata(const QuadratureGrid& grid, const Table& t) const;

  const Scenario& scenario_;
  VerifyOptions options_;
  QuadratureGrid grid_;
  std::vector<std::pair<QuadratureGrid, std::unique_ptr<Table>>> tables_;
  std::optional<double> self_test_;
};

/// integral of Div X over the grid, with the given tolerance.
VerificationReport verify_divergence_theorem(const Manifold& manifold, const VectorField& X,
                                             const QuadratureGrid& grid, double tolerance,
                                             int threads = 0);

/// Periodic trigonometric vector field with integer frequencies up to
/// max_freq on every axis of a chart (deterministic in seed).
VectorField trig_field(const Manifold& manifold, std::uint64_t seed, int max_freq = 3);

// --- closed forms -----------------------------------------------------------

/// Integrals sigma_0(F)..sigma_n(F) produced by iterating
/// (r + 2) s_{r+2} = c (n - r) s_r from s_0 = Vol, s_1 = 0.
std::vector<double> pcurv_recurrence(int n, double c, double volume);
/// c^{r/2} binom(n/2, r/2) Vol for even n, r; 0 for odd r (odd n: 0 as well
/// only when c = 0, the recurrence then being vacuous).
double pcurv_closed_form(int n, int r, double c, double volume);

/// Iterates s_{r+2} = C (n - r) / (n (r + 2)) s_r from s_0 = Vol, s_1 = 0.
std::vector<double> einstein_recurrence(int n, double C, double volume);
/// (C/n)^{r/2} binom(n/2, r/2) Vol for even n, r; 0 for odd r.
double einstein_closed_form(int n, int r, double C, double volume);
/// Variant of the closed form with exponent n/2 in place of r/2.
double einstein_closed_form_n_exponent(int n, int r, double C, double volume);

/// Exact integer binomial (n, k), 0 outside 0 <= k <= n.
std::int64_t binomial(int n, int k);
/// a_r = sum_{i=0}^r (-1)^{r-i} binom(n, i), exact.
std::int64_t newton_umbilical_coefficient(int n, int r);

/// Residual |I - K J| / (1 + scale), with I the umbilical substitution into
/// the full integrand (evaluated through matrices) and J the reduced
/// integrand with common factor K = binom(n, r+1) / (n (n - 1)).
double verify_umbilical_reduction(int n, int r, double H, double ricNN, double ricZN);

/// sum_{j=1}^r (-1)^{j-1} (n - r + j) binom(n, r - j) - n binom(n - 2, r - 1), exact.
std::int64_t umbilical_binomial_identity_defect(int n, int r);

VerificationReport verify_closed_form_einstein(int n_max, double C, double volume);
VerificationReport verify_closed_form_pcurv_recurrence(int n_max, double c, double volume);
VerificationReport verify_umbilical_suite(int tuples, std::uint64_t seed);

}  // namespace foliate
