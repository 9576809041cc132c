#pragma once

// Batch runs: configuration parsing, check dispatch and exit-status policy.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "foliate/report.hpp"
#include "foliate/scenarios.hpp"

namespace foliate {

enum class CheckKind {
  Reeb,
  Main,
  Leaf,
  Pointwise,
  Codazzi,
  TraceIdentities,
  ClosedFormC,
  ClosedFormEinstein,
  Umbilical,
  DivergenceSelftest,
  Sigma2Image,
  ExpectedValues,
};

struct Check {
  CheckKind kind = CheckKind::Reeb;
  /// r for main:r and leaf:r; -1 means every valid r.
  int r = -1;

  std::string name() const;
  bool operator==(const Check&) const = default;
};

/// Accepts the names listed in the README ("main:1", "leaf", ...).
/// Throws ParseError for unknown names.
Check parse_check(const std::string& name);
/// Every check name, with r-indexed checks in their unindexed form.
std::vector<std::string> check_names();

/// Scenario chosen by catalog name or by inline warp profiles.
struct ScenarioSpec {
  std::string name;                  ///< catalog name, when set
  std::string kind;                  ///< warped_torus | warped_torus_3_classical | tilted_torus
  int m = 4;
  TrigProfile a, b, theta;

  bool is_inline() const { return name.empty(); }
  bool operator==(const ScenarioSpec&) const = default;
};

enum class ReportFormat { Table, Structured };

struct RunConfig {
  ScenarioSpec scenario;
  std::vector<Check> checks;
  std::vector<int> grid;
  std::optional<double> tolerance;
  /// Constant for closed-form-c and sigma2-image (scenario's own c when unset).
  std::optional<double> c;
  int einstein_n_max = 10;
  double einstein_C = 3.0;
  double einstein_volume = 1.0;
  int umbilical_tuples = 1000;
  std::uint64_t umbilical_seed = 1;
  bool convergence_gate = true;
  int threads = 0;
  std::string output = "foliate-report.json";
  ReportFormat format = ReportFormat::Table;
  bool timing = true;
  bool verbose = false;
};

/// Parses a JSON configuration; ParseError messages name the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text, const std::string& source);
/// The configuration echoed into reports (no output path, format or verbosity).
nlohmann::json config_to_json(const RunConfig& config);

/// ConstructionError for unknown names or invalid profiles.
Scenario build_scenario(const ScenarioSpec& spec);

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

struct RunResult {
  ReportDocument document;
  int exit_status = kExitOk;
};

/// Runs every configured check on one scenario. RangeError is raised for an
/// r outside [0, n - 1]; an empty check list means every applicable check.
RunResult run(const RunConfig& config);

}  // namespace foliate
