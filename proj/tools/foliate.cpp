// foliate: runs the verification suite on a scenario and writes reports.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "foliate/errors.hpp"
#include "foliate/run.hpp"

namespace {

using namespace foliate;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1)
      throw ParseError("--grid: expected comma-separated positive integers, got '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("--grid: empty");
  return out;
}

std::string flag_text(const Scenario& s) {
  std::ostringstream os;
  os << "harmonic_perp=" << (s.flags.harmonic_perp ? "yes" : "no")
     << " admissible=" << (s.flags.admissible ? "yes" : "no")
     << " p_curvature_invariant=" << (s.flags.p_curvature_invariant ? "yes" : "no")
     << " umbilical=" << (s.flags.umbilical ? "yes" : "no");
  if (s.flags.pcurv_c) os << " pcurv_c=" << *s.flags.pcurv_c;
  return os.str();
}

int list_scenarios(bool structured) {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& name : scenario_names()) {
    const Scenario s = build_scenario(name);
    if (structured) {
      nlohmann::json e;
      e["name"] = s.name;
      e["description"] = s.description;
      e["backend"] = s.backend == Backend::Chart ? "chart" : "invariant-frame";
      e["m"] = s.m();
      e["n"] = s.n();
      e["flags"] = {{"harmonic_perp", s.flags.harmonic_perp},
                    {"admissible", s.flags.admissible},
                    {"p_curvature_invariant", s.flags.p_curvature_invariant},
                    {"pcurv_c", s.flags.pcurv_c ? nlohmann::json(*s.flags.pcurv_c) : nlohmann::json(nullptr)},
                    {"umbilical", s.flags.umbilical}};
      e["measured"] = {{"harmonic_max", s.measured.harmonic_max},
                       {"admissibility_max", s.measured.admissibility_max}};
      nlohmann::json ex = nlohmann::json::array();
      for (const auto& v : s.expected) ex.push_back({{"name", v.name}, {"derivation", v.derivation}});
      e["expected"] = ex;
      nlohmann::json leaves = nlohmann::json::array();
      for (const auto& l : s.leaves) leaves.push_back(l.name);
      e["leaves"] = leaves;
      e["default_grid"] = s.default_grid;
      all.push_back(e);
      continue;
    }
    std::cout << s.name << " (m=" << s.m() << ", n=" << s.n() << ", "
              << (s.backend == Backend::Chart ? "chart" : "invariant-frame") << ")\n"
              << "  " << s.description << "\n  " << flag_text(s) << "\n";
    if (!s.flags.admissible) std::cout << "  inadmissible: adapted-frame hypotheses fail\n";
    for (const auto& v : s.expected) std::cout << "  expected " << v.name << "  [" << v.derivation << "]\n";
    if (!s.leaves.empty()) {
      std::cout << "  leaves:";
      for (const auto& l : s.leaves) std::cout << " " << l.name;
      std::cout << "\n";
    }
  }
  if (structured) std::cout << all.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification runner for integral formulas of foliated sub-Riemannian manifolds"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run checks on one scenario and write a report");
  std::string config_path, scenario_name, grid_text, output, format;
  std::vector<std::string> check_list;
  std::optional<double> tol, c_value;
  int threads = -1;
  bool verbose = false, no_timing = false, no_gate = false;
  run_cmd->add_option("-c,--config", config_path, "JSON run configuration");
  run_cmd->add_option("-s,--scenario", scenario_name, "Scenario name (overrides the config)");
  run_cmd->add_option("--check", check_list, "Check to run (repeatable; overrides the config)");
  run_cmd->add_option("-g,--grid", grid_text, "Per-axis node counts, e.g. 4,4,4,64");
  run_cmd->add_option("-t,--tol", tol, "Quadrature tolerance override")->check(CLI::PositiveNumber);
  run_cmd->add_option("--pcurv-c", c_value, "Constant for closed-form-c and sigma2-image");
  run_cmd->add_option("-o,--output", output, "Structured report path");
  run_cmd->add_option("-f,--format", format, "Console format")->check(CLI::IsMember({"table", "structured"}));
  run_cmd->add_option("-j,--threads", threads, "Worker threads (0: FOLIATE_THREADS or all cores)");
  run_cmd->add_flag("-v,--verbose", verbose, "Print per-term values and notes");
  run_cmd->add_flag("--no-timing", no_timing, "Omit wall-clock timing from the report");
  run_cmd->add_flag("--no-convergence-gate", no_gate, "Skip the doubled-grid convergence check");

  auto* list_cmd = app.add_subcommand("list", "List the scenario catalog");
  bool list_structured = false;
  list_cmd->add_flag("--structured", list_structured, "JSON output");

  auto* checks_cmd = app.add_subcommand("checks", "List check names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*list_cmd) return list_scenarios(list_structured);
    if (*checks_cmd) {
      for (const auto& n : check_names()) std::cout << n << "\n";
      return kExitOk;
    }

    RunConfig config;
    if (!config_path.empty()) {
      config = parse_config_text(read_file(config_path), config_path);
    } else if (scenario_name.empty()) {
      std::cerr << "error: give --config or --scenario\n";
      return kExitUsage;
    }
    if (!scenario_name.empty()) config.scenario = ScenarioSpec{scenario_name, "", 4, {}, {}, {}};
    if (!check_list.empty()) {
      config.checks.clear();
      for (const auto& name : check_list)
        if (name != "all") config.checks.push_back(parse_check(name));
    }
    if (!grid_text.empty()) config.grid = parse_grid(grid_text);
    if (tol) config.tolerance = tol;
    if (c_value) config.c = c_value;
    if (!output.empty()) config.output = output;
    if (!format.empty()) config.format = format == "structured" ? ReportFormat::Structured : ReportFormat::Table;
    if (threads >= 0) config.threads = threads;
    if (verbose) config.verbose = true;
    if (no_timing) config.timing = false;
    if (no_gate) config.convergence_gate = false;

    const RunResult result = run(config);
    const std::string text = emit_document(result.document);
    write_file_atomic(config.output, text);

    if (config.format == ReportFormat::Structured) {
      std::cout << text;
    } else {
      std::cout << "scenario " << result.document.scenario << "\n";
      write_table(std::cout, result.document.reports, config.verbose);
    }
    const RunSummary s = summarize(result.document.reports);
    std::cerr << s.pass << " pass, " << s.fail << " fail, " << s.inadmissible << " inadmissible, "
              << s.precondition_violation << " precondition-violation, " << s.diagnostic << " diagnostic";
    if (s.warnings() > 0) std::cerr << " (" << s.warnings() << " warning(s): hypotheses not met)";
    std::cerr << "\nreport written to " << config.output << "\n";
    return result.exit_status;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedLeafError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstructionError& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
