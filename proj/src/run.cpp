#include "foliate/run.hpp"

#include <chrono>

#include "foliate/errors.hpp"

namespace foliate {

using nlohmann::json;

namespace {

struct CheckName {
  const char* name;
  CheckKind kind;
  bool indexed;
};

constexpr CheckName kChecks[] = {
    {"reeb", CheckKind::Reeb, false},
    {"main", CheckKind::Main, true},
    {"leaf", CheckKind::Leaf, true},
    {"pointwise", CheckKind::Pointwise, false},
    {"codazzi", CheckKind::Codazzi, false},
    {"trace-identities", CheckKind::TraceIdentities, false},
    {"closed-form-c", CheckKind::ClosedFormC, false},
    {"closed-form-einstein", CheckKind::ClosedFormEinstein, false},
    {"umbilical", CheckKind::Umbilical, false},
    {"divergence-selftest", CheckKind::DivergenceSelftest, false},
    {"sigma2-image", CheckKind::Sigma2Image, false},
    {"expected-values", CheckKind::ExpectedValues, false},
};

}  // namespace

std::string Check::name() const {
  for (const auto& c : kChecks)
    if (c.kind == kind) return c.indexed && r >= 0 ? std::string(c.name) + ":" + std::to_string(r) : c.name;
  return "?";
}

Check parse_check(const std::string& name) {
  const auto colon = name.find(':');
  const std::string base = name.substr(0, colon);
  for (const auto& c : kChecks) {
    if (base != c.name) continue;
    Check check{c.kind, -1};
    if (colon == std::string::npos) return check;
    if (!c.indexed) throw ParseError("check '" + base + "' takes no index");
    const std::string idx = name.substr(colon + 1);
    std::size_t used = 0;
    int r = 0;
    try {
      r = std::stoi(idx, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (idx.empty() || used != idx.size() || r < 0)
      throw ParseError("check '" + name + "': index must be a non-negative integer");
    check.r = r;
    return check;
  }
  throw ParseError("unknown check '" + name + "'");
}

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& c : kChecks) out.push_back(c.indexed ? std::string(c.name) + ":r" : c.name);
  return out;
}

namespace {

TrigProfile parse_profile(const json& j, const std::string& where) {
  if (j.is_number()) return constant_profile(j.get<double>());
  if (!j.is_object()) throw ParseError(where + ": expected a number or {c0, cos, sin}");
  TrigProfile p;
  for (const auto& [key, value] : j.items()) {
    if (key == "c0") {
      if (!value.is_number()) throw ParseError(where + ".c0: expected a number");
      p.c0 = value.get<double>();
    } else if (key == "cos" || key == "sin") {
      if (!value.is_array()) throw ParseError(where + "." + key + ": expected an array of numbers");
      auto& dst = key == "cos" ? p.cos_coeffs : p.sin_coeffs;
      for (const auto& v : value) {
        if (!v.is_number()) throw ParseError(where + "." + key + ": expected an array of numbers");
        dst.push_back(v.get<double>());
      }
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  return p;
}

json profile_to_json(const TrigProfile& p) {
  return {{"c0", p.c0}, {"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
}

ScenarioSpec parse_scenario_spec(const json& j) {
  ScenarioSpec s;
  if (j.is_string()) {
    s.name = j.get<std::string>();
    return s;
  }
  if (!j.is_object()) throw ParseError("scenario: expected a name or an inline profile object");
  s.a = default_warp_a();
  s.b = default_warp_b();
  s.theta = default_tilt();
  bool have_kind = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      if (!value.is_string()) throw ParseError("scenario.kind: expected a string");
      s.kind = value.get<std::string>();
      have_kind = true;
    } else if (key == "m") {
      if (!value.is_number_integer()) throw ParseError("scenario.m: expected an integer");
      s.m = value.get<int>();
    } else if (key == "a") {
      s.a = parse_profile(value, "scenario.a");
    } else if (key == "b") {
      s.b = parse_profile(value, "scenario.b");
    } else if (key == "theta") {
      s.theta = parse_profile(value, "scenario.theta");
    } else {
      throw ParseError("scenario: unknown key '" + key + "'");
    }
  }
  if (!have_kind) throw ParseError("scenario: inline scenarios need a 'kind'");
  if (s.kind != "warped_torus" && s.kind != "warped_torus_3_classical" && s.kind != "tilted_torus")
    throw ParseError("scenario.kind: expected warped_torus, warped_torus_3_classical or tilted_torus");
  if (s.kind == "warped_torus" && s.m != 3 && s.m != 4) throw ParseError("scenario.m: expected 3 or 4");
  return s;
}

template <class T>
T get_as(const json& v, const std::string& key, const char* what) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ParseError(key + ": expected " + what);
  }
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ParseError("config: expected an object");
  RunConfig c;
  bool have_scenario = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") {
      c.scenario = parse_scenario_spec(value);
      have_scenario = true;
    } else if (key == "checks") {
      if (value.is_string() && value.get<std::string>() == "all") continue;
      if (!value.is_array()) throw ParseError("checks: expected an array of names or \"all\"");
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_string()) throw ParseError("checks[" + std::to_string(i) + "]: expected a string");
        try {
          c.checks.push_back(parse_check(value[i].get<std::string>()));
        } catch (const ParseError& e) {
          throw ParseError("checks[" + std::to_string(i) + "]: " + e.what());
        }
      }
    } else if (key == "grid") {
      c.grid = get_as<std::vector<int>>(value, key, "an array of integers");
      for (int n : c.grid)
        if (n < 1) throw ParseError("grid: node counts must be positive");
    } else if (key == "tolerance") {
      c.tolerance = get_as<double>(value, key, "a number");
      if (!(*c.tolerance > 0.0)) throw ParseError("tolerance: must be positive");
    } else if (key == "c") {
      c.c = get_as<double>(value, key, "a number");
    } else if (key == "einstein") {
      if (!value.is_object()) throw ParseError("einstein: expected an object");
      for (const auto& [k, v] : value.items()) {
        if (k == "n_max") c.einstein_n_max = get_as<int>(v, "einstein.n_max", "an integer");
        else if (k == "C") c.einstein_C = get_as<double>(v, "einstein.C", "a number");
        else if (k == "volume") c.einstein_volume = get_as<double>(v, "einstein.volume", "a number");
        else throw ParseError("einstein: unknown key '" + k + "'");
      }
    } else if (key == "umbilical") {
      if (!value.is_object()) throw ParseError("umbilical: expected an object");
      for (const auto& [k, v] : value.items()) {
        if (k == "tuples") c.umbilical_tuples = get_as<int>(v, "umbilical.tuples", "an integer");
        else if (k == "seed") c.umbilical_seed = get_as<std::uint64_t>(v, "umbilical.seed", "an unsigned integer");
        else throw ParseError("umbilical: unknown key '" + k + "'");
      }
    } else if (key == "convergence_gate") {
      c.convergence_gate = get_as<bool>(value, key, "a boolean");
    } else if (key == "threads") {
      c.threads = get_as<int>(value, key, "an integer");
    } else if (key == "output") {
      c.output = get_as<std::string>(value, key, "a string");
    } else if (key == "format") {
      const auto f = get_as<std::string>(value, key, "a string");
      if (f == "table") c.format = ReportFormat::Table;
      else if (f == "structured") c.format = ReportFormat::Structured;
      else throw ParseError("format: expected 'table' or 'structured'");
    } else if (key == "timing") {
      c.timing = get_as<bool>(value, key, "a boolean");
    } else {
      throw ParseError("config: unknown key '" + key + "'");
    }
  }
  if (!have_scenario) throw ParseError("config: missing 'scenario'");
  return c;
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

json config_to_json(const RunConfig& c) {
  json j;
  if (c.scenario.is_inline()) {
    j["scenario"] = {{"kind", c.scenario.kind}, {"m", c.scenario.m}, {"a", profile_to_json(c.scenario.a)},
                     {"b", profile_to_json(c.scenario.b)}, {"theta", profile_to_json(c.scenario.theta)}};
  } else {
    j["scenario"] = c.scenario.name;
  }
  json checks = json::array();
  for (const auto& ch : c.checks) checks.push_back(ch.name());
  j["checks"] = c.checks.empty() ? json("all") : checks;
  j["grid"] = c.grid;
  j["tolerance"] = c.tolerance ? json(*c.tolerance) : json(nullptr);
  j["c"] = c.c ? json(*c.c) : json(nullptr);
  j["einstein"] = {{"n_max", c.einstein_n_max}, {"C", c.einstein_C}, {"volume", c.einstein_volume}};
  j["umbilical"] = {{"tuples", c.umbilical_tuples}, {"seed", c.umbilical_seed}};
  j["convergence_gate"] = c.convergence_gate;
  return j;
}

Scenario build_scenario(const ScenarioSpec& spec) {
  if (!spec.is_inline()) return build_scenario(spec.name);
  Scenario s;
  if (spec.kind == "warped_torus") s = build_warped_torus(spec.m, spec.a, spec.b);
  else if (spec.kind == "warped_torus_3_classical") s = build_warped_torus_3_classical(spec.a, spec.b);
  else if (spec.kind == "tilted_torus") s = build_tilted_torus(spec.a, spec.b, spec.theta);
  else throw ConstructionError("unknown inline scenario kind '" + spec.kind + "'");
  s.name = "inline:" + s.name;
  return s;
}

namespace {

std::vector<Check> default_checks(const Scenario& s) {
  std::vector<Check> out = {{CheckKind::DivergenceSelftest, -1}, {CheckKind::Reeb, -1}, {CheckKind::Main, -1}};
  if (!s.leaves.empty()) out.push_back({CheckKind::Leaf, -1});
  for (CheckKind k : {CheckKind::Pointwise, CheckKind::Codazzi, CheckKind::TraceIdentities,
                      CheckKind::ExpectedValues, CheckKind::Sigma2Image})
    out.push_back({k, -1});
  if (s.flags.pcurv_c) out.push_back({CheckKind::ClosedFormC, -1});
  out.push_back({CheckKind::ClosedFormEinstein, -1});
  out.push_back({CheckKind::Umbilical, -1});
  return out;
}

void append(std::vector<VerificationReport>& out, std::vector<VerificationReport> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

}  // namespace

RunResult run(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario scenario = build_scenario(config.scenario);
  const int n = scenario.n();
  const std::vector<Check> checks = config.checks.empty() ? default_checks(scenario) : config.checks;
  for (const auto& ch : checks)
    if ((ch.kind == CheckKind::Main || ch.kind == CheckKind::Leaf) && ch.r > n - 1)
      throw RangeError("check '" + ch.name() + "': r must lie in [0, " + std::to_string(n - 1) + "] for '" +
                       scenario.name + "'");

  VerifyOptions opts;
  opts.grid = config.grid;
  opts.tolerance = config.tolerance;
  opts.convergence_gate = config.convergence_gate;
  opts.threads = config.threads;
  Verifier verifier(scenario, opts);
  const double c = config.c.value_or(scenario.flags.pcurv_c.value_or(0.0));

  std::vector<VerificationReport> reports;
  for (const auto& ch : checks) {
    switch (ch.kind) {
      case CheckKind::Reeb: reports.push_back(verifier.reeb()); break;
      case CheckKind::Main:
        for (int r = ch.r < 0 ? 0 : ch.r; r <= (ch.r < 0 ? n - 1 : ch.r); ++r) reports.push_back(verifier.main(r));
        break;
      case CheckKind::Leaf:
        for (int r = ch.r < 0 ? 0 : ch.r; r <= (ch.r < 0 ? n - 1 : ch.r); ++r) append(reports, verifier.leaf(r));
        break;
      case CheckKind::Pointwise: append(reports, verifier.pointwise()); break;
      case CheckKind::Codazzi: append(reports, verifier.codazzi()); break;
      case CheckKind::TraceIdentities: append(reports, verifier.trace_identities()); break;
      case CheckKind::ClosedFormC: {
        reports.push_back(verifier.closed_form_c(c));
        VerificationReport rec = verify_closed_form_pcurv_recurrence(config.einstein_n_max, c == 0.0 ? 1.0 : c,
                                                                     config.einstein_volume);
        rec.scenario = scenario.name;
        reports.push_back(rec);
        break;
      }
      case CheckKind::ClosedFormEinstein: {
        VerificationReport r =
            verify_closed_form_einstein(config.einstein_n_max, config.einstein_C, config.einstein_volume);
        r.scenario = scenario.name;
        reports.push_back(r);
        break;
      }
      case CheckKind::Umbilical: {
        VerificationReport r = verify_umbilical_suite(config.umbilical_tuples, config.umbilical_seed);
        r.scenario = scenario.name;
        reports.push_back(r);
        break;
      }
      case CheckKind::DivergenceSelftest: reports.push_back(verifier.divergence_selftest()); break;
      case CheckKind::Sigma2Image: reports.push_back(verifier.sigma2_image(c)); break;
      case CheckKind::ExpectedValues: reports.push_back(verifier.expected_values()); break;
    }
  }

  RunResult result;
  result.document.scenario = scenario.name;
  result.document.config = config_to_json(config);
  result.document.reports = std::move(reports);
  result.document.timing = config.timing;
  result.document.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.exit_status = summarize(result.document.reports).fail > 0 ? kExitVerificationFailure : kExitOk;
  return result;
}

}  // namespace foliate
