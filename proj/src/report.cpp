#include "foliate/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "foliate/errors.hpp"

namespace foliate {

using nlohmann::json;

RunSummary summarize(const std::vector<VerificationReport>& reports) {
  RunSummary s;
  for (const auto& r : reports) {
    switch (r.verdict) {
      case Verdict::Pass: ++s.pass; break;
      case Verdict::Fail: ++s.fail; break;
      case Verdict::Inadmissible: ++s.inadmissible; break;
      case Verdict::PreconditionViolation: ++s.precondition_violation; break;
      case Verdict::Diagnostic: ++s.diagnostic; break;
    }
  }
  return s;
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::string text(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) throw ParseError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<int> int_array(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array()) throw ParseError(where + "." + key + ": expected an array");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ParseError(where + "." + key + ": expected integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

json report_to_json(const VerificationReport& r) {
  json j;
  j["formula_id"] = r.formula_id;
  j["scenario"] = r.scenario;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["verdict"] = to_string(r.verdict);
  j["admissibility_max"] = r.admissibility_max;
  j["harmonic_max"] = r.harmonic_max;
  j["grid"] = {{"axes", r.grid.axes},
               {"counts", r.grid.counts},
               {"nodes", r.grid.nodes},
               {"total_weight", r.grid.total_weight},
               {"isa", r.grid.isa}};
  j["terms"] = json::object();
  for (const auto& [k, v] : r.terms) j["terms"][k] = v;
  j["notes"] = r.notes;
  j["refined_residual"] = r.refined_residual ? json(*r.refined_residual) : json(nullptr);
  return j;
}

VerificationReport report_from_json(const json& j) {
  const std::string where = j.is_object() && j.contains("formula_id") && j["formula_id"].is_string()
                                ? "report '" + j["formula_id"].get<std::string>() + "'"
                                : "report";
  VerificationReport r;
  r.formula_id = text(j, "formula_id", where);
  r.scenario = text(j, "scenario", where);
  r.residual = number(j, "residual", where);
  r.tolerance = number(j, "tolerance", where);
  r.verdict = verdict_from_string(text(j, "verdict", where));
  r.admissibility_max = number(j, "admissibility_max", where);
  r.harmonic_max = number(j, "harmonic_max", where);
  const json& g = field(j, "grid", where);
  const std::string gw = where + ".grid";
  r.grid.axes = int_array(g, "axes", gw);
  r.grid.counts = int_array(g, "counts", gw);
  const json& nodes = field(g, "nodes", gw);
  if (!nodes.is_number_unsigned()) throw ParseError(gw + ".nodes: expected a non-negative integer");
  r.grid.nodes = nodes.get<std::size_t>();
  r.grid.total_weight = number(g, "total_weight", gw);
  r.grid.isa = text(g, "isa", gw);
  const json& terms = field(j, "terms", where);
  if (!terms.is_object()) throw ParseError(where + ".terms: expected an object");
  for (const auto& [k, v] : terms.items()) {
    if (!v.is_number()) throw ParseError(where + ".terms." + k + ": expected a number");
    r.terms[k] = v.get<double>();
  }
  const json& notes = field(j, "notes", where);
  if (!notes.is_array()) throw ParseError(where + ".notes: expected an array");
  for (const auto& n : notes) {
    if (!n.is_string()) throw ParseError(where + ".notes: expected strings");
    r.notes.push_back(n.get<std::string>());
  }
  const json& refined = field(j, "refined_residual", where);
  if (!refined.is_null()) {
    if (!refined.is_number()) throw ParseError(where + ".refined_residual: expected a number or null");
    r.refined_residual = refined.get<double>();
  }
  return r;
}

json document_to_json(const ReportDocument& doc) {
  json j;
  j["schema"] = kReportSchema;
  j["scenario"] = doc.scenario;
  j["config"] = doc.config;
  const RunSummary s = summarize(doc.reports);
  j["summary"] = {{"pass", s.pass},
                  {"fail", s.fail},
                  {"inadmissible", s.inadmissible},
                  {"precondition-violation", s.precondition_violation},
                  {"diagnostic", s.diagnostic},
                  {"warnings", s.warnings()}};
  j["reports"] = json::array();
  for (const auto& r : doc.reports) j["reports"].push_back(report_to_json(r));
  if (doc.timing) {
    json per = json::array();
    for (const auto& r : doc.reports) per.push_back({{"formula_id", r.formula_id}, {"wall_seconds", r.wall_seconds}});
    j["timing"] = {{"total_seconds", doc.total_seconds}, {"reports", per}};
  }
  return j;
}

ReportDocument document_from_json(const json& j) {
  const std::string where = "document";
  if (text(j, "schema", where) != kReportSchema)
    throw ParseError("document.schema: expected '" + std::string(kReportSchema) + "'");
  ReportDocument doc;
  doc.scenario = text(j, "scenario", where);
  doc.config = field(j, "config", where);
  const json& reports = field(j, "reports", where);
  if (!reports.is_array()) throw ParseError("document.reports: expected an array");
  for (const auto& r : reports) doc.reports.push_back(report_from_json(r));
  doc.timing = j.contains("timing");
  if (doc.timing) {
    const json& t = j.at("timing");
    doc.total_seconds = number(t, "total_seconds", "document.timing");
    const json& per = field(t, "reports", "document.timing");
    if (!per.is_array() || per.size() != doc.reports.size())
      throw ParseError("document.timing.reports: expected one entry per report");
    for (std::size_t i = 0; i < per.size(); ++i)
      doc.reports[i].wall_seconds = number(per[i], "wall_seconds", "document.timing.reports");
  }
  return doc;
}

std::string emit_document(const ReportDocument& doc) { return document_to_json(doc).dump(2) + "\n"; }

ReportDocument parse_document(const std::string& contents) {
  json j;
  try {
    j = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return document_from_json(j);
}

void write_table(std::ostream& os, const std::vector<VerificationReport>& reports, bool verbose) {
  std::size_t width = 10;
  for (const auto& r : reports) width = std::max(width, r.formula_id.size());
  os << std::left << std::setw(static_cast<int>(width) + 2) << "check" << std::setw(24) << "verdict"
     << std::right << std::setw(14) << "residual" << std::setw(12) << "tolerance" << std::setw(14)
     << "admissibility" << "\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(static_cast<int>(width) + 2) << r.formula_id << std::setw(24)
       << to_string(r.verdict) << std::right << std::scientific << std::setprecision(3) << std::setw(14)
       << r.residual << std::setw(12) << std::setprecision(1) << r.tolerance << std::setw(14)
       << std::setprecision(2) << r.admissibility_max << std::defaultfloat << "\n";
    if (!verbose) continue;
    for (const auto& [k, v] : r.terms)
      os << "    " << std::left << std::setw(32) << k << std::setprecision(17) << v << "\n";
    if (r.refined_residual) os << "    " << std::setw(32) << "refined_residual" << *r.refined_residual << "\n";
    for (const auto& n : r.notes) os << "    note: " << n << "\n";
    os << std::setprecision(6);
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move report into place at '" + path + "': " + ec.message());
  }
}

}  // namespace foliate
