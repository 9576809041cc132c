#pragma once

// Structured (JSON) and tabular rendering of verification reports.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "foliate/verify.hpp"

namespace foliate {

inline constexpr const char* kReportSchema = "foliate-report/1";

/// Counts per verdict.
struct RunSummary {
  int pass = 0;
  int fail = 0;
  int inadmissible = 0;
  int precondition_violation = 0;
  int diagnostic = 0;

  int warnings() const { return inadmissible + precondition_violation; }
  bool operator==(const RunSummary&) const = default;
};

RunSummary summarize(const std::vector<VerificationReport>& reports);

/// A whole run: scenario, echoed configuration, reports and (optionally)
/// wall-clock timing kept apart so the rest is bit-reproducible.
struct ReportDocument {
  std::string scenario;
  nlohmann::json config = nlohmann::json::object();
  std::vector<VerificationReport> reports;
  bool timing = true;
  double total_seconds = 0.0;

  bool operator==(const ReportDocument&) const = default;
};

nlohmann::json report_to_json(const VerificationReport& r);
/// Throws ParseError naming the missing or mistyped field.
VerificationReport report_from_json(const nlohmann::json& j);

nlohmann::json document_to_json(const ReportDocument& doc);
ReportDocument document_from_json(const nlohmann::json& j);

std::string emit_document(const ReportDocument& doc);
/// Throws ParseError on malformed text or schema mismatch.
ReportDocument parse_document(const std::string& text);

/// Fixed-width table, one line per report; verbose adds per-term values and notes.
void write_table(std::ostream& os, const std::vector<VerificationReport>& reports, bool verbose);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace foliate
