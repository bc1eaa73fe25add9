#pragma once

#include <certlint/rules.hpp>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace certlint::report {

/// Classic plan-first TAP: "1..N", then "ok K - ..." / "not ok K - ...",
/// with '#' diagnostics after failing lines.
std::string emit_tap(const rules::SuiteResult& result);

/// Escapes '#' as "\#" and '\' as "\\", and folds line breaks so a message cannot inject
/// directives or diagnostics.
std::string sanitize_tap_text(std::string_view text);

struct CertificateVerdicts {
   std::string subject_id;
   std::vector<rules::Verdict> verdicts;
};

/// Regroups verdicts by subject, in first-seen order.
std::vector<CertificateVerdicts> group_by_subject(std::span<const rules::SuiteResult> results);

struct CertificateRow {
   std::string subject_id;
   std::size_t failed_must = 0;
   std::size_t failed_should = 0;
   bool pass = true;
};

struct Totals {
   std::size_t checked = 0;
   std::size_t fully_passing = 0;
   /// Certificates with at least one MUST/MUST NOT failure.
   std::size_t failing_must = 0;
   /// Certificates whose failures are all SHOULD-level or weaker.
   std::size_t failing_should_only = 0;
};

struct SummaryReport {
   std::vector<CertificateRow> per_certificate;
   /// (category, certificates failing it), count descending then name.
   std::vector<std::pair<std::string, std::size_t>> by_cause;
   Totals totals;
};

inline constexpr std::string_view kOtherCause = "other";

/// Unmapped rule ids fall into category "other". A certificate counts once
/// per category however many of its rules in that category fail.
SummaryReport summarize(std::span<const CertificateVerdicts> results,
                        const std::map<std::string, std::string>& cause_map);

std::string render_summary_text(const SummaryReport& report);
std::string summary_to_json(const SummaryReport& report, const std::optional<rules::OverallResult>& overall = {});
/// "subject_id,failed_must,failed_should,pass"
std::string per_certificate_csv(const SummaryReport& report);

}  // namespace certlint::report
