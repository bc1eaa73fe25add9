#include <certlint/report.hpp>

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

namespace certlint::report {

std::string sanitize_tap_text(std::string_view text) {
   std::string out;
   out.reserve(text.size());
   for(const char c : text) {
      if(c == '#') {
         out += "\\#";
      } else if(c == '\\') {
         out += "\\\\";
      } else if(c == '\n' || c == '\r') {
         out.push_back(' ');
      } else {
         out.push_back(c);
      }
   }
   return out;
}

namespace {

void append_diagnostics(std::string_view detail, std::string_view prefix, std::string& out) {
   std::size_t pos = 0;
   while(pos <= detail.size()) {
      const auto nl = std::min(detail.find('\n', pos), detail.size());
      out += fmt::format("# {}{}\n", prefix, detail.substr(pos, nl - pos));
      pos = nl + 1;
   }
}

std::string csv_field(std::string_view s) {
   if(s.find_first_of(",\"\n") == std::string_view::npos) {
      return std::string(s);
   }
   std::string out = "\"";
   for(const char c : s) {
      if(c == '"') {
         out.push_back('"');
      }
      out.push_back(c);
   }
   out.push_back('"');
   return out;
}

}  // namespace

std::string emit_tap(const rules::SuiteResult& result) {
   std::string out = fmt::format("1..{}\n", result.verdicts.size());
   std::size_t k = 0;
   for(const auto& v : result.verdicts) {
      ++k;
      const auto description = sanitize_tap_text(fmt::format("{} {}: {}", v.rule_id, v.subject_id, v.message));
      out += fmt::format("{} {} - {}", v.passed ? "ok" : "not ok", k, description);
      if(v.skipped) {
         out += fmt::format(" # SKIP {}", sanitize_tap_text(v.detail));
      }
      out.push_back('\n');
      if(!v.passed) {
         append_diagnostics(v.detail.empty() ? "failed" : v.detail, "", out);
      } else if(v.informational) {
         append_diagnostics(v.detail, "info: ", out);
      } else if(v.rule_id == rules::kLoadRuleId && !v.detail.empty()) {
         append_diagnostics(v.detail, "", out);
      }
   }
   return out;
}

std::vector<CertificateVerdicts> group_by_subject(std::span<const rules::SuiteResult> results) {
   std::vector<CertificateVerdicts> out;
   std::map<std::string, std::size_t> index;
   for(const auto& r : results) {
      for(const auto& v : r.verdicts) {
         auto [it, inserted] = index.try_emplace(v.subject_id, out.size());
         if(inserted) {
            out.push_back({v.subject_id, {}});
         }
         out[it->second].verdicts.push_back(v);
      }
   }
   return out;
}

SummaryReport summarize(std::span<const CertificateVerdicts> results,
                        const std::map<std::string, std::string>& cause_map) {
   SummaryReport report;
   std::map<std::string, std::size_t> cause_counts;
   for(const auto& cert : results) {
      CertificateRow row{cert.subject_id, 0, 0, true};
      std::set<std::string> categories;
      for(const auto& v : cert.verdicts) {
         if(v.passed) {
            continue;
         }
         row.pass = false;
         if(rules::is_must_level(v.level)) {
            ++row.failed_must;
         } else if(rules::is_should_level(v.level)) {
            ++row.failed_should;
         }
         const auto it = cause_map.find(v.rule_id);
         categories.insert(it == cause_map.end() ? std::string(kOtherCause) : it->second);
      }
      for(const auto& c : categories) {
         ++cause_counts[c];
      }
      ++report.totals.checked;
      if(row.pass) {
         ++report.totals.fully_passing;
      } else if(row.failed_must > 0) {
         ++report.totals.failing_must;
      } else {
         ++report.totals.failing_should_only;
      }
      report.per_certificate.push_back(std::move(row));
   }
   report.by_cause.assign(cause_counts.begin(), cause_counts.end());
   std::stable_sort(report.by_cause.begin(), report.by_cause.end(),
                    [](const auto& a, const auto& b) { return a.second > b.second; });
   return report;
}

std::string render_summary_text(const SummaryReport& report) {
   const auto& t = report.totals;
   std::string out;
   out += fmt::format("Certificates checked:       {}\n", t.checked);
   out += fmt::format("Fully passing:              {}\n", t.fully_passing);
   out += fmt::format("Failing a MUST provision:   {}\n", t.failing_must);
   out += fmt::format("Failing SHOULD only:        {}\n", t.failing_should_only);
   if(!report.by_cause.empty()) {
      std::size_t width = 5;
      for(const auto& [cause, n] : report.by_cause) {
         width = std::max(width, cause.size());
      }
      out += "\n";
      out += fmt::format("{:<{}}  {}\n", "Cause", width, "Certificates failing");
      for(const auto& [cause, n] : report.by_cause) {
         out += fmt::format("{:<{}}  {}\n", cause, width, n);
      }
   }
   return out;
}

std::string summary_to_json(const SummaryReport& report, const std::optional<rules::OverallResult>& overall) {
   nlohmann::ordered_json doc;
   doc["totals"] = {{"checked", report.totals.checked},
                    {"fully_passing", report.totals.fully_passing},
                    {"failing_must", report.totals.failing_must},
                    {"failing_should_only", report.totals.failing_should_only}};
   auto causes = nlohmann::ordered_json::array();
   for(const auto& [cause, n] : report.by_cause) {
      causes.push_back({{"cause", cause}, {"certificates", n}});
   }
   doc["by_cause"] = std::move(causes);
   auto rows = nlohmann::ordered_json::array();
   for(const auto& r : report.per_certificate) {
      rows.push_back({{"subject_id", r.subject_id},
                      {"failed_must", r.failed_must},
                      {"failed_should", r.failed_should},
                      {"pass", r.pass}});
   }
   doc["per_certificate"] = std::move(rows);
   if(overall) {
      doc["overall"] = {{"result", overall->passed ? "PASS" : "FAIL"},
                        {"no_tests_run", overall->no_tests_run},
                        {"total", overall->total},
                        {"passed", overall->passed_count},
                        {"failed", overall->failed},
                        {"failed_must", overall->failed_must},
                        {"failed_should", overall->failed_should}};
   }
   return doc.dump(2) + "\n";
}

std::string per_certificate_csv(const SummaryReport& report) {
   std::string out = "subject_id,failed_must,failed_should,pass\n";
   for(const auto& r : report.per_certificate) {
      out += fmt::format("{},{},{},{}\n", csv_field(r.subject_id), r.failed_must, r.failed_should,
                         r.pass ? "true" : "false");
   }
   return out;
}

}  // namespace certlint::report
