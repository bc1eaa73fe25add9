#include <certlint/cli.hpp>

#include <certlint/analytics.hpp>
#include <certlint/report.hpp>

#include <fstream>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace certlint::cli {

namespace {

using rules::SubjectClass;

struct CliConfig {
   std::vector<std::string> suite_selection;
   std::vector<std::string> input_paths;
   bool aggregate = false;
   std::string output = "tap";
   std::string summary_path;
   std::string csv_path;
   std::string per_cert_csv_path;
   std::string config_path;
   std::string blacklist_path;
   std::string level_filter = "all";
   bool detect = false;
};

constexpr std::string_view kClassSuites[] = {"ca", "host", "person", "robot"};

SubjectClass class_for_suite(std::string_view name) {
   if(name == "ca") {
      return SubjectClass::CA;
   }
   if(name == "host") {
      return SubjectClass::Host;
   }
   if(name == "person") {
      return SubjectClass::Person;
   }
   return SubjectClass::Robot;
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
   std::ofstream f(path, std::ios::binary);
   f << content;
   if(!f) {
      err << fmt::format("checkcerts: cannot write {}\n", path);
      return false;
   }
   return true;
}

std::vector<rules::Subject> with_class(const std::vector<const rules::Subject*>& subjects, SubjectClass cls) {
   std::vector<rules::Subject> out;
   out.reserve(subjects.size());
   for(const auto* s : subjects) {
      out.push_back(*s);
      out.back().declared = cls;
   }
   return out;
}

rules::SuiteResult corpus_result(std::span<const rules::CorpusRule> corpus_rules,
                                 std::span<const rules::LoadedCertificate> certs) {
   rules::SuiteResult result;
   result.suite_name = "corpus";
   for(const auto& rule : corpus_rules) {
      auto verdicts = rules::run_corpus_checks(std::span(&rule, 1), certs);
      if(verdicts.empty()) {
         rules::Verdict v;
         v.rule_id = rule.id;
         v.subject_id = "corpus";
         v.passed = true;
         v.level = rule.level;
         v.message = rule.message;
         verdicts.push_back(std::move(v));
      }
      result.verdicts.insert(result.verdicts.end(), verdicts.begin(), verdicts.end());
   }
   result.recount();
   return result;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
   CliConfig cfg;
   CLI::App app{"Lint X.509 certificates and CRLs against the Grid Certificate Profile and vulnerability checks",
                "checkcerts"};
   app.add_option("--suite", cfg.suite_selection, "Suite to run (repeatable)")
      ->allow_extra_args(false)
      ->check(CLI::IsMember({"ca", "host", "person", "robot", "rat", "crl", "corpus"}));
   app.add_flag("--aggregate", cfg.aggregate, "Run every test in a single TAP document with one overall result");
   app.add_option("--output", cfg.output, "What to print on stdout")
      ->check(CLI::IsMember({"tap", "summary", "both"}));
   app.add_option("--summary", cfg.summary_path, "Write the machine-readable summary (JSON) to this path");
   app.add_option("--csv", cfg.csv_path, "Write compliance-over-time points (CSV) to this path");
   app.add_option("--per-cert-csv", cfg.per_cert_csv_path, "Write per-certificate failure counts (CSV) to this path");
   app.add_option("--config", cfg.config_path, "key=value catalog configuration file");
   app.add_option("--blacklist", cfg.blacklist_path, "Weak-key fingerprint blacklist");
   app.add_option("--level-filter", cfg.level_filter, "Keep only rules of this RFC 2119 band")
      ->check(CLI::IsMember({"all", "must", "should", "may"}));
   app.add_flag("--detect", cfg.detect, "Choose the class suite per certificate from its contents");
   app.add_option("inputs", cfg.input_paths, "PEM or DER certificate and CRL files");

   std::vector<std::string> reversed(args.rbegin(), args.rend());
   try {
      app.parse(reversed);
   } catch(const CLI::CallForHelp&) {
      out << app.help();
      return kExitPass;
   } catch(const CLI::ParseError& e) {
      err << "checkcerts: " << e.what() << "\n" << app.help();
      return kExitUsage;
   }

   if(cfg.input_paths.empty()) {
      err << "checkcerts: no input files\n" << app.help();
      return kExitUsage;
   }
   if(cfg.suite_selection.empty() && !cfg.detect) {
      err << "checkcerts: select at least one --suite (or use --detect)\n" << app.help();
      return kExitUsage;
   }

   profile::RuleCatalog catalog;
   profile::CatalogConfig catalog_config;
   try {
      if(!cfg.config_path.empty()) {
         catalog_config = profile::load_config(cfg.config_path);
      }
      if(!cfg.blacklist_path.empty()) {
         catalog_config.blacklist_path = cfg.blacklist_path;
      }
      catalog = profile::build_catalog(catalog_config);
   } catch(const std::exception& e) {
      err << "checkcerts: " << e.what() << "\n";
      return kExitUsage;
   }
   const auto band = *rules::level_band_from_string(cfg.level_filter);

   std::vector<rules::Subject> subjects;
   for(const auto& path : cfg.input_paths) {
      auto loaded = load_file(path);
      std::move(loaded.begin(), loaded.end(), std::back_inserter(subjects));
   }
   std::vector<const rules::Subject*> cert_subjects;
   std::vector<const rules::Subject*> crl_subjects;
   for(const auto& s : subjects) {
      (s.declared == SubjectClass::Crl ? crl_subjects : cert_subjects).push_back(&s);
   }

   const std::set<std::string> selected(cfg.suite_selection.begin(), cfg.suite_selection.end());
   std::vector<rules::SuiteResult> results;

   if(cfg.detect) {
      std::map<SubjectClass, std::vector<const rules::Subject*>> by_class;
      std::vector<const rules::Subject*> unloaded;
      for(const auto* s : cert_subjects) {
         if(const auto* c = s->certificate()) {
            by_class[detect_class(*c, catalog_config)].push_back(s);
         } else {
            unloaded.push_back(s);
         }
      }
      if(!unloaded.empty()) {
         const auto batch = with_class(unloaded, SubjectClass::Certificate);
         results.push_back(rules::run_suite(rules::RuleSuite{"unclassified", {}}, batch));
      }
      for(const auto name : kClassSuites) {
         const auto cls = class_for_suite(name);
         if(by_class.contains(cls)) {
            const auto batch = with_class(by_class[cls], cls);
            results.push_back(rules::run_suite(rules::filter_suite(*catalog.suite(name), band), batch));
         }
      }
   } else {
      for(const auto name : kClassSuites) {
         if(selected.contains(std::string(name))) {
            const auto batch = with_class(cert_subjects, class_for_suite(name));
            results.push_back(rules::run_suite(rules::filter_suite(*catalog.suite(name), band), batch));
         }
      }
   }
   if(selected.contains("rat")) {
      const auto batch = with_class(cert_subjects, SubjectClass::Certificate);
      results.push_back(rules::run_suite(rules::filter_suite(catalog.rat_suite, band), batch));
   }
   if(selected.contains("crl")) {
      const auto batch = with_class(crl_subjects, SubjectClass::Crl);
      results.push_back(rules::run_suite(rules::filter_suite(catalog.crl_suite, band), batch));
   }

   std::vector<rules::LoadedCertificate> loaded_certs;
   for(const auto* s : cert_subjects) {
      if(const auto* c = s->certificate()) {
         loaded_certs.push_back({s->id, c});
      }
   }
   if(selected.contains("corpus")) {
      std::vector<rules::CorpusRule> corpus_rules;
      std::copy_if(catalog.corpus_rules.begin(), catalog.corpus_rules.end(), std::back_inserter(corpus_rules),
                   [band](const rules::CorpusRule& r) { return rules::in_band(r.level, band); });
      results.push_back(corpus_result(corpus_rules, loaded_certs));
   }

   const auto overall = rules::aggregate(results);

   if(cfg.output != "summary") {
      if(cfg.aggregate) {
         rules::SuiteResult merged;
         merged.suite_name = "aggregate";
         for(const auto& r : results) {
            merged.verdicts.insert(merged.verdicts.end(), r.verdicts.begin(), r.verdicts.end());
         }
         merged.recount();
         out << report::emit_tap(merged);
         out << fmt::format("# aggregate: {}{}\n", overall.passed ? "PASS" : "FAIL",
                            overall.no_tests_run ? " (no tests run)" : "");
      } else {
         for(const auto& r : results) {
            out << fmt::format("# suite: {}\n", r.suite_name);
            out << report::emit_tap(r);
         }
      }
   }

   auto grouped = report::group_by_subject(results);
   std::erase_if(grouped, [](const report::CertificateVerdicts& g) { return g.subject_id == "corpus"; });
   const auto summary = report::summarize(grouped, profile::default_cause_map());

   std::map<std::string, std::size_t> failures;
   for(const auto& g : grouped) {
      failures[g.subject_id] = static_cast<std::size_t>(
         std::count_if(g.verdicts.begin(), g.verdicts.end(), [](const rules::Verdict& v) { return !v.passed; }));
   }
   for(const auto& c : loaded_certs) {
      failures.try_emplace(c.subject_id, 0);
   }
   const auto points = analytics::compliance_points(loaded_certs, failures);

   if(cfg.output != "tap") {
      if(cfg.output == "both") {
         out << "\n";
      }
      out << report::render_summary_text(summary);
      out << fmt::format("Overall: {}{}\n", overall.passed ? "PASS" : "FAIL",
                         overall.no_tests_run ? " (no tests run)" : "");
      try {
         out << analytics::format_fit(analytics::linear_fit(points)) << "\n";
      } catch(const analytics::DegenerateFit& e) {
         out << fmt::format("no linear fit: {}\n", e.what());
      }
   }

   bool io_ok = true;
   if(!cfg.summary_path.empty()) {
      io_ok &= write_file(cfg.summary_path, report::summary_to_json(summary, overall), err);
   }
   if(!cfg.csv_path.empty()) {
      io_ok &= write_file(cfg.csv_path, analytics::points_csv(points), err);
   }
   if(!cfg.per_cert_csv_path.empty()) {
      io_ok &= write_file(cfg.per_cert_csv_path, report::per_certificate_csv(summary), err);
   }
   if(!io_ok) {
      return kExitUsage;
   }
   return overall.passed ? kExitPass : kExitLintFailure;
}

}  // namespace certlint::cli
