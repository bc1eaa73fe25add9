#include <certlint/rules.hpp>

#include <exception>

#include <fmt/format.h>

namespace certlint::rules {

std::string_view to_string(Level level) {
   switch(level) {
      case Level::Must: return "MUST";
      case Level::MustNot: return "MUST NOT";
      case Level::Should: return "SHOULD";
      case Level::ShouldNot: return "SHOULD NOT";
      case Level::Recommended: return "RECOMMENDED";
      case Level::May: return "MAY";
   }
   return "MUST";
}

std::optional<Level> level_from_string(std::string_view text) {
   for(const auto l : {Level::Must, Level::MustNot, Level::Should, Level::ShouldNot, Level::Recommended, Level::May}) {
      if(to_string(l) == text) {
         return l;
      }
   }
   return std::nullopt;
}

bool is_must_level(Level level) noexcept {
   return level == Level::Must || level == Level::MustNot;
}

bool is_should_level(Level level) noexcept {
   return level == Level::Should || level == Level::ShouldNot || level == Level::Recommended;
}

std::string_view to_string(AppliesTo a) {
   switch(a) {
      case AppliesTo::CA: return "CA";
      case AppliesTo::Host: return "Host";
      case AppliesTo::Person: return "Person";
      case AppliesTo::Robot: return "Robot";
      case AppliesTo::AnyEndEntity: return "AnyEndEntity";
      case AppliesTo::Any: return "Any";
      case AppliesTo::Crl: return "Crl";
   }
   return "Any";
}

std::string_view to_string(SubjectClass c) {
   switch(c) {
      case SubjectClass::CA: return "ca";
      case SubjectClass::Host: return "host";
      case SubjectClass::Person: return "person";
      case SubjectClass::Robot: return "robot";
      case SubjectClass::Certificate: return "certificate";
      case SubjectClass::Crl: return "crl";
   }
   return "certificate";
}

bool applies(AppliesTo target, SubjectClass subject) noexcept {
   const bool end_entity =
      subject == SubjectClass::Host || subject == SubjectClass::Person || subject == SubjectClass::Robot;
   switch(target) {
      case AppliesTo::Any: return subject != SubjectClass::Crl;
      case AppliesTo::AnyEndEntity: return end_entity;
      case AppliesTo::CA: return subject == SubjectClass::CA;
      case AppliesTo::Host: return subject == SubjectClass::Host;
      case AppliesTo::Person: return subject == SubjectClass::Person;
      case AppliesTo::Robot: return subject == SubjectClass::Robot;
      case AppliesTo::Crl: return subject == SubjectClass::Crl;
   }
   return false;
}

const std::vector<std::string>* Subject::warnings() const noexcept {
   if(const auto* c = certificate()) {
      return &c->warnings;
   }
   if(const auto* c = crl()) {
      return &c->warnings;
   }
   return nullptr;
}

void SuiteResult::recount() {
   total = verdicts.size();
   passed = failed = failed_must = failed_should = 0;
   for(const auto& v : verdicts) {
      if(v.passed) {
         ++passed;
         continue;
      }
      ++failed;
      if(is_must_level(v.level)) {
         ++failed_must;
      } else if(is_should_level(v.level)) {
         ++failed_should;
      }
   }
}

namespace {

Outcome run_predicate(const Rule& rule, const Subject& subject) {
   if(const auto* check = std::get_if<CertCheck>(&rule.predicate)) {
      const auto* cert = subject.certificate();
      if(cert == nullptr) {
         throw std::invalid_argument("rule expects a certificate");
      }
      return (*check)(*cert);
   }
   const auto* crl = subject.crl();
   if(crl == nullptr) {
      throw std::invalid_argument("rule expects a CRL");
   }
   return std::get<CrlCheck>(rule.predicate)(*crl);
}

Verdict load_verdict(const Subject& subject) {
   Verdict v;
   v.rule_id = std::string(kLoadRuleId);
   v.subject_id = subject.id;
   v.level = Level::Must;
   v.message = fmt::format("{} loads as a {}", subject.id,
                           subject.declared == SubjectClass::Crl ? "CRL" : "certificate");
   v.passed = subject.loaded();
   if(!v.passed) {
      v.detail = subject.load_error.empty() ? "not loaded" : subject.load_error;
   } else if(const auto* w = subject.warnings(); w && !w->empty()) {
      v.detail = fmt::format("parse warnings: {}", fmt::join(*w, "; "));
   }
   return v;
}

}  // namespace

Verdict evaluate(const Rule& rule, const Subject& subject) {
   Verdict v;
   v.rule_id = rule.id;
   v.subject_id = subject.id;
   v.level = rule.level;
   v.message = rule.message;
   if(!subject.loaded()) {
      v.passed = false;
      v.detail = "not loaded";
      return v;
   }
   try {
      const Outcome out = run_predicate(rule, subject);
      v.passed = out.passed;
      v.skipped = out.skipped;
      v.detail = out.detail;
   } catch(const std::exception& e) {
      v.passed = false;
      v.detail = fmt::format("rule error: {}", e.what());
   } catch(...) {
      v.passed = false;
      v.detail = "rule error: unknown exception";
   }
   if(rule.level == Level::May && !v.passed) {
      v.passed = true;
      v.informational = true;
   }
   return v;
}

SuiteResult run_suite(const RuleSuite& suite, std::span<const Subject> subjects) {
   SuiteResult result;
   result.suite_name = suite.name;
   for(const auto& subject : subjects) {
      result.verdicts.push_back(load_verdict(subject));
      for(const auto& rule : suite.rules) {
         if(applies(rule->applies_to, subject.declared)) {
            result.verdicts.push_back(evaluate(*rule, subject));
         }
      }
   }
   result.recount();
   return result;
}

std::vector<Verdict> run_corpus_checks(std::span<const CorpusRule> rules, std::span<const LoadedCertificate> certs) {
   std::vector<Verdict> out;
   for(const auto& rule : rules) {
      std::vector<CorpusViolation> violations;
      try {
         violations = rule.predicate(certs);
      } catch(const std::exception& e) {
         violations = {{"corpus", fmt::format("rule error: {}", e.what())}};
      }
      for(auto& violation : violations) {
         Verdict v;
         v.rule_id = rule.id;
         v.subject_id = std::move(violation.subject_id);
         v.level = rule.level;
         v.message = rule.message;
         v.detail = std::move(violation.detail);
         v.passed = rule.level == Level::May;
         v.informational = rule.level == Level::May;
         out.push_back(std::move(v));
      }
   }
   return out;
}

OverallResult aggregate(std::span<const SuiteResult> results) {
   OverallResult overall;
   for(const auto& r : results) {
      for(const auto& v : r.verdicts) {
         ++overall.total;
         if(v.passed) {
            ++overall.passed_count;
            continue;
         }
         ++overall.failed;
         overall.passed = false;
         if(is_must_level(v.level)) {
            ++overall.failed_must;
         } else if(is_should_level(v.level)) {
            ++overall.failed_should;
         }
      }
   }
   overall.no_tests_run = overall.total == 0;
   return overall;
}

std::optional<LevelBand> level_band_from_string(std::string_view text) {
   if(text == "all") {
      return LevelBand::All;
   }
   if(text == "must") {
      return LevelBand::Must;
   }
   if(text == "should") {
      return LevelBand::Should;
   }
   if(text == "may") {
      return LevelBand::May;
   }
   return std::nullopt;
}

bool in_band(Level level, LevelBand band) noexcept {
   switch(band) {
      case LevelBand::All: return true;
      case LevelBand::Must: return is_must_level(level);
      case LevelBand::Should: return !is_must_level(level);
      case LevelBand::May: return level == Level::May;
   }
   return true;
}

RuleSuite filter_suite(const RuleSuite& suite, LevelBand band) {
   RuleSuite out{suite.name, {}};
   for(const auto& r : suite.rules) {
      if(in_band(r->level, band)) {
         out.rules.push_back(r);
      }
   }
   return out;
}

}  // namespace certlint::rules
