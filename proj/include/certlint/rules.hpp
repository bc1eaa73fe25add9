#pragma once

#include <certlint/x509.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace certlint::rules {

/// RFC 2119 requirement level of a provision.
enum class Level { Must, MustNot, Should, ShouldNot, Recommended, May };

std::string_view to_string(Level level);
std::optional<Level> level_from_string(std::string_view text);

bool is_must_level(Level level) noexcept;
bool is_should_level(Level level) noexcept;

enum class AppliesTo { CA, Host, Person, Robot, AnyEndEntity, Any, Crl };

std::string_view to_string(AppliesTo a);

/// Class a caller declares for a subject. `Certificate` means "some
/// certificate, class unspecified" and only matches rules for Any.
enum class SubjectClass { CA, Host, Person, Robot, Certificate, Crl };

std::string_view to_string(SubjectClass c);
bool applies(AppliesTo rule_target, SubjectClass subject) noexcept;

struct Outcome {
   bool passed = true;
   std::string detail;
   bool skipped = false;

   static Outcome pass(std::string detail = {}) { return {true, std::move(detail), false}; }
   static Outcome fail(std::string detail) { return {false, std::move(detail), false}; }
   static Outcome skip(std::string reason) { return {true, std::move(reason), true}; }
};

using CertCheck = std::function<Outcome(const x509::Certificate&)>;
using CrlCheck = std::function<Outcome(const x509::Crl&)>;

struct Rule {
   std::string id;
   std::string provision;
   Level level = Level::Must;
   AppliesTo applies_to = AppliesTo::Any;
   std::variant<CertCheck, CrlCheck> predicate;
   std::string message;
};

using RulePtr = std::shared_ptr<const Rule>;

struct RuleSuite {
   std::string name;
   std::vector<RulePtr> rules;
};

/// A loaded input: a certificate, a CRL, or a load failure.
struct Subject {
   std::string id;
   SubjectClass declared = SubjectClass::Certificate;
   std::variant<std::monostate, x509::Certificate, x509::Crl> object;
   std::string load_error;

   bool loaded() const noexcept { return object.index() != 0; }
   const x509::Certificate* certificate() const noexcept { return std::get_if<x509::Certificate>(&object); }
   const x509::Crl* crl() const noexcept { return std::get_if<x509::Crl>(&object); }
   const std::vector<std::string>* warnings() const noexcept;
};

inline constexpr std::string_view kLoadRuleId = "LOAD";

struct Verdict {
   std::string rule_id;
   std::string subject_id;
   bool passed = false;
   bool skipped = false;
   /// True for MAY-level observations that never fail a run.
   bool informational = false;
   std::string detail;
   Level level = Level::Must;
   std::string message;
};

struct SuiteResult {
   std::string suite_name;
   std::vector<Verdict> verdicts;
   std::size_t total = 0;
   std::size_t passed = 0;
   std::size_t failed = 0;
   std::size_t failed_must = 0;
   std::size_t failed_should = 0;

   /// Recomputes the counters from `verdicts`.
   void recount();
};

struct OverallResult {
   bool passed = true;
   bool no_tests_run = false;
   std::size_t total = 0;
   std::size_t passed_count = 0;
   std::size_t failed = 0;
   std::size_t failed_must = 0;
   std::size_t failed_should = 0;
};

struct CorpusViolation {
   std::string subject_id;
   std::string detail;
};

struct LoadedCertificate {
   std::string subject_id;
   const x509::Certificate* cert = nullptr;
};

struct CorpusRule {
   std::string id;
   std::string provision;
   Level level = Level::Must;
   std::function<std::vector<CorpusViolation>(std::span<const LoadedCertificate>)> predicate;
   std::string message;
};

/// Evaluates one rule. Never throws; predicate errors become failing
/// verdicts with detail "rule error: ...".
Verdict evaluate(const Rule& rule, const Subject& subject);

/// For each subject: a load verdict, then one verdict per applicable rule
/// in suite order.
SuiteResult run_suite(const RuleSuite& suite, std::span<const Subject> subjects);

std::vector<Verdict> run_corpus_checks(std::span<const CorpusRule> rules, std::span<const LoadedCertificate> certs);

OverallResult aggregate(std::span<const SuiteResult> results);

/// Which levels a filtered run keeps.
enum class LevelBand { All, Must, Should, May };

std::optional<LevelBand> level_band_from_string(std::string_view text);
bool in_band(Level level, LevelBand band) noexcept;
RuleSuite filter_suite(const RuleSuite& suite, LevelBand band);

}  // namespace certlint::rules
