#pragma once

// Rule catalogs: Grid Certificate Profile suites per certificate class,
// the vulnerability (RAT) suite, the CRL suite and corpus-level rules.

#include <certlint/rules.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace certlint::profile {

class BlacklistUnreadable : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

struct CatalogConfig {
   std::size_t min_modulus_bits = 1024;
   std::size_t recommended_modulus_bits = 2048;
   std::uint64_t min_exponent = 65537;
   std::optional<std::filesystem::path> blacklist_path;
   std::string robot_cn_pattern = "^Robot";
   /// Host name, optionally preceded by "service/".
   std::string host_fqdn_pattern =
      R"(^([A-Za-z0-9][A-Za-z0-9-]*/)?([A-Za-z0-9]([A-Za-z0-9-]{0,61}[A-Za-z0-9])?\.)+[A-Za-z]{2,63}$)";

   /// Throws ConfigError when thresholds are inconsistent.
   void validate() const;
};

/// Reads a flat key=value file ('#' comments) over `base`.
CatalogConfig load_config(const std::filesystem::path& path, CatalogConfig base = {});

/// Fingerprints of known-weak keys: lowercase SHA-1 of the DER SubjectPublicKeyInfo.
struct Blacklist {
   std::set<std::string> fingerprints;
   bool configured = false;
};

/// One fingerprint per line; '#' comments and blank lines are ignored.
Blacklist load_blacklist(const std::filesystem::path& path);
bool check_blacklist(const std::string& fingerprint, const Blacklist& blacklist);

// ---------------------------------------------------------------------------

struct EncodingPolicy {
   std::set<x509::StringEncoding> allowed_general = {x509::StringEncoding::PrintableString,
                                                     x509::StringEncoding::Utf8String};
   /// Attributes that must use exactly one encoding (DC and emailAddress: ia5String).
   std::map<x509::Oid, x509::StringEncoding> required;

   static EncodingPolicy defaults();
};

std::vector<std::string> check_name_encoding(const x509::DistinguishedName& dn, const EncodingPolicy& policy);

struct Consistency {
   bool consistent = false;
   std::string detail;
};

Consistency check_nscerttype_consistency(const x509::Certificate& cert);

/// Findings for a weak RSA key. Non-RSA keys yield no findings; `note`
/// receives an informational remark in that case.
std::vector<std::string> check_rsa_parameters(const x509::PublicKeyInfo& key,
                                              const CatalogConfig& config,
                                              std::string* note = nullptr);

// ---------------------------------------------------------------------------

enum class ProvisionStatus { Implemented, NeedsCorpus, NeedsOnline, NeedsManual };

std::string_view to_string(ProvisionStatus s);

struct ProvisionEntry {
   std::string id;
   ProvisionStatus status = ProvisionStatus::Implemented;
   std::string description;
   /// True when the identifier is ours rather than a section number of the profile document.
   bool reconstructed = false;
};

struct RuleCatalog {
   rules::RuleSuite ca_suite;
   rules::RuleSuite host_suite;
   rules::RuleSuite person_suite;
   rules::RuleSuite robot_suite;
   rules::RuleSuite rat_suite;
   rules::RuleSuite crl_suite;
   std::vector<rules::CorpusRule> corpus_rules;
   std::vector<ProvisionEntry> provision_ledger;
   Blacklist blacklist;

   /// Suite by CLI name (ca, host, person, robot, rat, crl), or nullptr.
   const rules::RuleSuite* suite(std::string_view name) const noexcept;
   /// Every distinct rule object, in first-seen order across the suites.
   std::vector<rules::RulePtr> all_rules() const;
   /// Number of host-suite rules absent from the person suite.
   std::size_t host_only_rule_count() const;
};

RuleCatalog build_catalog(const CatalogConfig& config);

/// Failure-cause category for each rule id, used by the summary report.
std::map<std::string, std::string> default_cause_map();

namespace cause {
inline constexpr std::string_view kSerialNumber = "Serial number";
inline constexpr std::string_view kNsCertType = "nsCertType";
inline constexpr std::string_view kSubjectName = "Subject Name";
}  // namespace cause

}  // namespace certlint::profile
