#include <certlint/profile.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>

namespace certlint::profile {

using rules::AppliesTo;
using rules::Level;
using rules::Outcome;
using x509::Certificate;
using x509::Crl;
using x509::KeyUsageBit;
using x509::NsCertTypeBit;
namespace oids = x509::oids;

namespace {

std::string trim(std::string_view s) {
   const auto first = s.find_first_not_of(" \t\r\n");
   if(first == std::string_view::npos) {
      return {};
   }
   const auto last = s.find_last_not_of(" \t\r\n");
   return std::string(s.substr(first, last - first + 1));
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
   try {
      std::size_t used = 0;
      const auto v = std::stoull(value, &used);
      if(used != value.size()) {
         throw std::invalid_argument(value);
      }
      return v;
   } catch(const std::exception&) {
      throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, value));
   }
}

bool is_md5(const x509::Oid& oid) {
   std::string name = x509::oid_display(oid);
   std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
   return name.find("md5") != std::string::npos;
}

std::string join(const std::vector<std::string>& parts) {
   return fmt::format("{}", fmt::join(parts, "; "));
}

Outcome from_findings(const std::vector<std::string>& findings) {
   return findings.empty() ? Outcome::pass() : Outcome::fail(join(findings));
}

/// Component and encoding policy shared by the CA and end-entity name rules.
std::vector<std::string> name_findings(const x509::DistinguishedName& dn,
                                       std::string_view which,
                                       const EncodingPolicy& policy) {
   std::vector<std::string> findings;
   if(dn.empty()) {
      findings.push_back(fmt::format("{} name is empty", which));
      return findings;
   }
   if(x509::query_name(dn, oids::kCommonName).empty()) {
      findings.push_back(fmt::format("{} name has no CN", which));
   }
   for(std::size_t i = 1; i < dn.elements.size(); ++i) {
      if(dn.elements[i].rdn_index == dn.elements[i - 1].rdn_index) {
         findings.push_back(fmt::format("{} name has a multi-valued RDN at position {}", which,
                                        dn.elements[i].rdn_index));
         break;
      }
   }
   for(auto& f : check_name_encoding(dn, policy)) {
      findings.push_back(fmt::format("{} {}", which, f));
   }
   return findings;
}

std::vector<std::string> netscape_extensions(const Certificate& cert) {
   std::vector<std::string> names;
   for(const auto& e : cert.extensions) {
      if(e.oid.has_prefix(oids::kNetscapeArc)) {
         names.push_back(e.name);
      }
   }
   return names;
}

Outcome netscape_outcome(const Certificate& cert) {
   const auto names = netscape_extensions(cert);
   if(names.empty()) {
      return Outcome::pass();
   }
   std::string detail = fmt::format("deprecated extensions present: {}", fmt::join(names, ", "));
   if(cert.find_extension(oids::kNsCertType) != nullptr) {
      const auto c = check_nscerttype_consistency(cert);
      detail += c.consistent ? "; nsCertType consistent with keyUsage"
                             : fmt::format("; nsCertType inconsistent with keyUsage: {}", c.detail);
   }
   return Outcome::fail(detail);
}

const x509::KeyUsage* key_usage(const Certificate& cert) {
   const auto* e = cert.find_extension(oids::kKeyUsage);
   return e ? e->as<x509::KeyUsage>() : nullptr;
}

struct RuleSpec {
   const char* id;
   const char* provision;
   Level level;
   AppliesTo applies_to;
   const char* message;
};

rules::RulePtr make_cert_rule(const RuleSpec& spec, rules::CertCheck check) {
   return std::make_shared<const rules::Rule>(
      rules::Rule{spec.id, spec.provision, spec.level, spec.applies_to, std::move(check), spec.message});
}

rules::RulePtr make_crl_rule(const RuleSpec& spec, rules::CrlCheck check) {
   return std::make_shared<const rules::Rule>(
      rules::Rule{spec.id, spec.provision, spec.level, spec.applies_to, std::move(check), spec.message});
}

template <typename KeyFn>
std::vector<rules::CorpusViolation> uniqueness_violations(std::span<const rules::LoadedCertificate> certs,
                                                         KeyFn key_of,
                                                         std::string_view what) {
   std::map<std::string, std::size_t> group_size;
   for(const auto& c : certs) {
      ++group_size[key_of(*c.cert)];
   }
   std::vector<rules::CorpusViolation> out;
   for(const auto& c : certs) {
      const auto key = key_of(*c.cert);
      const auto n = group_size[key];
      if(n > 1) {
         out.push_back({c.subject_id, fmt::format("{} shared by {} certificates: {}", what, n, key)});
      }
   }
   return out;
}

// Identifiers that correspond to section numbers of the profile document.
bool verbatim_provision(std::string_view id) {
   static constexpr std::string_view kVerbatim[] = {"GCP-2.1", "GCP-2.2", "GCP-2.3", "GCP-2.4.1",
                                                    "GCP-2.4.4", "GCP-3.2", "GCP-3.3.13"};
   return std::find(std::begin(kVerbatim), std::end(kVerbatim), id) != std::end(kVerbatim);
}

}  // namespace

// ---------------------------------------------------------------------------

void CatalogConfig::validate() const {
   if(min_modulus_bits > recommended_modulus_bits) {
      throw ConfigError(fmt::format("min_modulus_bits {} exceeds recommended_modulus_bits {}", min_modulus_bits,
                                    recommended_modulus_bits));
   }
   if(min_exponent % 2 == 0) {
      throw ConfigError(fmt::format("min_exponent {} must be odd", min_exponent));
   }
   for(const auto* pattern : {&robot_cn_pattern, &host_fqdn_pattern}) {
      try {
         std::regex check(*pattern);
      } catch(const std::regex_error& e) {
         throw ConfigError(fmt::format("invalid pattern '{}': {}", *pattern, e.what()));
      }
   }
}

CatalogConfig load_config(const std::filesystem::path& path, CatalogConfig base) {
   std::ifstream in(path);
   if(!in) {
      throw ConfigError(fmt::format("cannot read config file {}", path.string()));
   }
   std::string line;
   std::size_t lineno = 0;
   while(std::getline(in, line)) {
      ++lineno;
      const auto text = trim(line);
      if(text.empty() || text.front() == '#') {
         continue;
      }
      const auto eq = text.find('=');
      if(eq == std::string::npos) {
         throw ConfigError(fmt::format("{}:{}: expected key=value", path.string(), lineno));
      }
      const auto key = trim(std::string_view(text).substr(0, eq));
      const auto value = trim(std::string_view(text).substr(eq + 1));
      if(key == "min_modulus_bits") {
         base.min_modulus_bits = parse_unsigned(key, value);
      } else if(key == "recommended_modulus_bits") {
         base.recommended_modulus_bits = parse_unsigned(key, value);
      } else if(key == "min_exponent") {
         base.min_exponent = parse_unsigned(key, value);
      } else if(key == "blacklist_path") {
         base.blacklist_path = value.empty() ? std::nullopt : std::optional<std::filesystem::path>(value);
      } else if(key == "robot_cn_pattern") {
         base.robot_cn_pattern = value;
      } else if(key == "host_fqdn_pattern") {
         base.host_fqdn_pattern = value;
      } else {
         throw ConfigError(fmt::format("{}:{}: unknown key '{}'", path.string(), lineno, key));
      }
   }
   base.validate();
   return base;
}

Blacklist load_blacklist(const std::filesystem::path& path) {
   std::ifstream in(path);
   if(!in) {
      throw BlacklistUnreadable(fmt::format("cannot read blacklist {}", path.string()));
   }
   Blacklist bl;
   bl.configured = true;
   std::string line;
   std::size_t lineno = 0;
   while(std::getline(in, line)) {
      ++lineno;
      auto text = trim(line);
      if(text.empty() || text.front() == '#') {
         continue;
      }
      std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
      const bool hex40 = text.size() == 40 && std::all_of(text.begin(), text.end(), [](char c) {
                            return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
                         });
      if(!hex40) {
         throw BlacklistUnreadable(
            fmt::format("{}:{}: expected a 40 character hex fingerprint", path.string(), lineno));
      }
      bl.fingerprints.insert(std::move(text));
   }
   return bl;
}

bool check_blacklist(const std::string& fingerprint, const Blacklist& blacklist) {
   return blacklist.fingerprints.contains(fingerprint);
}

EncodingPolicy EncodingPolicy::defaults() {
   EncodingPolicy p;
   p.required[oids::kDomainComponent] = x509::StringEncoding::Ia5String;
   p.required[oids::kEmailAddress] = x509::StringEncoding::Ia5String;
   return p;
}

std::vector<std::string> check_name_encoding(const x509::DistinguishedName& dn, const EncodingPolicy& policy) {
   std::vector<std::string> findings;
   for(const auto& el : dn.elements) {
      const std::string label = el.attr_name.empty() ? el.attr_type.dotted() : el.attr_name;
      if(const auto it = policy.required.find(el.attr_type); it != policy.required.end()) {
         if(el.encoding != it->second) {
            findings.push_back(fmt::format("{}={} is {}, must be {}", label, el.value, x509::to_string(el.encoding),
                                           x509::to_string(it->second)));
         }
      } else if(!policy.allowed_general.contains(el.encoding)) {
         findings.push_back(
            fmt::format("{}={} uses disallowed encoding {}", label, el.value, x509::to_string(el.encoding)));
      }
   }
   return findings;
}

Consistency check_nscerttype_consistency(const Certificate& cert) {
   const auto* ns_ext = cert.find_extension(oids::kNsCertType);
   if(ns_ext == nullptr) {
      return {true, "no nsCertType"};
   }
   const auto* ns = ns_ext->as<x509::NsCertType>();
   if(ns == nullptr) {
      return {false, "nsCertType could not be decoded"};
   }
   const auto* ku = key_usage(cert);
   if(ku == nullptr) {
      return {false, "keyUsage missing"};
   }

   struct Requirement {
      NsCertTypeBit ns_bit;
      const char* ns_name;
      std::vector<KeyUsageBit> any_of;
      const char* ku_names;
   };
   const Requirement table[] = {
      {NsCertTypeBit::SslCa, "sslCA", {KeyUsageBit::KeyCertSign}, "keyCertSign"},
      {NsCertTypeBit::SmimeCa, "emailCA", {KeyUsageBit::KeyCertSign}, "keyCertSign"},
      {NsCertTypeBit::ObjectSigningCa, "objCA", {KeyUsageBit::KeyCertSign}, "keyCertSign"},
      {NsCertTypeBit::SslClient, "sslClient", {KeyUsageBit::DigitalSignature}, "digitalSignature"},
      {NsCertTypeBit::SslServer,
       "sslServer",
       {KeyUsageBit::KeyEncipherment, KeyUsageBit::DigitalSignature},
       "keyEncipherment or digitalSignature"},
      {NsCertTypeBit::Smime, "email", {KeyUsageBit::DigitalSignature}, "digitalSignature"},
   };
   std::vector<std::string> problems;
   for(const auto& req : table) {
      if(!ns->has(req.ns_bit)) {
         continue;
      }
      const bool ok = std::any_of(req.any_of.begin(), req.any_of.end(), [&](KeyUsageBit b) { return ku->has(b); });
      if(!ok) {
         problems.push_back(fmt::format("nsCertType {} requires keyUsage {}", req.ns_name, req.ku_names));
      }
   }
   if(problems.empty()) {
      return {true, "consistent"};
   }
   return {false, join(problems)};
}

std::vector<std::string> check_rsa_parameters(const x509::PublicKeyInfo& key,
                                              const CatalogConfig& config,
                                              std::string* note) {
   std::vector<std::string> findings;
   if(!key.is_rsa()) {
      if(note) {
         *note = fmt::format("not an RSA key ({})", x509::oid_display(key.algorithm));
      }
      return findings;
   }
   if(key.modulus_bits < config.min_modulus_bits) {
      findings.push_back(fmt::format("modulus {} < {}", key.modulus_bits, config.min_modulus_bits));
   }
   const auto& e = *key.rsa_exponent;
   const auto small = e.to_u64();
   const std::string shown = small ? std::to_string(*small) : "0x" + e.to_hex();
   if(!e.is_odd()) {
      findings.push_back(fmt::format("exponent {} is even", shown));
   }
   if(e.negative || (small && *small < config.min_exponent)) {
      findings.push_back(fmt::format("exponent {} < {}", shown, config.min_exponent));
   }
   return findings;
}

std::string_view to_string(ProvisionStatus s) {
   switch(s) {
      case ProvisionStatus::Implemented: return "implemented";
      case ProvisionStatus::NeedsCorpus: return "needs_corpus";
      case ProvisionStatus::NeedsOnline: return "needs_online";
      case ProvisionStatus::NeedsManual: return "needs_manual";
   }
   return "implemented";
}

const rules::RuleSuite* RuleCatalog::suite(std::string_view name) const noexcept {
   for(const auto* s : {&ca_suite, &host_suite, &person_suite, &robot_suite, &rat_suite, &crl_suite}) {
      if(s->name == name) {
         return s;
      }
   }
   return nullptr;
}

std::vector<rules::RulePtr> RuleCatalog::all_rules() const {
   std::vector<rules::RulePtr> out;
   for(const auto* s : {&ca_suite, &host_suite, &person_suite, &robot_suite, &rat_suite, &crl_suite}) {
      for(const auto& r : s->rules) {
         if(std::find(out.begin(), out.end(), r) == out.end()) {
            out.push_back(r);
         }
      }
   }
   return out;
}

std::size_t RuleCatalog::host_only_rule_count() const {
   return static_cast<std::size_t>(std::count_if(host_suite.rules.begin(), host_suite.rules.end(), [&](const auto& r) {
      return std::find(person_suite.rules.begin(), person_suite.rules.end(), r) == person_suite.rules.end();
   }));
}

// ---------------------------------------------------------------------------

RuleCatalog build_catalog(const CatalogConfig& config) {
   config.validate();
   RuleCatalog cat;
   if(config.blacklist_path) {
      cat.blacklist = load_blacklist(*config.blacklist_path);
   }

   const auto policy = std::make_shared<const EncodingPolicy>(EncodingPolicy::defaults());
   const auto robot_re = std::make_shared<const std::regex>(config.robot_cn_pattern);
   const auto fqdn_re = std::make_shared<const std::regex>(config.host_fqdn_pattern);
   const auto blacklist = std::make_shared<const Blacklist>(cat.blacklist);
   const CatalogConfig cfg = config;

   // --- common to every certificate class

   const auto version = make_cert_rule(
      {"GCP-2.1", "GCP 2.1", Level::Must, AppliesTo::Any, "certificate version is X.509v3 (encoded value 2)"},
      [](const Certificate& c) {
         return c.version == 2 ? Outcome::pass() : Outcome::fail(fmt::format("expected 2, got {}", c.version));
      });
   const auto serial = make_cert_rule(
      {"EXTRA-SERIAL", "additional requirement", Level::ShouldNot, AppliesTo::Any, "serial number is not zero"},
      [](const Certificate& c) {
         return c.serial.is_zero() ? Outcome::fail("expected non-zero serial, got 0")
                                   : Outcome::pass(fmt::format("serial 0x{}", c.serial.to_hex()));
      });
   const auto validity = make_cert_rule(
      {"EXTRA-VALIDITY", "RFC 5280 4.1.2.5", Level::Must, AppliesTo::Any, "notBefore precedes notAfter"},
      [](const Certificate& c) {
         if(c.not_before < c.not_after) {
            return Outcome::pass();
         }
         return Outcome::fail(
            fmt::format("notBefore {} is not before notAfter {}", c.not_before.iso8601(), c.not_after.iso8601()));
      });
   const auto sigalg_match = make_cert_rule(
      {"EXTRA-SIGALG-MATCH", "RFC 5280 4.1.1.2", Level::Must, AppliesTo::Any,
       "inner and outer signature algorithms agree"},
      [](const Certificate& c) {
         if(c.tbs_sig_alg_oid == c.sig_alg_oid) {
            return Outcome::pass();
         }
         return Outcome::fail(fmt::format("expected {}, got {}", c.sig_alg_name, x509::oid_display(c.tbs_sig_alg_oid)));
      });

   // --- CA certificates

   const auto ca_md5 = make_cert_rule(
      {"GCP-2.2", "GCP 2.2", Level::MustNot, AppliesTo::CA, "CA certificate is not signed with an MD5 digest"},
      [](const Certificate& c) {
         return is_md5(c.sig_alg_oid) ? Outcome::fail(fmt::format("signature algorithm is {}", c.sig_alg_name))
                                      : Outcome::pass(c.sig_alg_name);
      });
   const auto ca_names = make_cert_rule(
      {"GCP-2.3", "GCP 2.3", Level::Should, AppliesTo::CA,
       "CA issuer and subject names have the required components and encodings"},
      [policy](const Certificate& c) {
         auto findings = name_findings(c.issuer, "issuer", *policy);
         auto subject = name_findings(c.subject, "subject", *policy);
         findings.insert(findings.end(), subject.begin(), subject.end());
         return from_findings(findings);
      });
   const auto ca_bc_critical = make_cert_rule(
      {"GCP-2.4.1", "GCP 2.4.1", Level::Should, AppliesTo::CA, "basicConstraints is marked critical"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kBasicConstraints);
         if(e == nullptr) {
            return Outcome::fail("basicConstraints missing");
         }
         return e->critical ? Outcome::pass() : Outcome::fail("expected critical, got non-critical");
      });
   const auto ca_bc_ca = make_cert_rule(
      {"GCP-2.4.1-CA", "GCP 2.4.1", Level::Must, AppliesTo::CA, "basicConstraints asserts cA=TRUE"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kBasicConstraints);
         const auto* bc = e ? e->as<x509::BasicConstraints>() : nullptr;
         if(bc == nullptr) {
            return Outcome::fail(e ? "basicConstraints undecodable" : "basicConstraints missing");
         }
         return bc->ca ? Outcome::pass() : Outcome::fail("expected cA=TRUE, got FALSE");
      });
   const auto ca_ku = make_cert_rule(
      {"GCP-2.4.2", "GCP 2.4.2", Level::Must, AppliesTo::CA, "keyUsage asserts keyCertSign and cRLSign"},
      [](const Certificate& c) {
         const auto* ku = key_usage(c);
         if(ku == nullptr) {
            return Outcome::fail("keyUsage missing");
         }
         std::vector<std::string> missing;
         if(!ku->has(KeyUsageBit::KeyCertSign)) {
            missing.emplace_back("keyCertSign");
         }
         if(!ku->has(KeyUsageBit::CrlSign)) {
            missing.emplace_back("cRLSign");
         }
         return missing.empty() ? Outcome::pass()
                                : Outcome::fail(fmt::format("keyUsage lacks {}", fmt::join(missing, ", ")));
      });
   const auto ca_ku_critical = make_cert_rule(
      {"GCP-2.4.2-CRIT", "GCP 2.4.2", Level::Should, AppliesTo::CA, "keyUsage is marked critical"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kKeyUsage);
         if(e == nullptr) {
            return Outcome::fail("keyUsage missing");
         }
         return e->critical ? Outcome::pass() : Outcome::fail("expected critical, got non-critical");
      });
   const auto ca_ski = make_cert_rule(
      {"GCP-2.4.3", "GCP 2.4.3", Level::Should, AppliesTo::CA, "subjectKeyIdentifier is present"},
      [](const Certificate& c) {
         return c.find_extension(oids::kSubjectKeyIdentifier) ? Outcome::pass()
                                                             : Outcome::fail("subjectKeyIdentifier missing");
      });
   const auto ca_ns = make_cert_rule(
      {"GCP-2.4.4", "GCP 2.4.4", Level::ShouldNot, AppliesTo::CA,
       "deprecated ns* extensions are absent (nsCertType, if used, must match keyUsage)"},
      [](const Certificate& c) { return netscape_outcome(c); });

   // --- end-entity certificates

   const auto ee_md5 = make_cert_rule(
      {"GCP-3.1", "GCP 3.1", Level::MustNot, AppliesTo::AnyEndEntity,
       "end-entity certificate is not signed with an MD5 digest"},
      [](const Certificate& c) {
         return is_md5(c.sig_alg_oid) ? Outcome::fail(fmt::format("signature algorithm is {}", c.sig_alg_name))
                                      : Outcome::pass(c.sig_alg_name);
      });
   const auto ee_subject = make_cert_rule(
      {"GCP-3.2", "GCP 3.2", Level::Should, AppliesTo::AnyEndEntity,
       "subject name has the required components and encodings"},
      [policy](const Certificate& c) { return from_findings(name_findings(c.subject, "subject", *policy)); });
   const auto ee_not_ca = make_cert_rule(
      {"GCP-3.3.1", "GCP 3.3.1", Level::MustNot, AppliesTo::AnyEndEntity, "basicConstraints does not assert cA=TRUE"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kBasicConstraints);
         const auto* bc = e ? e->as<x509::BasicConstraints>() : nullptr;
         return bc && bc->ca ? Outcome::fail("expected cA=FALSE, got TRUE") : Outcome::pass();
      });
   const auto ee_ku = make_cert_rule(
      {"GCP-3.3.2", "GCP 3.3.2", Level::Must, AppliesTo::AnyEndEntity, "keyUsage asserts digitalSignature"},
      [](const Certificate& c) {
         const auto* ku = key_usage(c);
         if(ku == nullptr) {
            return Outcome::fail("keyUsage missing");
         }
         return ku->has(KeyUsageBit::DigitalSignature) ? Outcome::pass()
                                                       : Outcome::fail("keyUsage lacks digitalSignature");
      });
   const auto ee_ku_critical = make_cert_rule(
      {"GCP-3.3.2-CRIT", "GCP 3.3.2", Level::Should, AppliesTo::AnyEndEntity, "keyUsage is marked critical"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kKeyUsage);
         if(e == nullptr) {
            return Outcome::fail("keyUsage missing");
         }
         return e->critical ? Outcome::pass() : Outcome::fail("expected critical, got non-critical");
      });
   const auto ee_ku_no_ca = make_cert_rule(
      {"GCP-3.3.2-NOCA", "GCP 3.3.2", Level::MustNot, AppliesTo::AnyEndEntity,
       "keyUsage does not assert keyCertSign or cRLSign"},
      [](const Certificate& c) {
         const auto* ku = key_usage(c);
         if(ku && (ku->has(KeyUsageBit::KeyCertSign) || ku->has(KeyUsageBit::CrlSign))) {
            return Outcome::fail("keyUsage asserts a CA signing bit");
         }
         return Outcome::pass();
      });
   const auto ee_eku = make_cert_rule(
      {"GCP-3.3.3", "GCP 3.3.3", Level::Should, AppliesTo::AnyEndEntity, "extendedKeyUsage is present"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kExtendedKeyUsage);
         const auto* eku = e ? e->as<x509::ExtendedKeyUsage>() : nullptr;
         if(eku == nullptr || eku->purposes.empty()) {
            return Outcome::fail(e ? "extendedKeyUsage empty or undecodable" : "extendedKeyUsage missing");
         }
         return Outcome::pass();
      });
   const auto ee_crldp = make_cert_rule(
      {"GCP-3.3.4", "GCP 3.3.4", Level::Must, AppliesTo::AnyEndEntity,
       "cRLDistributionPoints names at least one URI"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kCrlDistributionPoints);
         const auto* dp = e ? e->as<x509::CrlDistributionPoints>() : nullptr;
         if(dp == nullptr || dp->uris.empty()) {
            return Outcome::fail(e ? "cRLDistributionPoints has no URI" : "cRLDistributionPoints missing");
         }
         return Outcome::pass(dp->uris.front());
      });
   const auto ee_aki = make_cert_rule(
      {"GCP-3.3.5", "GCP 3.3.5", Level::Must, AppliesTo::AnyEndEntity, "authorityKeyIdentifier is present"},
      [](const Certificate& c) {
         return c.find_extension(oids::kAuthorityKeyIdentifier) ? Outcome::pass()
                                                               : Outcome::fail("authorityKeyIdentifier missing");
      });
   const auto ee_ns = make_cert_rule(
      {"GCP-3.3.9", "GCP 3.3.9", Level::ShouldNot, AppliesTo::AnyEndEntity,
       "deprecated ns* extensions are absent (nsCertType, if used, must match keyUsage)"},
      [](const Certificate& c) { return netscape_outcome(c); });

   // --- host only

   const auto host_one_cn = make_cert_rule(
      {"GCP-3.2-HOST-CN", "GCP 3.2", Level::Must, AppliesTo::Host, "host subject has exactly one CN"},
      [](const Certificate& c) {
         const auto n = x509::query_name(c.subject, oids::kCommonName).size();
         return n == 1 ? Outcome::pass() : Outcome::fail(fmt::format("expected 1 CN, got {}", n));
      });
   const auto host_fqdn = make_cert_rule(
      {"GCP-3.2-HOST-FQDN", "GCP 3.2", Level::Must, AppliesTo::Host,
       "host CN is a fully-qualified domain name, optionally service/FQDN"},
      [fqdn_re](const Certificate& c) {
         const auto cns = x509::query_name(c.subject, oids::kCommonName);
         if(cns.empty()) {
            return Outcome::fail("no CN");
         }
         for(const auto& cn : cns) {
            if(!std::regex_search(cn.value, *fqdn_re)) {
               return Outcome::fail(fmt::format("CN '{}' is not a host name", cn.value));
            }
         }
         return Outcome::pass();
      });
   const auto host_san = make_cert_rule(
      {"GCP-3.3.6-HOST-SAN", "GCP 3.3.6", Level::Should, AppliesTo::Host, "subjectAltName contains a dNSName"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kSubjectAltName);
         const auto* san = e ? e->as<x509::GeneralNames>() : nullptr;
         if(san == nullptr || san->dns_names.empty()) {
            return Outcome::fail(e ? "subjectAltName has no dNSName" : "subjectAltName missing");
         }
         return Outcome::pass(san->dns_names.front());
      });
   const auto host_eku = make_cert_rule(
      {"GCP-3.3.3-HOST-EKU", "GCP 3.3.3", Level::Should, AppliesTo::Host, "extendedKeyUsage includes serverAuth"},
      [](const Certificate& c) {
         const auto* e = c.find_extension(oids::kExtendedKeyUsage);
         if(e == nullptr) {
            return Outcome::pass("no extendedKeyUsage");
         }
         const auto* eku = e->as<x509::ExtendedKeyUsage>();
         return eku && eku->has(oids::kServerAuth) ? Outcome::pass() : Outcome::fail("serverAuth not asserted");
      });

   // --- robot only

   const auto robot_cn = make_cert_rule(
      {"GCP-3.2-ROBOT", "GCP 3.2", Level::Should, AppliesTo::Robot, "robot CN identifies the entity as a robot"},
      [robot_re](const Certificate& c) {
         const auto cns = x509::query_name(c.subject, oids::kCommonName);
         for(const auto& cn : cns) {
            if(std::regex_search(cn.value, *robot_re)) {
               return Outcome::pass(cn.value);
            }
         }
         return Outcome::fail(cns.empty() ? std::string("no CN")
                                          : fmt::format("CN '{}' does not match the robot pattern", cns.front().value));
      });

   // --- vulnerability checks

   const auto rat_md5 = make_cert_rule(
      {"RAT-MD5", "IGTF RAT", Level::MustNot, AppliesTo::Any, "no MD5 digest in the signature algorithms"},
      [](const Certificate& c) {
         if(is_md5(c.sig_alg_oid) || is_md5(c.tbs_sig_alg_oid)) {
            return Outcome::fail(fmt::format("signature algorithm is {}",
                                             is_md5(c.sig_alg_oid) ? c.sig_alg_name : x509::oid_display(c.tbs_sig_alg_oid)));
         }
         return Outcome::pass();
      });
   const auto rat_rsa = make_cert_rule(
      {"RAT-RSA", "IGTF RAT", Level::Must, AppliesTo::Any, "RSA parameters are not vulnerable"},
      [cfg](const Certificate& c) {
         std::string note;
         const auto findings = check_rsa_parameters(c.public_key, cfg, &note);
         return findings.empty() ? Outcome::pass(note) : Outcome::fail(join(findings));
      });
   const auto rat_rsa_size = make_cert_rule(
      {"RAT-RSA-SIZE", "IGTF RAT", Level::Recommended, AppliesTo::Any, "RSA modulus meets the recommended size"},
      [cfg](const Certificate& c) {
         if(!c.public_key.is_rsa() || c.public_key.modulus_bits >= cfg.recommended_modulus_bits) {
            return Outcome::pass();
         }
         return Outcome::fail(fmt::format("modulus {} < {}", c.public_key.modulus_bits, cfg.recommended_modulus_bits));
      });
   const auto rat_debian = make_cert_rule(
      {"RAT-DEBIAN", "IGTF RAT", Level::MustNot, AppliesTo::Any, "public key is not a known-weak key"},
      [blacklist](const Certificate& c) {
         if(!blacklist->configured) {
            return Outcome::skip("no weak-key blacklist configured");
         }
         const auto fp = x509::spki_fingerprint(c);
         return check_blacklist(fp, *blacklist) ? Outcome::fail(fmt::format("fingerprint {} is blacklisted", fp))
                                                : Outcome::pass();
      });

   // --- CRLs

   const auto crl_md5 = make_crl_rule(
      {"CRL-MD5", "IGTF RAT", Level::MustNot, AppliesTo::Crl, "CRL is not signed with an MD5 digest"},
      [](const Crl& c) {
         return is_md5(c.sig_alg_oid) || is_md5(c.tbs_sig_alg_oid)
                   ? Outcome::fail(fmt::format("signature algorithm is {}", c.sig_alg_name))
                   : Outcome::pass();
      });
   const auto crl_next = make_crl_rule(
      {"CRL-NEXTUPDATE", "RFC 5280 5.1.2.5", Level::Must, AppliesTo::Crl, "nextUpdate is present and after thisUpdate"},
      [](const Crl& c) {
         if(!c.next_update) {
            return Outcome::fail("nextUpdate missing");
         }
         return *c.next_update > c.this_update ? Outcome::pass()
                                               : Outcome::fail(fmt::format("nextUpdate {} is not after thisUpdate {}",
                                                                           c.next_update->iso8601(),
                                                                           c.this_update.iso8601()));
      });
   const auto crl_version = make_crl_rule(
      {"CRL-VERSION", "RFC 5280 5.1.2.1", Level::Should, AppliesTo::Crl, "CRL is version 2"},
      [](const Crl& c) {
         return c.version == 1 ? Outcome::pass() : Outcome::fail(fmt::format("expected 1, got {}", c.version));
      });

   const std::vector<rules::RulePtr> common = {version, serial, validity, sigalg_match};
   const std::vector<rules::RulePtr> end_entity = {ee_md5,         ee_subject,  ee_not_ca, ee_ku,  ee_ku_critical,
                                                   ee_ku_no_ca,    ee_eku,      ee_crldp,  ee_aki, ee_ns};
   auto concat = [](std::initializer_list<std::vector<rules::RulePtr>> parts) {
      std::vector<rules::RulePtr> out;
      for(const auto& p : parts) {
         out.insert(out.end(), p.begin(), p.end());
      }
      return out;
   };

   cat.ca_suite = {"ca",
                   concat({common,
                           {ca_md5, ca_names, ca_bc_critical, ca_bc_ca, ca_ku, ca_ku_critical, ca_ski, ca_ns}})};
   cat.host_suite = {"host", concat({common, end_entity, {host_one_cn, host_fqdn, host_san, host_eku}})};
   cat.person_suite = {"person", concat({common, end_entity})};
   cat.robot_suite = {"robot", concat({common, end_entity, {robot_cn}})};
   cat.rat_suite = {"rat", {rat_md5, rat_rsa, rat_rsa_size, rat_debian}};
   cat.crl_suite = {"crl", {crl_md5, crl_next, crl_version}};

   cat.corpus_rules.push_back(
      {"CORPUS-SERIAL-UNIQ", "GCP serial uniqueness", Level::Must,
       [](std::span<const rules::LoadedCertificate> certs) {
          return uniqueness_violations(
             certs, [](const Certificate& c) { return fmt::format("{} / serial 0x{}", c.issuer.canonical, c.serial.to_hex()); },
             "issuer and serial number");
       },
       "serial numbers are unique per issuer"});
   cat.corpus_rules.push_back(
      {"CORPUS-SUBJECT-UNIQ", "GCP subject uniqueness", Level::Must,
       [](std::span<const rules::LoadedCertificate> certs) {
          return uniqueness_violations(certs, [](const Certificate& c) { return c.subject.canonical; }, "subject name");
       },
       "subject names are unique across the corpus"});

   for(const auto& r : cat.all_rules()) {
      cat.provision_ledger.push_back(
         {r->id, ProvisionStatus::Implemented, r->message, !verbatim_provision(r->id)});
   }
   for(const auto& r : cat.corpus_rules) {
      cat.provision_ledger.push_back({r.id, ProvisionStatus::NeedsCorpus, r.message, true});
   }
   cat.provision_ledger.push_back({"GCP-3.3.4-FETCH", ProvisionStatus::NeedsOnline,
                                   "cRLDistributionPoints URI refers to a DER-encoded CRL", true});
   cat.provision_ledger.push_back(
      {"GCP-3.3.13", ProvisionStatus::NeedsManual, "OCSP responder is of production quality", false});
   return cat;
}

std::map<std::string, std::string> default_cause_map() {
   const std::string serial(cause::kSerialNumber);
   const std::string ns(cause::kNsCertType);
   const std::string subject(cause::kSubjectName);
   return {
      {"LOAD", "Load"},
      {"GCP-2.1", "Version"},
      {"EXTRA-SERIAL", serial},
      {"CORPUS-SERIAL-UNIQ", serial},
      {"EXTRA-VALIDITY", "Validity"},
      {"EXTRA-SIGALG-MATCH", "Signature algorithm"},
      {"GCP-2.2", "MD5"},
      {"GCP-3.1", "MD5"},
      {"RAT-MD5", "MD5"},
      {"CRL-MD5", "MD5"},
      {"GCP-2.3", subject},
      {"GCP-3.2", subject},
      {"GCP-3.2-HOST-CN", subject},
      {"GCP-3.2-HOST-FQDN", subject},
      {"GCP-3.2-ROBOT", subject},
      {"CORPUS-SUBJECT-UNIQ", subject},
      {"GCP-2.4.1", "basicConstraints"},
      {"GCP-2.4.1-CA", "basicConstraints"},
      {"GCP-3.3.1", "basicConstraints"},
      {"GCP-2.4.2", "keyUsage"},
      {"GCP-2.4.2-CRIT", "keyUsage"},
      {"GCP-3.3.2", "keyUsage"},
      {"GCP-3.3.2-CRIT", "keyUsage"},
      {"GCP-3.3.2-NOCA", "keyUsage"},
      {"GCP-2.4.3", "Key identifiers"},
      {"GCP-3.3.5", "Key identifiers"},
      {"GCP-2.4.4", ns},
      {"GCP-3.3.9", ns},
      {"GCP-3.3.3", "extendedKeyUsage"},
      {"GCP-3.3.3-HOST-EKU", "extendedKeyUsage"},
      {"GCP-3.3.4", "cRLDistributionPoints"},
      {"GCP-3.3.6-HOST-SAN", "subjectAltName"},
      {"RAT-RSA", "RSA key"},
      {"RAT-RSA-SIZE", "RSA key"},
      {"RAT-DEBIAN", "Weak key"},
      {"CRL-NEXTUPDATE", "CRL validity"},
      {"CRL-VERSION", "CRL version"},
   };
}

}  // namespace certlint::profile
