#pragma once

// Builds DER certificates and CRLs field by field for tests. Signatures are
// filler bytes; nothing here verifies or produces real signatures.

#include <certlint/der.hpp>
#include <certlint/profile.hpp>
#include <certlint/rules.hpp>
#include <certlint/x509.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace certlint::testing {

using der::Bytes;
using der::Oid;

struct AttrSpec {
   Oid type;
   std::uint32_t string_tag = der::tag::kPrintableString;
   std::string value;
   /// False places this attribute in the previous RDN (multi-valued RDN).
   bool new_rdn = true;
};

struct ExtSpec {
   Oid oid;
   bool critical = false;
   Bytes value;
};

struct CertSpec {
   std::optional<int> version = 2;  // nullopt omits the field
   der::Integer serial = der::Integer::from_u64(0x1001);
   Oid tbs_sig_alg = x509::oids::kSha256WithRsa;
   Oid sig_alg = x509::oids::kSha256WithRsa;
   std::vector<AttrSpec> issuer;
   std::vector<AttrSpec> subject;
   der::Timestamp not_before{2009, 3, 15, 12, 0, 0};
   der::Timestamp not_after{2019, 3, 15, 12, 0, 0};
   Bytes rsa_modulus;
   der::Integer rsa_exponent = der::Integer::from_u64(65537);
   std::vector<ExtSpec> extensions;

   void set_extension(ExtSpec ext);
   void remove_extension(const Oid& oid);
};

struct CrlSpec {
   std::optional<int> version = 1;
   Oid tbs_sig_alg = x509::oids::kSha256WithRsa;
   Oid sig_alg = x509::oids::kSha256WithRsa;
   std::vector<AttrSpec> issuer;
   der::Timestamp this_update{2009, 6, 1, 0, 0, 0};
   std::optional<der::Timestamp> next_update = der::Timestamp{2009, 7, 1, 0, 0, 0};
   std::vector<std::uint64_t> revoked_serials;
};

der::DerNode build_name(const std::vector<AttrSpec>& attrs);
Bytes build_certificate(const CertSpec& spec);
Bytes build_crl(const CrlSpec& spec);

/// Deterministic odd modulus with exactly `bits` bits (not a real RSA key).
Bytes make_modulus(std::size_t bits, std::uint32_t seed);

// Extension builders
ExtSpec ext_basic_constraints(bool ca, bool critical);
ExtSpec ext_key_usage(const std::vector<x509::KeyUsageBit>& bits, bool critical);
ExtSpec ext_extended_key_usage(const std::vector<Oid>& purposes);
ExtSpec ext_subject_alt_dns(const std::vector<std::string>& names);
ExtSpec ext_crl_distribution_point(const std::string& uri);
ExtSpec ext_authority_key_id(const Bytes& key_id);
ExtSpec ext_subject_key_id(const Bytes& key_id);
ExtSpec ext_ns_cert_type(const std::vector<x509::NsCertTypeBit>& bits);
ExtSpec ext_ns_comment(const std::string& text);

// Compliant baselines
std::vector<AttrSpec> ca_name();
CertSpec compliant_ca();
CertSpec compliant_host();
CertSpec compliant_person();
CertSpec compliant_robot();
CrlSpec compliant_crl();

/// Modulus whose SPKI fingerprint the seeded-violation blacklist lists.
Bytes weak_modulus();

/// Per rule id, a mutation that violates exactly that rule.
using CertMutation = std::function<void(CertSpec&)>;
using CrlMutation = std::function<void(CrlSpec&)>;
const std::map<std::string, CertMutation>& cert_mutations();
const std::map<std::string, CrlMutation>& crl_mutations();

/// Compliant baseline for a class suite name (ca, host, person, robot, rat).
CertSpec baseline_for_suite(std::string_view suite);
rules::SubjectClass class_for_suite(std::string_view suite);

rules::Subject make_subject(std::string id, const Bytes& der, rules::SubjectClass cls);
rules::Subject make_crl_subject(std::string id, const Bytes& der);

/// Writes a blacklist containing the weak fixture key to a temp file and
/// returns its path.
std::string write_weak_key_blacklist();

/// Catalog built with the weak-key blacklist configured.
profile::RuleCatalog seeded_catalog();

}  // namespace certlint::testing
