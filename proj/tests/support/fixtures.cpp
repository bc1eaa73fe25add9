#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

namespace certlint::testing {

using der::DerNode;
using der::TagClass;
namespace tag = der::tag;
namespace oids = x509::oids;

namespace {

DerNode oid_node(const Oid& oid) {
   return DerNode::primitive(tag::kOid, der::encode_oid(oid));
}

DerNode algorithm(const Oid& oid) {
   return DerNode::sequence({oid_node(oid), DerNode::primitive(tag::kNull, {})});
}

DerNode integer(const der::Integer& v) {
   return DerNode::primitive(tag::kInteger, der::encode_integer(v));
}

DerNode bit_string(const Bytes& payload) {
   Bytes content{0x00};
   content.insert(content.end(), payload.begin(), payload.end());
   return DerNode::primitive(tag::kBitString, std::move(content));
}

DerNode ia5(std::uint32_t context_tag, const std::string& text) {
   return DerNode::primitive(TagClass::ContextSpecific, context_tag, Bytes(text.begin(), text.end()));
}

Bytes encode_string(std::uint32_t string_tag, const std::string& value) {
   if(string_tag == tag::kBmpString) {
      Bytes out;
      for(const unsigned char c : value) {
         out.push_back(0);
         out.push_back(c);
      }
      return out;
   }
   if(string_tag == tag::kUniversalString) {
      Bytes out;
      for(const unsigned char c : value) {
         out.insert(out.end(), {0, 0, 0, c});
      }
      return out;
   }
   return Bytes(value.begin(), value.end());
}

Bytes filler(std::size_t n, std::uint8_t seed) {
   Bytes out(n);
   for(std::size_t i = 0; i < n; ++i) {
      out[i] = static_cast<std::uint8_t>(seed + i * 7);
   }
   return out;
}

ExtSpec make_ext(const Oid& oid, bool critical, const DerNode& value) {
   return {oid, critical, der::encode(value)};
}

std::vector<AttrSpec> ee_name(const std::string& cn) {
   return {{oids::kDomainComponent, tag::kIa5String, "org"},
           {oids::kDomainComponent, tag::kIa5String, "example"},
           {oids::kOrganization, tag::kPrintableString, "Grid"},
           {oids::kCommonName, tag::kPrintableString, cn}};
}

CertSpec end_entity_base(const std::string& cn, std::uint32_t seed, std::vector<Oid> purposes) {
   CertSpec s;
   s.serial = der::Integer::from_u64(0x2000 + seed);
   s.issuer = ca_name();
   s.subject = ee_name(cn);
   s.rsa_modulus = make_modulus(2048, seed);
   s.extensions = {
      ext_basic_constraints(false, true),
      ext_key_usage({x509::KeyUsageBit::DigitalSignature, x509::KeyUsageBit::KeyEncipherment}, true),
      ext_extended_key_usage(purposes),
      ext_crl_distribution_point("http://ca.example.org/crl.der"),
      ext_authority_key_id(filler(20, 0x11)),
   };
   return s;
}

void set_cn(CertSpec& s, std::uint32_t string_tag, const std::string& value) {
   for(auto& a : s.subject) {
      if(a.type == oids::kCommonName) {
         a.string_tag = string_tag;
         a.value = value;
      }
   }
}

}  // namespace

void CertSpec::set_extension(ExtSpec ext) {
   for(auto& e : extensions) {
      if(e.oid == ext.oid) {
         e = std::move(ext);
         return;
      }
   }
   extensions.push_back(std::move(ext));
}

void CertSpec::remove_extension(const Oid& oid) {
   std::erase_if(extensions, [&](const ExtSpec& e) { return e.oid == oid; });
}

DerNode build_name(const std::vector<AttrSpec>& attrs) {
   std::vector<std::vector<DerNode>> rdns;
   for(const auto& a : attrs) {
      if(a.new_rdn || rdns.empty()) {
         rdns.emplace_back();
      }
      rdns.back().push_back(
         DerNode::sequence({oid_node(a.type), DerNode::primitive(a.string_tag, encode_string(a.string_tag, a.value))}));
   }
   std::vector<DerNode> sets;
   for(auto& r : rdns) {
      sets.push_back(DerNode::set(std::move(r)));
   }
   return DerNode::sequence(std::move(sets));
}

Bytes build_certificate(const CertSpec& spec) {
   std::vector<DerNode> tbs;
   if(spec.version) {
      tbs.push_back(DerNode::make_constructed(TagClass::ContextSpecific, 0,
                                              {integer(der::Integer::from_u64(static_cast<std::uint64_t>(*spec.version)))}));
   }
   tbs.push_back(integer(spec.serial));
   tbs.push_back(algorithm(spec.tbs_sig_alg));
   tbs.push_back(build_name(spec.issuer));
   tbs.push_back(DerNode::sequence({der::encode_time(spec.not_before), der::encode_time(spec.not_after)}));
   tbs.push_back(build_name(spec.subject));

   der::Integer modulus;
   modulus.magnitude = spec.rsa_modulus;
   const auto rsa_key = DerNode::sequence({integer(modulus), integer(spec.rsa_exponent)});
   tbs.push_back(DerNode::sequence({algorithm(oids::kRsaEncryption), bit_string(der::encode(rsa_key))}));

   if(!spec.extensions.empty()) {
      std::vector<DerNode> exts;
      for(const auto& e : spec.extensions) {
         std::vector<DerNode> fields{oid_node(e.oid)};
         if(e.critical) {
            fields.push_back(DerNode::primitive(tag::kBoolean, {0xff}));
         }
         fields.push_back(DerNode::primitive(tag::kOctetString, e.value));
         exts.push_back(DerNode::sequence(std::move(fields)));
      }
      tbs.push_back(DerNode::make_constructed(TagClass::ContextSpecific, 3, {DerNode::sequence(std::move(exts))}));
   }

   const auto cert =
      DerNode::sequence({DerNode::sequence(std::move(tbs)), algorithm(spec.sig_alg), bit_string(filler(64, 0x5a))});
   return der::encode(cert);
}

Bytes build_crl(const CrlSpec& spec) {
   std::vector<DerNode> tbs;
   if(spec.version) {
      tbs.push_back(integer(der::Integer::from_u64(static_cast<std::uint64_t>(*spec.version))));
   }
   tbs.push_back(algorithm(spec.tbs_sig_alg));
   tbs.push_back(build_name(spec.issuer));
   tbs.push_back(der::encode_time(spec.this_update));
   if(spec.next_update) {
      tbs.push_back(der::encode_time(*spec.next_update));
   }
   if(!spec.revoked_serials.empty()) {
      std::vector<DerNode> entries;
      for(const auto serial : spec.revoked_serials) {
         entries.push_back(DerNode::sequence({integer(der::Integer::from_u64(serial)), der::encode_time(spec.this_update)}));
      }
      tbs.push_back(DerNode::sequence(std::move(entries)));
   }
   const auto crl =
      DerNode::sequence({DerNode::sequence(std::move(tbs)), algorithm(spec.sig_alg), bit_string(filler(64, 0x3c))});
   return der::encode(crl);
}

Bytes make_modulus(std::size_t bits, std::uint32_t seed) {
   std::mt19937 rng(seed);
   const std::size_t n = (bits + 7) / 8;
   Bytes out(n);
   for(auto& b : out) {
      b = static_cast<std::uint8_t>(rng());
   }
   const std::size_t top_bits = bits - (n - 1) * 8;  // 1..8
   out[0] &= static_cast<std::uint8_t>((1u << top_bits) - 1);
   out[0] |= static_cast<std::uint8_t>(1u << (top_bits - 1));
   out.back() |= 1;
   return out;
}

ExtSpec ext_basic_constraints(bool ca, bool critical) {
   std::vector<DerNode> fields;
   if(ca) {
      fields.push_back(DerNode::primitive(tag::kBoolean, {0xff}));
   }
   return make_ext(oids::kBasicConstraints, critical, DerNode::sequence(std::move(fields)));
}

ExtSpec ext_key_usage(const std::vector<x509::KeyUsageBit>& bits, bool critical) {
   std::vector<std::size_t> set;
   for(const auto b : bits) {
      set.push_back(static_cast<std::size_t>(b));
   }
   return make_ext(oids::kKeyUsage, critical, DerNode::primitive(tag::kBitString, der::encode_named_bits(set)));
}

ExtSpec ext_extended_key_usage(const std::vector<Oid>& purposes) {
   std::vector<DerNode> fields;
   for(const auto& p : purposes) {
      fields.push_back(oid_node(p));
   }
   return make_ext(oids::kExtendedKeyUsage, false, DerNode::sequence(std::move(fields)));
}

ExtSpec ext_subject_alt_dns(const std::vector<std::string>& names) {
   std::vector<DerNode> fields;
   for(const auto& n : names) {
      fields.push_back(ia5(2, n));
   }
   return make_ext(oids::kSubjectAltName, false, DerNode::sequence(std::move(fields)));
}

ExtSpec ext_crl_distribution_point(const std::string& uri) {
   const auto full_name = DerNode::make_constructed(TagClass::ContextSpecific, 0, {ia5(6, uri)});
   const auto dp_name = DerNode::make_constructed(TagClass::ContextSpecific, 0, {full_name});
   return make_ext(oids::kCrlDistributionPoints, false, DerNode::sequence({DerNode::sequence({dp_name})}));
}

ExtSpec ext_authority_key_id(const Bytes& key_id) {
   return make_ext(oids::kAuthorityKeyIdentifier, false,
                   DerNode::sequence({DerNode::primitive(TagClass::ContextSpecific, 0, key_id)}));
}

ExtSpec ext_subject_key_id(const Bytes& key_id) {
   return make_ext(oids::kSubjectKeyIdentifier, false, DerNode::primitive(tag::kOctetString, key_id));
}

ExtSpec ext_ns_cert_type(const std::vector<x509::NsCertTypeBit>& bits) {
   std::vector<std::size_t> set;
   for(const auto b : bits) {
      set.push_back(static_cast<std::size_t>(b));
   }
   return make_ext(oids::kNsCertType, false, DerNode::primitive(tag::kBitString, der::encode_named_bits(set)));
}

ExtSpec ext_ns_comment(const std::string& text) {
   return make_ext(oids::kNsComment, false, DerNode::primitive(tag::kIa5String, Bytes(text.begin(), text.end())));
}

std::vector<AttrSpec> ca_name() {
   return {{oids::kDomainComponent, tag::kIa5String, "org"},
           {oids::kDomainComponent, tag::kIa5String, "example"},
           {oids::kOrganization, tag::kPrintableString, "Grid"},
           {oids::kCommonName, tag::kPrintableString, "Grid Test CA"}};
}

CertSpec compliant_ca() {
   CertSpec s;
   s.serial = der::Integer::from_u64(0x1001);
   s.issuer = ca_name();
   s.subject = ca_name();
   s.rsa_modulus = make_modulus(2048, 1);
   s.extensions = {
      ext_basic_constraints(true, true),
      ext_key_usage({x509::KeyUsageBit::KeyCertSign, x509::KeyUsageBit::CrlSign}, true),
      ext_subject_key_id(filler(20, 0x11)),
   };
   return s;
}

CertSpec compliant_host() {
   auto s = end_entity_base("host.example.org", 2, {oids::kServerAuth, oids::kClientAuth});
   s.extensions.push_back(ext_subject_alt_dns({"host.example.org"}));
   return s;
}

CertSpec compliant_person() {
   return end_entity_base("Alice Example", 3, {oids::kClientAuth});
}

CertSpec compliant_robot() {
   return end_entity_base("Robot - build service", 4, {oids::kClientAuth});
}

CrlSpec compliant_crl() {
   CrlSpec s;
   s.issuer = ca_name();
   s.revoked_serials = {0x2001, 0x2002};
   return s;
}

Bytes weak_modulus() {
   return make_modulus(2048, 0xdeb1a);
}

const std::map<std::string, CertMutation>& cert_mutations() {
   using KU = x509::KeyUsageBit;
   static const std::map<std::string, CertMutation> table = {
      {"GCP-2.1", [](CertSpec& s) { s.version = 1; }},
      {"EXTRA-SERIAL", [](CertSpec& s) { s.serial = der::Integer{}; }},
      {"EXTRA-VALIDITY", [](CertSpec& s) { std::swap(s.not_before, s.not_after); }},
      {"EXTRA-SIGALG-MATCH", [](CertSpec& s) { s.tbs_sig_alg = oids::kSha1WithRsa; }},
      {"GCP-2.2", [](CertSpec& s) { s.sig_alg = s.tbs_sig_alg = oids::kMd5WithRsa; }},
      {"GCP-2.3", [](CertSpec& s) { set_cn(s, tag::kBmpString, "Grid Test CA"); }},
      {"GCP-2.4.1", [](CertSpec& s) { s.set_extension(ext_basic_constraints(true, false)); }},
      {"GCP-2.4.1-CA", [](CertSpec& s) { s.set_extension(ext_basic_constraints(false, true)); }},
      {"GCP-2.4.2", [](CertSpec& s) { s.set_extension(ext_key_usage({KU::KeyCertSign}, true)); }},
      {"GCP-2.4.2-CRIT", [](CertSpec& s) { s.set_extension(ext_key_usage({KU::KeyCertSign, KU::CrlSign}, false)); }},
      {"GCP-2.4.3", [](CertSpec& s) { s.remove_extension(oids::kSubjectKeyIdentifier); }},
      {"GCP-2.4.4", [](CertSpec& s) { s.set_extension(ext_ns_cert_type({x509::NsCertTypeBit::SslCa})); }},
      {"GCP-3.1", [](CertSpec& s) { s.sig_alg = s.tbs_sig_alg = oids::kMd5WithRsa; }},
      {"GCP-3.2", [](CertSpec& s) {
          for(auto& a : s.subject) {
             if(a.type == oids::kCommonName) {
                a.string_tag = tag::kBmpString;
             }
          }
       }},
      {"GCP-3.3.1", [](CertSpec& s) { s.set_extension(ext_basic_constraints(true, true)); }},
      {"GCP-3.3.2", [](CertSpec& s) { s.set_extension(ext_key_usage({KU::KeyEncipherment}, true)); }},
      {"GCP-3.3.2-CRIT",
       [](CertSpec& s) { s.set_extension(ext_key_usage({KU::DigitalSignature, KU::KeyEncipherment}, false)); }},
      {"GCP-3.3.2-NOCA",
       [](CertSpec& s) { s.set_extension(ext_key_usage({KU::DigitalSignature, KU::KeyCertSign}, true)); }},
      {"GCP-3.3.3", [](CertSpec& s) { s.remove_extension(oids::kExtendedKeyUsage); }},
      {"GCP-3.3.4", [](CertSpec& s) { s.remove_extension(oids::kCrlDistributionPoints); }},
      {"GCP-3.3.5", [](CertSpec& s) { s.remove_extension(oids::kAuthorityKeyIdentifier); }},
      {"GCP-3.3.9", [](CertSpec& s) { s.set_extension(ext_ns_comment("legacy comment")); }},
      {"GCP-3.2-HOST-CN",
       [](CertSpec& s) { s.subject.push_back({oids::kCommonName, tag::kPrintableString, "www.example.org"}); }},
      {"GCP-3.2-HOST-FQDN", [](CertSpec& s) { set_cn(s, tag::kPrintableString, "not a host name"); }},
      {"GCP-3.3.6-HOST-SAN", [](CertSpec& s) { s.remove_extension(oids::kSubjectAltName); }},
      {"GCP-3.3.3-HOST-EKU", [](CertSpec& s) { s.set_extension(ext_extended_key_usage({oids::kClientAuth})); }},
      {"GCP-3.2-ROBOT", [](CertSpec& s) { set_cn(s, tag::kPrintableString, "Build Service"); }},
      {"RAT-MD5", [](CertSpec& s) { s.sig_alg = s.tbs_sig_alg = oids::kMd5WithRsa; }},
      {"RAT-RSA", [](CertSpec& s) { s.rsa_exponent = der::Integer::from_u64(3); }},
      {"RAT-RSA-SIZE", [](CertSpec& s) { s.rsa_modulus = make_modulus(1536, 77); }},
      {"RAT-DEBIAN", [](CertSpec& s) { s.rsa_modulus = weak_modulus(); }},
   };
   return table;
}

const std::map<std::string, CrlMutation>& crl_mutations() {
   static const std::map<std::string, CrlMutation> table = {
      {"CRL-MD5", [](CrlSpec& s) { s.sig_alg = s.tbs_sig_alg = oids::kMd5WithRsa; }},
      {"CRL-NEXTUPDATE", [](CrlSpec& s) { s.next_update.reset(); }},
      {"CRL-VERSION", [](CrlSpec& s) { s.version.reset(); }},
   };
   return table;
}

CertSpec baseline_for_suite(std::string_view suite) {
   if(suite == "host") {
      return compliant_host();
   }
   if(suite == "person") {
      return compliant_person();
   }
   if(suite == "robot") {
      return compliant_robot();
   }
   return compliant_ca();
}

rules::SubjectClass class_for_suite(std::string_view suite) {
   if(suite == "ca") {
      return rules::SubjectClass::CA;
   }
   if(suite == "host") {
      return rules::SubjectClass::Host;
   }
   if(suite == "person") {
      return rules::SubjectClass::Person;
   }
   if(suite == "robot") {
      return rules::SubjectClass::Robot;
   }
   if(suite == "crl") {
      return rules::SubjectClass::Crl;
   }
   return rules::SubjectClass::Certificate;
}

rules::Subject make_subject(std::string id, const Bytes& der, rules::SubjectClass cls) {
   rules::Subject s;
   s.id = std::move(id);
   s.declared = cls;
   s.object = x509::parse_certificate(der);
   return s;
}

rules::Subject make_crl_subject(std::string id, const Bytes& der) {
   rules::Subject s;
   s.id = std::move(id);
   s.declared = rules::SubjectClass::Crl;
   s.object = x509::parse_crl(der);
   return s;
}

std::string write_weak_key_blacklist() {
   auto spec = compliant_ca();
   spec.rsa_modulus = weak_modulus();
   const auto fp = x509::spki_fingerprint(x509::parse_certificate(build_certificate(spec)));
   const auto path =
      std::filesystem::temp_directory_path() / ("certlint_weak_keys_" + std::to_string(::getpid()) + ".txt");
   std::ofstream out(path);
   out << "# SHA-1 of DER SubjectPublicKeyInfo, lowercase hex\n"
       << "0000000000000000000000000000000000000001\n"
       << fp << "\n"
       << "\n"
       << "ffffffffffffffffffffffffffffffffffffffff\n";
   return path.string();
}

profile::RuleCatalog seeded_catalog() {
   profile::CatalogConfig cfg;
   cfg.blacklist_path = write_weak_key_blacklist();
   return profile::build_catalog(cfg);
}

}  // namespace certlint::testing
