#include <certlint/profile.hpp>

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

namespace fx = certlint::testing;

using namespace certlint;
using namespace certlint::profile;
using certlint::testing::AttrSpec;
namespace oids = x509::oids;

namespace {

std::set<std::string> ids_of(const rules::RuleSuite& suite) {
   std::set<std::string> out;
   for(const auto& r : suite.rules) {
      out.insert(r->id);
   }
   return out;
}

x509::Certificate cert_of(const fx::CertSpec& spec) {
   return x509::parse_certificate(fx::build_certificate(spec));
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
   const auto p = std::filesystem::temp_directory_path() / ("certlint_profile_" + name);
   std::ofstream(p) << content;
   return p;
}

}  // namespace

TEST(Catalog, ProfileRulesPresent) {
   const auto c = build_catalog({});
   const auto ca = ids_of(c.ca_suite);
   for(const char* id : {"GCP-2.1", "GCP-2.2", "GCP-2.3", "GCP-2.4.1", "GCP-2.4.4", "EXTRA-SERIAL"}) {
      EXPECT_TRUE(ca.contains(id)) << id;
   }
   const auto person = ids_of(c.person_suite);
   for(const char* id : {"GCP-2.1", "GCP-3.2", "GCP-3.3.1", "GCP-3.3.2", "GCP-3.3.3", "EXTRA-SERIAL"}) {
      EXPECT_TRUE(person.contains(id)) << id;
   }
   EXPECT_EQ(ids_of(c.rat_suite), (std::set<std::string>{"RAT-MD5", "RAT-RSA", "RAT-RSA-SIZE", "RAT-DEBIAN"}));
   EXPECT_TRUE(ids_of(c.crl_suite).contains("CRL-MD5"));
   std::set<std::string> corpus;
   for(const auto& r : c.corpus_rules) {
      corpus.insert(r.id);
   }
   EXPECT_EQ(corpus, (std::set<std::string>{"CORPUS-SERIAL-UNIQ", "CORPUS-SUBJECT-UNIQ"}));
}

TEST(Catalog, LevelsOfAnchoredRules) {
   const auto c = build_catalog({});
   std::map<std::string, rules::Level> levels;
   for(const auto& r : c.all_rules()) {
      levels[r->id] = r->level;
   }
   EXPECT_EQ(levels.at("GCP-2.1"), rules::Level::Must);
   EXPECT_EQ(levels.at("GCP-2.2"), rules::Level::MustNot);
   EXPECT_EQ(levels.at("GCP-2.3"), rules::Level::Should);
   EXPECT_EQ(levels.at("GCP-2.4.1"), rules::Level::Should);
   EXPECT_EQ(levels.at("GCP-2.4.4"), rules::Level::ShouldNot);
   EXPECT_EQ(levels.at("GCP-3.2"), rules::Level::Should);
   EXPECT_EQ(levels.at("EXTRA-SERIAL"), rules::Level::ShouldNot);
   EXPECT_EQ(levels.at("RAT-MD5"), rules::Level::MustNot);
   EXPECT_EQ(levels.at("RAT-RSA"), rules::Level::Must);
   EXPECT_EQ(levels.at("RAT-DEBIAN"), rules::Level::MustNot);
   EXPECT_EQ(levels.at("CRL-MD5"), rules::Level::MustNot);
}

TEST(Catalog, RuleIdsUniqueAndShared) {
   const auto c = build_catalog({});
   std::set<std::string> seen;
   for(const auto& r : c.all_rules()) {
      EXPECT_TRUE(seen.insert(r->id).second) << "duplicate rule object for " << r->id;
   }
   std::set<const rules::Rule*> person_objects;
   for(const auto& r : c.person_suite.rules) {
      person_objects.insert(r.get());
   }
   std::size_t shared = 0;
   for(const auto& r : c.host_suite.rules) {
      if(r->applies_to == rules::AppliesTo::AnyEndEntity || r->applies_to == rules::AppliesTo::Any) {
         EXPECT_TRUE(person_objects.contains(r.get())) << r->id;
         ++shared;
      }
   }
   EXPECT_GT(shared, 10u);
   EXPECT_EQ(c.host_only_rule_count(), 4u);
   for(const auto& r : c.host_suite.rules) {
      if(!person_objects.contains(r.get())) {
         EXPECT_EQ(r->applies_to, rules::AppliesTo::Host) << r->id;
      }
   }
}

TEST(Catalog, ProvisionLedger) {
   const auto c = build_catalog({});
   std::map<std::string, ProvisionStatus> status;
   for(const auto& e : c.provision_ledger) {
      EXPECT_TRUE(status.emplace(e.id, e.status).second) << "ledger lists " << e.id << " twice";
   }
   for(const auto& r : c.all_rules()) {
      ASSERT_TRUE(status.contains(r->id)) << r->id;
      EXPECT_EQ(status.at(r->id), ProvisionStatus::Implemented);
   }
   EXPECT_EQ(status.at("CORPUS-SERIAL-UNIQ"), ProvisionStatus::NeedsCorpus);
   EXPECT_EQ(status.at("CORPUS-SUBJECT-UNIQ"), ProvisionStatus::NeedsCorpus);
   EXPECT_EQ(status.at("GCP-3.3.4-FETCH"), ProvisionStatus::NeedsOnline);
   EXPECT_EQ(status.at("GCP-3.3.13"), ProvisionStatus::NeedsManual);
   for(const auto& e : c.provision_ledger) {
      if(e.id == "GCP-3.2-HOST-CN" || e.id == "GCP-3.3.3-HOST-EKU") {
         EXPECT_TRUE(e.reconstructed);
      }
      if(e.id == "GCP-2.1") {
         EXPECT_FALSE(e.reconstructed);
      }
   }
}

TEST(Encoding, Policy) {
   const auto policy = EncodingPolicy::defaults();
   const auto ok = x509::parse_name(fx::build_name(fx::ca_name()));
   EXPECT_TRUE(check_name_encoding(ok, policy).empty());

   const auto bmp = x509::parse_name(fx::build_name({{oids::kCommonName, der::tag::kBmpString, "alice"}}));
   const auto findings = check_name_encoding(bmp, policy);
   ASSERT_EQ(findings.size(), 1u);
   EXPECT_NE(findings[0].find("CN"), std::string::npos);
   EXPECT_NE(findings[0].find("bmpString"), std::string::npos);

   const auto dc = x509::parse_name(fx::build_name({{oids::kDomainComponent, der::tag::kPrintableString, "org"}}));
   EXPECT_EQ(check_name_encoding(dc, policy).size(), 1u);

   EXPECT_TRUE(check_name_encoding(x509::DistinguishedName{}, policy).empty());
}

TEST(NsCertType, Consistency) {
   auto ca = fx::compliant_ca();
   ca.extensions.push_back(fx::ext_ns_cert_type({x509::NsCertTypeBit::SslCa}));
   EXPECT_TRUE(check_nscerttype_consistency(cert_of(ca)).consistent);

   ca.set_extension(fx::ext_key_usage({x509::KeyUsageBit::CrlSign}, true));
   const auto bad = check_nscerttype_consistency(cert_of(ca));
   EXPECT_FALSE(bad.consistent);
   EXPECT_NE(bad.detail.find("keyCertSign"), std::string::npos);

   ca.remove_extension(oids::kKeyUsage);
   const auto missing = check_nscerttype_consistency(cert_of(ca));
   EXPECT_FALSE(missing.consistent);
   EXPECT_EQ(missing.detail, "keyUsage missing");

   auto host = fx::compliant_host();
   host.extensions.push_back(
      fx::ext_ns_cert_type({x509::NsCertTypeBit::SslServer, x509::NsCertTypeBit::SslClient}));
   EXPECT_TRUE(check_nscerttype_consistency(cert_of(host)).consistent);
}

TEST(Rsa, Parameters) {
   const CatalogConfig cfg;
   EXPECT_TRUE(check_rsa_parameters(cert_of(fx::compliant_ca()).public_key, cfg).empty());

   auto small = fx::compliant_ca();
   small.rsa_modulus = fx::make_modulus(512, 9);
   const auto key = cert_of(small).public_key;
   // 512 bits: the top byte of a 64-byte modulus has its high bit set
   ASSERT_EQ(small.rsa_modulus.size(), 64u);
   ASSERT_TRUE(small.rsa_modulus[0] & 0x80);
   EXPECT_EQ(key.modulus_bits, 512u);
   EXPECT_EQ(check_rsa_parameters(key, cfg), std::vector<std::string>{"modulus 512 < 1024"});

   auto e3 = fx::compliant_ca();
   e3.rsa_exponent = der::Integer::from_u64(3);
   EXPECT_EQ(check_rsa_parameters(cert_of(e3).public_key, cfg), std::vector<std::string>{"exponent 3 < 65537"});

   auto even = fx::compliant_ca();
   even.rsa_exponent = der::Integer::from_u64(65538);
   EXPECT_EQ(check_rsa_parameters(cert_of(even).public_key, cfg), std::vector<std::string>{"exponent 65538 is even"});

   x509::PublicKeyInfo ec;
   ec.algorithm = oids::kEcPublicKey;
   std::string note;
   EXPECT_TRUE(check_rsa_parameters(ec, cfg, &note).empty());
   EXPECT_FALSE(note.empty());
}

TEST(Blacklist, LoadAndCheck) {
   const std::string a(40, 'a');
   const std::string b(40, 'b');
   const std::string c = "0123456789abcdef0123456789abcdef01234567";
   const auto path = temp_file("bl.txt", "# sha1 of DER SubjectPublicKeyInfo\n" + a + "\n\n" + b + "\n" + c + "\n");
   const auto bl = load_blacklist(path);
   EXPECT_TRUE(bl.configured);
   EXPECT_EQ(bl.fingerprints.size(), 3u);
   EXPECT_TRUE(check_blacklist(c, bl));
   EXPECT_FALSE(check_blacklist(std::string(40, 'f'), bl));
   EXPECT_FALSE(check_blacklist(a, Blacklist{}));

   EXPECT_THROW(load_blacklist(temp_file("bad.txt", "nothex\n")), BlacklistUnreadable);
   EXPECT_THROW(load_blacklist("/nonexistent/blacklist"), BlacklistUnreadable);

   CatalogConfig cfg;
   cfg.blacklist_path = "/nonexistent/blacklist";
   EXPECT_THROW(build_catalog(cfg), BlacklistUnreadable);
}

TEST(Blacklist, DebianRuleSkipsWithoutData) {
   const auto catalog = build_catalog({});
   const std::vector<rules::Subject> subjects{
      fx::make_subject("c", fx::build_certificate(fx::compliant_ca()), rules::SubjectClass::Certificate)};
   const auto r = rules::run_suite(catalog.rat_suite, subjects);
   bool found = false;
   for(const auto& v : r.verdicts) {
      if(v.rule_id == "RAT-DEBIAN") {
         found = true;
         EXPECT_TRUE(v.passed);
         EXPECT_TRUE(v.skipped);
      }
   }
   EXPECT_TRUE(found);
}

TEST(Config, ValidateAndLoad) {
   CatalogConfig cfg;
   EXPECT_NO_THROW(cfg.validate());
   cfg.min_modulus_bits = 4096;
   EXPECT_THROW(cfg.validate(), ConfigError);
   cfg = {};
   cfg.min_exponent = 4;
   EXPECT_THROW(cfg.validate(), ConfigError);
   cfg = {};
   cfg.robot_cn_pattern = "(";
   EXPECT_THROW(cfg.validate(), ConfigError);

   const auto loaded = load_config(
      temp_file("cfg.txt", "# thresholds\nmin_modulus_bits = 2048\nrecommended_modulus_bits=4096\nrobot_cn_pattern=^Bot\n"));
   EXPECT_EQ(loaded.min_modulus_bits, 2048u);
   EXPECT_EQ(loaded.recommended_modulus_bits, 4096u);
   EXPECT_EQ(loaded.robot_cn_pattern, "^Bot");
   EXPECT_EQ(loaded.min_exponent, 65537u);

   EXPECT_THROW(load_config(temp_file("cfg2.txt", "colour=blue\n")), ConfigError);
   EXPECT_THROW(load_config(temp_file("cfg3.txt", "min_exponent=lots\n")), ConfigError);
   EXPECT_THROW(load_config("/nonexistent/cfg"), ConfigError);
}

TEST(Config, HostPattern) {
   const std::regex re(CatalogConfig{}.host_fqdn_pattern);
   EXPECT_TRUE(std::regex_search("host.example.org", re));
   EXPECT_TRUE(std::regex_search("ldap/host.example.org", re));
   EXPECT_FALSE(std::regex_search("Alice Example", re));
   EXPECT_FALSE(std::regex_search("localhost", re));
}

TEST(Catalog, MonotonicSeverity) {
   const auto catalog = build_catalog({});
   auto failures = [&](const fx::CertSpec& spec) {
      const std::vector<rules::Subject> s{
         fx::make_subject("x", fx::build_certificate(spec), rules::SubjectClass::Host)};
      return rules::run_suite(catalog.host_suite, s).failed;
   };
   auto spec = fx::compliant_host();
   fx::cert_mutations().at("GCP-3.3.5")(spec);
   fx::cert_mutations().at("GCP-3.3.6-HOST-SAN")(spec);
   fx::cert_mutations().at("GCP-3.3.9")(spec);
   const auto three = failures(spec);
   spec.set_extension(fx::compliant_host().extensions.back());
   const auto two = failures(spec);
   EXPECT_EQ(three, 3u);
   EXPECT_LE(two, three);
   EXPECT_EQ(two, 2u);
}
