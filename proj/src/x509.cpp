#include <certlint/x509.hpp>

#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace certlint::x509 {

namespace {

using der::DerNode;
using der::TagClass;
namespace tag = der::tag;

// Structural mismatch inside a parse function; converted to the
// caller-specific error code at the boundary.
struct ShapeError {
   std::string what;
};

[[noreturn]] void shape(const std::string& what) {
   throw ShapeError{what};
}

const DerNode& expect(const DerNode& node, std::uint32_t universal_tag, bool constructed, std::string_view what) {
   if(!node.is_universal(universal_tag) || node.constructed != constructed) {
      shape(fmt::format("{} has unexpected tag", what));
   }
   return node;
}

Oid parse_algorithm_id(const DerNode& node, std::string_view what) {
   expect(node, tag::kSequence, true, what);
   if(node.children.empty()) {
      shape(fmt::format("{} is empty", what));
   }
   expect(node.children[0], tag::kOid, false, what);
   return der::decode_oid(node.children[0].content);
}

bool is_time(const DerNode& node) {
   return node.tag_class == TagClass::Universal && !node.constructed &&
          (node.tag_number == tag::kUtcTime || node.tag_number == tag::kGeneralizedTime);
}

std::string ia5_text(const DerNode& node) {
   return std::string(node.content.begin(), node.content.end());
}

GeneralNames parse_general_names_children(const std::vector<DerNode>& names) {
   GeneralNames out;
   for(const auto& gn : names) {
      if(gn.tag_class != TagClass::ContextSpecific) {
         shape("GeneralName is not context tagged");
      }
      switch(gn.tag_number) {
         case 1: out.emails.push_back(ia5_text(gn)); break;
         case 2: out.dns_names.push_back(ia5_text(gn)); break;
         case 6: out.uris.push_back(ia5_text(gn)); break;
         default: ++out.other_count; break;
      }
   }
   return out;
}

ExtensionPayload parse_payload(const Oid& oid, const Bytes& raw) {
   if(oid == oids::kKeyUsage) {
      return KeyUsage{der::decode_bit_string(der::parse_exact(raw))};
   }
   if(oid == oids::kNsCertType) {
      return NsCertType{der::decode_bit_string(der::parse_exact(raw))};
   }
   if(oid == oids::kBasicConstraints) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kSequence, true, "basicConstraints");
      BasicConstraints bc;
      std::size_t i = 0;
      if(i < node.children.size() && node.children[i].is_universal(tag::kBoolean)) {
         bc.ca = der::decode_boolean(node.children[i++]);
      }
      if(i < node.children.size()) {
         expect(node.children[i], tag::kInteger, false, "pathLenConstraint");
         bc.path_len = der::decode_integer(node.children[i++].content).to_u64();
      }
      if(i != node.children.size()) {
         shape("basicConstraints has extra elements");
      }
      return bc;
   }
   if(oid == oids::kExtendedKeyUsage) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kSequence, true, "extendedKeyUsage");
      ExtendedKeyUsage eku;
      for(const auto& c : node.children) {
         eku.purposes.push_back(der::decode_oid(expect(c, tag::kOid, false, "KeyPurposeId").content));
      }
      return eku;
   }
   if(oid == oids::kSubjectAltName) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kSequence, true, "subjectAltName");
      return parse_general_names_children(node.children);
   }
   if(oid == oids::kCrlDistributionPoints) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kSequence, true, "cRLDistributionPoints");
      CrlDistributionPoints out;
      for(const auto& dp : node.children) {
         expect(dp, tag::kSequence, true, "DistributionPoint");
         for(const auto& field : dp.children) {
            if(!field.is_context(0)) {
               continue;
            }
            for(const auto& dpn : field.children) {
               if(dpn.is_context(0)) {
                  const auto names = parse_general_names_children(dpn.children);
                  out.uris.insert(out.uris.end(), names.uris.begin(), names.uris.end());
               }
            }
         }
      }
      return out;
   }
   if(oid == oids::kAuthorityKeyIdentifier) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kSequence, true, "authorityKeyIdentifier");
      AuthorityKeyIdentifier aki;
      for(const auto& c : node.children) {
         if(c.is_context(0) && !c.constructed) {
            aki.key_id = c.content;
         } else if(c.is_context(1) || c.is_context(2)) {
            aki.has_issuer_and_serial = true;
         }
      }
      return aki;
   }
   if(oid == oids::kSubjectKeyIdentifier) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kOctetString, false, "subjectKeyIdentifier");
      return SubjectKeyIdentifier{node.content};
   }
   if(oid == oids::kCertificatePolicies) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kSequence, true, "certificatePolicies");
      CertificatePolicies out;
      for(const auto& info : node.children) {
         expect(info, tag::kSequence, true, "PolicyInformation");
         if(info.children.empty()) {
            shape("PolicyInformation is empty");
         }
         out.policies.push_back(der::decode_oid(expect(info.children[0], tag::kOid, false, "policyIdentifier").content));
      }
      return out;
   }
   if(oid == oids::kAuthorityInfoAccess) {
      const auto node = der::parse_exact(raw);
      expect(node, tag::kSequence, true, "authorityInfoAccess");
      AuthorityInfoAccess out;
      for(const auto& ad : node.children) {
         expect(ad, tag::kSequence, true, "AccessDescription");
         if(ad.children.size() != 2) {
            shape("AccessDescription must have two elements");
         }
         const auto method = der::decode_oid(expect(ad.children[0], tag::kOid, false, "accessMethod").content);
         std::string location = ad.children[1].is_context(6) ? ia5_text(ad.children[1]) : std::string();
         out.descriptions.emplace_back(method, std::move(location));
      }
      return out;
   }
   return std::monostate{};
}

ExtensionEntry parse_extension(const DerNode& node, std::vector<std::string>& warnings) {
   expect(node, tag::kSequence, true, "Extension");
   if(node.children.size() < 2 || node.children.size() > 3) {
      shape("Extension must have two or three elements");
   }
   ExtensionEntry ext;
   ext.oid = der::decode_oid(expect(node.children[0], tag::kOid, false, "extnID").content);
   ext.name = oid_display(ext.oid);
   std::size_t i = 1;
   if(node.children.size() == 3) {
      ext.critical = der::decode_boolean(expect(node.children[1], tag::kBoolean, false, "critical"));
      if(!ext.critical) {
         warnings.push_back(fmt::format("extension {} encodes the DEFAULT critical=FALSE explicitly", ext.name));
      }
      i = 2;
   }
   ext.raw_value = expect(node.children[i], tag::kOctetString, false, "extnValue").content;
   try {
      ext.parsed = parse_payload(ext.oid, ext.raw_value);
   } catch(const der::Error& e) {
      warnings.push_back(fmt::format("extension {} could not be decoded: {}", ext.name, e.what()));
   } catch(const ShapeError& e) {
      warnings.push_back(fmt::format("extension {} could not be decoded: {}", ext.name, e.what));
   }
   return ext;
}

PublicKeyInfo parse_spki(const DerNode& node, std::vector<std::string>& warnings) {
   expect(node, tag::kSequence, true, "SubjectPublicKeyInfo");
   if(node.children.size() != 2) {
      shape("SubjectPublicKeyInfo must have two elements");
   }
   PublicKeyInfo key;
   key.algorithm = parse_algorithm_id(node.children[0], "SubjectPublicKeyInfo.algorithm");
   key.spki_der = der::encode(node);
   const auto bits = der::decode_bit_string(expect(node.children[1], tag::kBitString, false, "subjectPublicKey"));
   if(key.algorithm == oids::kRsaEncryption) {
      try {
         const auto rsa = der::parse_exact(bits.bytes);
         if(!rsa.is_universal(tag::kSequence) || rsa.children.size() != 2 ||
            !rsa.children[0].is_universal(tag::kInteger) || !rsa.children[1].is_universal(tag::kInteger)) {
            throw der::Error(der::ErrorCode::WrongType, "RSAPublicKey is not SEQUENCE { INTEGER, INTEGER }");
         }
         key.rsa_modulus = der::decode_integer(rsa.children[0].content);
         key.rsa_exponent = der::decode_integer(rsa.children[1].content);
         key.modulus_bits = key.rsa_modulus->bit_length();
      } catch(const der::Error& e) {
         warnings.push_back(fmt::format("RSA public key could not be decoded: {}", e.what()));
      }
   }
   return key;
}

Certificate parse_certificate_impl(ByteView input) {
   Certificate cert;
   auto& warnings = cert.warnings;
   const auto parsed = der::parse(input);
   const DerNode& top = parsed.node;
   if(parsed.consumed != input.size()) {
      warnings.push_back(fmt::format("{} bytes of trailing data after the certificate", input.size() - parsed.consumed));
   }
   cert.raw_der.assign(input.begin(), input.begin() + static_cast<std::ptrdiff_t>(parsed.consumed));

   expect(top, tag::kSequence, true, "Certificate");
   if(top.children.size() != 3) {
      shape("Certificate must have three elements");
   }
   const DerNode& tbs = expect(top.children[0], tag::kSequence, true, "TBSCertificate");
   cert.sig_alg_oid = parse_algorithm_id(top.children[1], "signatureAlgorithm");
   cert.sig_alg_name = oid_display(cert.sig_alg_oid);
   expect(top.children[2], tag::kBitString, false, "signatureValue");

   const auto& f = tbs.children;
   std::size_t i = 0;
   auto next = [&](std::string_view what) -> const DerNode& {
      if(i >= f.size()) {
         shape(fmt::format("TBSCertificate ends before {}", what));
      }
      return f[i++];
   };

   if(!f.empty() && f[0].is_context(0) && f[0].constructed) {
      const auto& wrapper = next("version");
      if(wrapper.children.size() != 1) {
         shape("version wrapper must hold one INTEGER");
      }
      const auto v = der::decode_integer(expect(wrapper.children[0], tag::kInteger, false, "version").content);
      const auto small = v.to_u64();
      if(!small || *small > 2) {
         warnings.push_back(fmt::format("version value {} is outside 0..2", v.to_decimal()));
      }
      cert.version = small && *small <= 1000 ? static_cast<int>(*small) : -1;
      if(cert.version == 0) {
         warnings.push_back("version v1 encoded explicitly instead of being omitted");
      }
   }

   const auto& serial = expect(next("serialNumber"), tag::kInteger, false, "serialNumber");
   cert.serial = der::decode_integer(serial.content);
   if(!der::is_minimal_integer(serial.content)) {
      warnings.push_back("serialNumber is not minimally encoded");
   }
   if(cert.serial.negative) {
      warnings.push_back("serialNumber is negative");
   }

   cert.tbs_sig_alg_oid = parse_algorithm_id(next("signature"), "TBSCertificate.signature");
   if(cert.tbs_sig_alg_oid != cert.sig_alg_oid) {
      warnings.push_back(fmt::format("inner signature algorithm {} differs from outer {}",
                                     oid_display(cert.tbs_sig_alg_oid), cert.sig_alg_name));
   }
   cert.issuer = parse_name(next("issuer"));

   const auto& validity = expect(next("validity"), tag::kSequence, true, "Validity");
   if(validity.children.size() != 2) {
      shape("Validity must have two elements");
   }
   cert.not_before = der::decode_time(validity.children[0]);
   cert.not_after = der::decode_time(validity.children[1]);
   if(cert.not_before > cert.not_after) {
      warnings.push_back(
         fmt::format("notBefore {} is after notAfter {}", cert.not_before.iso8601(), cert.not_after.iso8601()));
   }

   cert.subject = parse_name(next("subject"));
   cert.public_key = parse_spki(next("subjectPublicKeyInfo"), warnings);

   bool saw_extensions = false;
   while(i < f.size()) {
      const auto& opt = f[i++];
      if(opt.is_context(1) || opt.is_context(2)) {
         continue;  // issuer/subject unique identifiers
      }
      if(opt.is_context(3) && opt.constructed && !saw_extensions) {
         saw_extensions = true;
         if(opt.children.size() != 1) {
            shape("extensions wrapper must hold one SEQUENCE");
         }
         const auto& list = expect(opt.children[0], tag::kSequence, true, "Extensions");
         std::set<Oid> seen;
         for(const auto& e : list.children) {
            auto ext = parse_extension(e, warnings);
            if(!seen.insert(ext.oid).second) {
               warnings.push_back(fmt::format("duplicate extension {}", ext.name));
            }
            cert.extensions.push_back(std::move(ext));
         }
         continue;
      }
      shape("unexpected element at the end of TBSCertificate");
   }
   if(saw_extensions && cert.version != 2) {
      warnings.push_back(fmt::format("extensions present in a version {} certificate", cert.version + 1));
   }
   return cert;
}

Crl parse_crl_impl(ByteView input) {
   Crl crl;
   const auto parsed = der::parse(input);
   const DerNode& top = parsed.node;
   if(parsed.consumed != input.size()) {
      crl.warnings.push_back(fmt::format("{} bytes of trailing data after the CRL", input.size() - parsed.consumed));
   }
   crl.raw_der.assign(input.begin(), input.begin() + static_cast<std::ptrdiff_t>(parsed.consumed));
   expect(top, tag::kSequence, true, "CertificateList");
   if(top.children.size() != 3) {
      shape("CertificateList must have three elements");
   }
   const auto& tbs = expect(top.children[0], tag::kSequence, true, "TBSCertList");
   crl.sig_alg_oid = parse_algorithm_id(top.children[1], "signatureAlgorithm");
   crl.sig_alg_name = oid_display(crl.sig_alg_oid);
   expect(top.children[2], tag::kBitString, false, "signatureValue");

   const auto& f = tbs.children;
   std::size_t i = 0;
   if(i < f.size() && f[i].is_universal(tag::kInteger)) {
      const auto v = der::decode_integer(f[i++].content).to_u64();
      crl.version = v && *v <= 1 ? static_cast<int>(*v) : -1;
   }
   if(i >= f.size()) {
      shape("TBSCertList ends before signature");
   }
   crl.tbs_sig_alg_oid = parse_algorithm_id(f[i++], "TBSCertList.signature");
   if(i >= f.size()) {
      shape("TBSCertList ends before issuer");
   }
   crl.issuer = parse_name(f[i++]);
   if(i >= f.size() || !is_time(f[i])) {
      shape("thisUpdate is missing or not a time");
   }
   crl.this_update = der::decode_time(f[i++]);
   if(i < f.size() && is_time(f[i])) {
      crl.next_update = der::decode_time(f[i++]);
   }
   if(i < f.size() && f[i].is_universal(tag::kSequence)) {
      crl.revoked_count = f[i++].children.size();
   }
   if(i < f.size() && f[i].is_context(0)) {
      ++i;
   }
   if(i != f.size()) {
      shape("unexpected element at the end of TBSCertList");
   }
   if(crl.tbs_sig_alg_oid != crl.sig_alg_oid) {
      crl.warnings.push_back("inner signature algorithm differs from outer");
   }
   return crl;
}

template <typename Fn>
auto guarded(Fn&& fn, Error::Code code, std::string_view kind) {
   try {
      return fn();
   } catch(const ShapeError& e) {
      throw Error(code, fmt::format("not a {}: {}", kind, e.what));
   } catch(const der::Error& e) {
      throw Error(code, fmt::format("not a {}: {}", kind, e.what()));
   }
}

}  // namespace

Certificate parse_certificate(ByteView der) {
   return guarded([&] { return parse_certificate_impl(der); }, Error::Code::NotACertificate, "certificate");
}

Crl parse_crl(ByteView der) {
   return guarded([&] { return parse_crl_impl(der); }, Error::Code::NotACrl, "CRL");
}

const ExtensionEntry* Certificate::find_extension(const Oid& oid) const noexcept {
   for(const auto& e : extensions) {
      if(e.oid == oid) {
         return &e;
      }
   }
   return nullptr;
}

std::map<std::string, ExtensionEntry> extensions_by_name(const Certificate& cert) {
   std::map<std::string, ExtensionEntry> out;
   for(const auto& e : cert.extensions) {
      out.try_emplace(e.name, e);
   }
   return out;
}

std::string sha1_hex(ByteView bytes) {
   unsigned char digest[EVP_MAX_MD_SIZE];
   unsigned int len = 0;
   if(EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
      throw std::runtime_error("SHA-1 digest failed");
   }
   return der::hex(ByteView(digest, len));
}

std::string spki_fingerprint(const Certificate& cert) {
   return sha1_hex(cert.public_key.spki_der);
}

}  // namespace certlint::x509
