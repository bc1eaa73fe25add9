#include <certlint/x509.hpp>

#include <algorithm>
#include <array>

#include <fmt/format.h>

namespace certlint::x509 {

Error::Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

namespace oids {
const Oid kCommonName = Oid::from_dotted("2.5.4.3");
const Oid kSurname = Oid::from_dotted("2.5.4.4");
const Oid kSerialNumber = Oid::from_dotted("2.5.4.5");
const Oid kCountry = Oid::from_dotted("2.5.4.6");
const Oid kLocality = Oid::from_dotted("2.5.4.7");
const Oid kState = Oid::from_dotted("2.5.4.8");
const Oid kOrganization = Oid::from_dotted("2.5.4.10");
const Oid kOrganizationalUnit = Oid::from_dotted("2.5.4.11");
const Oid kDomainComponent = Oid::from_dotted("0.9.2342.19200300.100.1.25");
const Oid kUserId = Oid::from_dotted("0.9.2342.19200300.100.1.1");
const Oid kEmailAddress = Oid::from_dotted("1.2.840.113549.1.9.1");

const Oid kRsaEncryption = Oid::from_dotted("1.2.840.113549.1.1.1");
const Oid kMd2WithRsa = Oid::from_dotted("1.2.840.113549.1.1.2");
const Oid kMd5WithRsa = Oid::from_dotted("1.2.840.113549.1.1.4");
const Oid kSha1WithRsa = Oid::from_dotted("1.2.840.113549.1.1.5");
const Oid kSha256WithRsa = Oid::from_dotted("1.2.840.113549.1.1.11");
const Oid kSha384WithRsa = Oid::from_dotted("1.2.840.113549.1.1.12");
const Oid kSha512WithRsa = Oid::from_dotted("1.2.840.113549.1.1.13");
const Oid kEcPublicKey = Oid::from_dotted("1.2.840.10045.2.1");
const Oid kEcdsaWithSha256 = Oid::from_dotted("1.2.840.10045.4.3.2");

const Oid kSubjectKeyIdentifier = Oid::from_dotted("2.5.29.14");
const Oid kKeyUsage = Oid::from_dotted("2.5.29.15");
const Oid kSubjectAltName = Oid::from_dotted("2.5.29.17");
const Oid kBasicConstraints = Oid::from_dotted("2.5.29.19");
const Oid kCrlDistributionPoints = Oid::from_dotted("2.5.29.31");
const Oid kCertificatePolicies = Oid::from_dotted("2.5.29.32");
const Oid kAuthorityKeyIdentifier = Oid::from_dotted("2.5.29.35");
const Oid kExtendedKeyUsage = Oid::from_dotted("2.5.29.37");
const Oid kAuthorityInfoAccess = Oid::from_dotted("1.3.6.1.5.5.7.1.1");
const Oid kNetscapeArc = Oid::from_dotted("2.16.840.1.113730.1");
const Oid kNsCertType = Oid::from_dotted("2.16.840.1.113730.1.1");
const Oid kNsComment = Oid::from_dotted("2.16.840.1.113730.1.13");

const Oid kServerAuth = Oid::from_dotted("1.3.6.1.5.5.7.3.1");
const Oid kClientAuth = Oid::from_dotted("1.3.6.1.5.5.7.3.2");
const Oid kAnyExtendedKeyUsage = Oid::from_dotted("2.5.29.37.0");
const Oid kOcspAccess = Oid::from_dotted("1.3.6.1.5.5.7.48.1");
}  // namespace oids

namespace {

struct NamedOid {
   const char* dotted;
   const char* name;
   const char* long_name;  // alias accepted by attribute_oid, may be null
};

// The DN attribute entries use the short names OpenSSL prints.
constexpr std::array kTable = {
   NamedOid{"2.5.4.3", "CN", "commonName"},
   NamedOid{"2.5.4.4", "SN", "surname"},
   NamedOid{"2.5.4.5", "serialNumber", nullptr},
   NamedOid{"2.5.4.6", "C", "countryName"},
   NamedOid{"2.5.4.7", "L", "localityName"},
   NamedOid{"2.5.4.8", "ST", "stateOrProvinceName"},
   NamedOid{"2.5.4.9", "street", "streetAddress"},
   NamedOid{"2.5.4.10", "O", "organizationName"},
   NamedOid{"2.5.4.11", "OU", "organizationalUnitName"},
   NamedOid{"2.5.4.12", "title", nullptr},
   NamedOid{"2.5.4.42", "GN", "givenName"},
   NamedOid{"0.9.2342.19200300.100.1.25", "DC", "domainComponent"},
   NamedOid{"0.9.2342.19200300.100.1.1", "UID", "userId"},
   NamedOid{"1.2.840.113549.1.9.1", "emailAddress", nullptr},

   NamedOid{"1.2.840.113549.1.1.1", "rsaEncryption", nullptr},
   NamedOid{"1.2.840.113549.1.1.2", "md2WithRSAEncryption", nullptr},
   NamedOid{"1.2.840.113549.1.1.4", "md5WithRSAEncryption", nullptr},
   NamedOid{"1.2.840.113549.1.1.5", "sha1WithRSAEncryption", nullptr},
   NamedOid{"1.2.840.113549.1.1.10", "rsassaPss", nullptr},
   NamedOid{"1.2.840.113549.1.1.11", "sha256WithRSAEncryption", nullptr},
   NamedOid{"1.2.840.113549.1.1.12", "sha384WithRSAEncryption", nullptr},
   NamedOid{"1.2.840.113549.1.1.13", "sha512WithRSAEncryption", nullptr},
   NamedOid{"1.2.840.113549.1.1.14", "sha224WithRSAEncryption", nullptr},
   NamedOid{"1.2.840.10045.2.1", "id-ecPublicKey", nullptr},
   NamedOid{"1.2.840.10045.4.1", "ecdsa-with-SHA1", nullptr},
   NamedOid{"1.2.840.10045.4.3.2", "ecdsa-with-SHA256", nullptr},
   NamedOid{"1.2.840.10045.4.3.3", "ecdsa-with-SHA384", nullptr},
   NamedOid{"1.2.840.10045.4.3.4", "ecdsa-with-SHA512", nullptr},
   NamedOid{"1.2.840.10040.4.1", "dsaEncryption", nullptr},
   NamedOid{"1.2.840.10040.4.3", "dsaWithSHA1", nullptr},

   NamedOid{"2.5.29.14", "subjectKeyIdentifier", nullptr},
   NamedOid{"2.5.29.15", "keyUsage", nullptr},
   NamedOid{"2.5.29.17", "subjectAltName", nullptr},
   NamedOid{"2.5.29.18", "issuerAltName", nullptr},
   NamedOid{"2.5.29.19", "basicConstraints", nullptr},
   NamedOid{"2.5.29.20", "cRLNumber", nullptr},
   NamedOid{"2.5.29.31", "cRLDistributionPoints", nullptr},
   NamedOid{"2.5.29.32", "certificatePolicies", nullptr},
   NamedOid{"2.5.29.35", "authorityKeyIdentifier", nullptr},
   NamedOid{"2.5.29.37", "extendedKeyUsage", nullptr},
   NamedOid{"1.3.6.1.5.5.7.1.1", "authorityInfoAccess", nullptr},
   NamedOid{"2.16.840.1.113730.1.1", "nsCertType", nullptr},
   NamedOid{"2.16.840.1.113730.1.2", "nsBaseUrl", nullptr},
   NamedOid{"2.16.840.1.113730.1.3", "nsRevocationUrl", nullptr},
   NamedOid{"2.16.840.1.113730.1.4", "nsCaRevocationUrl", nullptr},
   NamedOid{"2.16.840.1.113730.1.7", "nsRenewalUrl", nullptr},
   NamedOid{"2.16.840.1.113730.1.8", "nsCaPolicyUrl", nullptr},
   NamedOid{"2.16.840.1.113730.1.12", "nsSslServerName", nullptr},
   NamedOid{"2.16.840.1.113730.1.13", "nsComment", nullptr},

   NamedOid{"1.3.6.1.5.5.7.3.1", "serverAuth", nullptr},
   NamedOid{"1.3.6.1.5.5.7.3.2", "clientAuth", nullptr},
   NamedOid{"1.3.6.1.5.5.7.3.3", "codeSigning", nullptr},
   NamedOid{"1.3.6.1.5.5.7.3.4", "emailProtection", nullptr},
   NamedOid{"1.3.6.1.5.5.7.3.9", "OCSPSigning", nullptr},
   NamedOid{"2.5.29.37.0", "anyExtendedKeyUsage", nullptr},
   NamedOid{"1.3.6.1.5.5.7.48.1", "OCSP", nullptr},
   NamedOid{"1.3.6.1.5.5.7.48.2", "caIssuers", nullptr},
};

struct ResolvedEntry {
   Oid oid;
   std::string_view name;
   std::string_view long_name;
};

const std::vector<ResolvedEntry>& resolved_table() {
   static const std::vector<ResolvedEntry> table = [] {
      std::vector<ResolvedEntry> out;
      out.reserve(kTable.size());
      for(const auto& e : kTable) {
         out.push_back({Oid::from_dotted(e.dotted), e.name, e.long_name ? e.long_name : ""});
      }
      return out;
   }();
   return table;
}

bool is_dn_attribute(const Oid& oid) {
   static const Oid kX520 = Oid::from_dotted("2.5.4");
   static const Oid kPkcs9 = Oid::from_dotted("1.2.840.113549.1.9");
   static const Oid kPilot = Oid::from_dotted("0.9.2342.19200300.100.1");
   return oid.has_prefix(kX520) || oid.has_prefix(kPkcs9) || oid.has_prefix(kPilot);
}

void append_utf8(std::uint32_t cp, std::string& out) {
   if(cp < 0x80) {
      out.push_back(static_cast<char>(cp));
   } else if(cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
   } else if(cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
   } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
   }
}

StringEncoding encoding_of(const der::DerNode& node) {
   if(node.tag_class != der::TagClass::Universal || node.constructed) {
      return StringEncoding::Other;
   }
   switch(node.tag_number) {
      case der::tag::kPrintableString: return StringEncoding::PrintableString;
      case der::tag::kIa5String: return StringEncoding::Ia5String;
      case der::tag::kUtf8String: return StringEncoding::Utf8String;
      case der::tag::kTeletexString: return StringEncoding::TeletexString;
      case der::tag::kBmpString: return StringEncoding::BmpString;
      case der::tag::kUniversalString: return StringEncoding::UniversalString;
      case der::tag::kVisibleString: return StringEncoding::VisibleString;
      case der::tag::kNumericString: return StringEncoding::NumericString;
      default: return StringEncoding::Other;
   }
}

std::string decode_string_value(const der::DerNode& node, StringEncoding enc) {
   const auto& c = node.content;
   std::string out;
   switch(enc) {
      case StringEncoding::TeletexString:
         // treated as Latin-1
         for(const auto b : c) {
            append_utf8(b, out);
         }
         return out;
      case StringEncoding::BmpString:
         for(std::size_t i = 0; i + 1 < c.size(); i += 2) {
            std::uint32_t cp = (static_cast<std::uint32_t>(c[i]) << 8) | c[i + 1];
            if(cp >= 0xd800 && cp < 0xdc00 && i + 3 < c.size()) {
               const std::uint32_t lo = (static_cast<std::uint32_t>(c[i + 2]) << 8) | c[i + 3];
               cp = 0x10000 + ((cp - 0xd800) << 10) + (lo - 0xdc00);
               i += 2;
            }
            append_utf8(cp, out);
         }
         return out;
      case StringEncoding::UniversalString:
         for(std::size_t i = 0; i + 3 < c.size(); i += 4) {
            append_utf8((static_cast<std::uint32_t>(c[i]) << 24) | (static_cast<std::uint32_t>(c[i + 1]) << 16) |
                           (static_cast<std::uint32_t>(c[i + 2]) << 8) | c[i + 3],
                        out);
         }
         return out;
      case StringEncoding::Other:
         if(node.constructed) {
            return "#" + der::hex(der::encode(node));
         }
         [[fallthrough]];
      default: return std::string(c.begin(), c.end());
   }
}

std::string escape_dn_value(std::string_view v) {
   std::string out;
   for(const char ch : v) {
      if(ch == ',' || ch == '+' || ch == '=' || ch == '\\' || ch == '"' || ch == '<' || ch == '>' || ch == ';') {
         out.push_back('\\');
      }
      out.push_back(ch);
   }
   return out;
}

}  // namespace

std::string_view oid_name(const Oid& oid) {
   for(const auto& e : resolved_table()) {
      if(e.oid == oid) {
         return e.name;
      }
   }
   return {};
}

std::string oid_display(const Oid& oid) {
   const auto name = oid_name(oid);
   return name.empty() ? oid.dotted() : std::string(name);
}

std::optional<Oid> attribute_oid(std::string_view name) {
   for(const auto& e : resolved_table()) {
      if(!is_dn_attribute(e.oid)) {
         continue;
      }
      if(e.name == name || (!e.long_name.empty() && e.long_name == name)) {
         return e.oid;
      }
   }
   return std::nullopt;
}

std::string_view to_string(StringEncoding e) {
   switch(e) {
      case StringEncoding::PrintableString: return "printableString";
      case StringEncoding::Ia5String: return "ia5String";
      case StringEncoding::Utf8String: return "utf8String";
      case StringEncoding::TeletexString: return "teletexString";
      case StringEncoding::BmpString: return "bmpString";
      case StringEncoding::UniversalString: return "universalString";
      case StringEncoding::VisibleString: return "visibleString";
      case StringEncoding::NumericString: return "numericString";
      case StringEncoding::Other: return "other";
   }
   return "other";
}

std::size_t DistinguishedName::rdn_count() const noexcept {
   return elements.empty() ? 0 : elements.back().rdn_index + 1;
}

DistinguishedName parse_name(const der::DerNode& node) {
   if(!node.is_universal(der::tag::kSequence) || !node.constructed) {
      throw der::Error(der::ErrorCode::WrongType, "Name is not a SEQUENCE");
   }
   DistinguishedName dn;
   for(std::size_t rdn = 0; rdn < node.children.size(); ++rdn) {
      const auto& set = node.children[rdn];
      if(!set.is_universal(der::tag::kSet) || !set.constructed || set.children.empty()) {
         throw der::Error(der::ErrorCode::WrongType, "RelativeDistinguishedName is not a non-empty SET");
      }
      for(const auto& atv : set.children) {
         if(!atv.is_universal(der::tag::kSequence) || atv.children.size() != 2 ||
            !atv.children[0].is_universal(der::tag::kOid)) {
            throw der::Error(der::ErrorCode::WrongType, "AttributeTypeAndValue malformed");
         }
         NameElement el;
         el.attr_type = der::decode_oid(atv.children[0].content);
         el.attr_name = std::string(oid_name(el.attr_type));
         el.encoding = encoding_of(atv.children[1]);
         el.value = decode_string_value(atv.children[1], el.encoding);
         el.rdn_index = rdn;
         dn.elements.push_back(std::move(el));
      }
   }

   std::string canonical;
   for(std::size_t i = 0; i < dn.elements.size(); ++i) {
      const auto& el = dn.elements[i];
      if(i > 0) {
         canonical += el.rdn_index == dn.elements[i - 1].rdn_index ? " + " : ", ";
      }
      canonical += el.attr_name.empty() ? el.attr_type.dotted() : el.attr_name;
      canonical += '=';
      canonical += escape_dn_value(el.value);
   }
   dn.canonical = std::move(canonical);
   return dn;
}

std::vector<NameElement> query_name(const DistinguishedName& dn, const Oid& attr) {
   std::vector<NameElement> out;
   std::copy_if(dn.elements.begin(), dn.elements.end(), std::back_inserter(out),
                [&](const NameElement& e) { return e.attr_type == attr; });
   return out;
}

std::vector<NameElement> query_name(const DistinguishedName& dn, std::string_view attr) {
   if(!attr.empty() && attr.front() >= '0' && attr.front() <= '9') {
      return query_name(dn, Oid::from_dotted(attr));
   }
   const auto oid = attribute_oid(attr);
   if(!oid) {
      throw Error(Error::Code::UnknownAttributeName, fmt::format("unknown name attribute '{}'", attr));
   }
   return query_name(dn, *oid);
}

bool ExtendedKeyUsage::has(const Oid& oid) const {
   return std::find(purposes.begin(), purposes.end(), oid) != purposes.end();
}

}  // namespace certlint::x509
