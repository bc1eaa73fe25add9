#pragma once

#include <certlint/der.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace certlint::x509 {

using der::Bytes;
using der::ByteView;
using der::Oid;

class Error : public std::runtime_error {
public:
   enum class Code { NotACertificate, NotACrl, MismatchedMarkers, BadBase64, UnknownAttributeName };

   Error(Code code, const std::string& what);
   Code code() const noexcept { return code_; }

private:
   Code code_;
};

// ---------------------------------------------------------------------------
// OID names

namespace oids {
// distinguished name attributes
extern const Oid kCommonName;
extern const Oid kSurname;
extern const Oid kSerialNumber;
extern const Oid kCountry;
extern const Oid kLocality;
extern const Oid kState;
extern const Oid kOrganization;
extern const Oid kOrganizationalUnit;
extern const Oid kDomainComponent;
extern const Oid kUserId;
extern const Oid kEmailAddress;
// algorithms
extern const Oid kRsaEncryption;
extern const Oid kMd2WithRsa;
extern const Oid kMd5WithRsa;
extern const Oid kSha1WithRsa;
extern const Oid kSha256WithRsa;
extern const Oid kSha384WithRsa;
extern const Oid kSha512WithRsa;
extern const Oid kEcPublicKey;
extern const Oid kEcdsaWithSha256;
// extensions
extern const Oid kSubjectKeyIdentifier;
extern const Oid kKeyUsage;
extern const Oid kSubjectAltName;
extern const Oid kBasicConstraints;
extern const Oid kCrlDistributionPoints;
extern const Oid kCertificatePolicies;
extern const Oid kAuthorityKeyIdentifier;
extern const Oid kExtendedKeyUsage;
extern const Oid kAuthorityInfoAccess;
extern const Oid kNetscapeArc;  // 2.16.840.1.113730.1, parent of the ns* extensions
extern const Oid kNsCertType;
extern const Oid kNsComment;
// extended key usages
extern const Oid kServerAuth;
extern const Oid kClientAuth;
extern const Oid kAnyExtendedKeyUsage;
extern const Oid kOcspAccess;
}  // namespace oids

/// Readable name for a known OID, or an empty string.
std::string_view oid_name(const Oid& oid);
/// Readable name or the dotted form.
std::string oid_display(const Oid& oid);
/// Resolves a DN attribute short/long name ("CN", "commonName") to its OID.
std::optional<Oid> attribute_oid(std::string_view name);

// ---------------------------------------------------------------------------
// Names

enum class StringEncoding {
   PrintableString,
   Ia5String,
   Utf8String,
   TeletexString,
   BmpString,
   UniversalString,
   VisibleString,
   NumericString,
   Other,
};

std::string_view to_string(StringEncoding e);

struct NameElement {
   Oid attr_type;
   std::string attr_name;
   std::string value;
   StringEncoding encoding = StringEncoding::Other;
   std::size_t rdn_index = 0;
};

struct DistinguishedName {
   std::vector<NameElement> elements;
   std::string canonical;

   bool empty() const noexcept { return elements.empty(); }
   /// Number of relative distinguished names (elements sharing rdn_index form one RDN).
   std::size_t rdn_count() const noexcept;
};

/// Matching elements in DN order. `attr` is a dotted OID or an attribute name.
std::vector<NameElement> query_name(const DistinguishedName& dn, std::string_view attr);
std::vector<NameElement> query_name(const DistinguishedName& dn, const Oid& attr);

DistinguishedName parse_name(const der::DerNode& node);

// ---------------------------------------------------------------------------
// Extensions

struct BasicConstraints {
   bool ca = false;
   std::optional<std::uint64_t> path_len;
};

enum class KeyUsageBit : std::size_t {
   DigitalSignature = 0,
   NonRepudiation = 1,
   KeyEncipherment = 2,
   DataEncipherment = 3,
   KeyAgreement = 4,
   KeyCertSign = 5,
   CrlSign = 6,
   EncipherOnly = 7,
   DecipherOnly = 8,
};

struct KeyUsage {
   der::BitString bits;
   bool has(KeyUsageBit b) const noexcept { return bits.bit(static_cast<std::size_t>(b)); }
};

enum class NsCertTypeBit : std::size_t {
   SslClient = 0,
   SslServer = 1,
   Smime = 2,
   ObjectSigning = 3,
   Reserved = 4,
   SslCa = 5,
   SmimeCa = 6,
   ObjectSigningCa = 7,
};

struct NsCertType {
   der::BitString bits;
   bool has(NsCertTypeBit b) const noexcept { return bits.bit(static_cast<std::size_t>(b)); }
};

struct ExtendedKeyUsage {
   std::vector<Oid> purposes;
   bool has(const Oid& oid) const;
};

struct GeneralNames {
   std::vector<std::string> dns_names;
   std::vector<std::string> emails;
   std::vector<std::string> uris;
   std::size_t other_count = 0;
};

struct CrlDistributionPoints {
   std::vector<std::string> uris;
};

struct AuthorityKeyIdentifier {
   std::optional<Bytes> key_id;
   bool has_issuer_and_serial = false;
};

struct SubjectKeyIdentifier {
   Bytes key_id;
};

struct CertificatePolicies {
   std::vector<Oid> policies;
};

struct AuthorityInfoAccess {
   std::vector<std::pair<Oid, std::string>> descriptions;
};

using ExtensionPayload = std::variant<std::monostate,
                                      BasicConstraints,
                                      KeyUsage,
                                      ExtendedKeyUsage,
                                      GeneralNames,
                                      CrlDistributionPoints,
                                      AuthorityKeyIdentifier,
                                      SubjectKeyIdentifier,
                                      CertificatePolicies,
                                      AuthorityInfoAccess,
                                      NsCertType>;

struct ExtensionEntry {
   Oid oid;
   std::string name;
   bool critical = false;
   Bytes raw_value;  // content of the extnValue OCTET STRING
   ExtensionPayload parsed;

   template <typename T>
   const T* as() const noexcept {
      return std::get_if<T>(&parsed);
   }
};

// ---------------------------------------------------------------------------
// Certificates and CRLs

struct PublicKeyInfo {
   Oid algorithm;
   std::optional<der::Integer> rsa_modulus;
   std::optional<der::Integer> rsa_exponent;
   std::size_t modulus_bits = 0;
   Bytes spki_der;

   bool is_rsa() const noexcept { return rsa_modulus.has_value(); }
};

struct Certificate {
   int version = 0;
   der::Integer serial;
   Oid tbs_sig_alg_oid;
   Oid sig_alg_oid;
   std::string sig_alg_name;
   DistinguishedName issuer;
   DistinguishedName subject;
   der::Timestamp not_before;
   der::Timestamp not_after;
   PublicKeyInfo public_key;
   std::vector<ExtensionEntry> extensions;
   Bytes raw_der;
   std::vector<std::string> warnings;

   /// First extension with this OID, or nullptr.
   const ExtensionEntry* find_extension(const Oid& oid) const noexcept;
};

struct Crl {
   int version = 0;
   DistinguishedName issuer;
   Oid tbs_sig_alg_oid;
   Oid sig_alg_oid;
   std::string sig_alg_name;
   der::Timestamp this_update;
   std::optional<der::Timestamp> next_update;
   std::size_t revoked_count = 0;
   Bytes raw_der;
   std::vector<std::string> warnings;
};

Certificate parse_certificate(ByteView der);
Crl parse_crl(ByteView der);

/// One entry per extension, keyed by readable name (dotted OID when
/// unknown). Duplicates keep the first occurrence.
std::map<std::string, ExtensionEntry> extensions_by_name(const Certificate& cert);

/// Lowercase hex SHA-1.
std::string sha1_hex(ByteView bytes);
/// SHA-1 over the DER SubjectPublicKeyInfo.
std::string spki_fingerprint(const Certificate& cert);

// ---------------------------------------------------------------------------
// PEM

struct PemBlock {
   std::string label;
   Bytes der;
};

std::vector<PemBlock> decode_pem(std::string_view text);
Bytes decode_base64(std::string_view text);
std::string encode_pem(std::string_view label, ByteView der);

}  // namespace certlint::x509
