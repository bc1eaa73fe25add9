#pragma once

// Strict DER decoding and encoding.
//
// parse() produces a TLV tree and rejects every BER-only construct
// (indefinite lengths, non-minimal lengths or tag numbers). encode() is
// the exact inverse for trees produced by parse().

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace certlint::der {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kMaxDepth = 32;
inline constexpr std::size_t kMaxInputSize = 1024 * 1024;

enum class ErrorCode {
   EmptyInput,
   TruncatedInput,
   IndefiniteLength,
   NonMinimalLength,
   NonMinimalTag,
   LengthOverflow,
   TrailingGarbage,
   DepthExceeded,
   InputTooLarge,
   EmptyContent,
   UnterminatedArc,
   NonMinimalArc,
   BadFormat,
   WrongType,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
   Error(ErrorCode code, const std::string& what);
   ErrorCode code() const noexcept { return code_; }

private:
   ErrorCode code_;
};

enum class TagClass : std::uint8_t {
   Universal = 0,
   Application = 1,
   ContextSpecific = 2,
   Private = 3,
};

namespace tag {
inline constexpr std::uint32_t kBoolean = 1;
inline constexpr std::uint32_t kInteger = 2;
inline constexpr std::uint32_t kBitString = 3;
inline constexpr std::uint32_t kOctetString = 4;
inline constexpr std::uint32_t kNull = 5;
inline constexpr std::uint32_t kOid = 6;
inline constexpr std::uint32_t kEnumerated = 10;
inline constexpr std::uint32_t kUtf8String = 12;
inline constexpr std::uint32_t kSequence = 16;
inline constexpr std::uint32_t kSet = 17;
inline constexpr std::uint32_t kNumericString = 18;
inline constexpr std::uint32_t kPrintableString = 19;
inline constexpr std::uint32_t kTeletexString = 20;
inline constexpr std::uint32_t kIa5String = 22;
inline constexpr std::uint32_t kUtcTime = 23;
inline constexpr std::uint32_t kGeneralizedTime = 24;
inline constexpr std::uint32_t kVisibleString = 26;
inline constexpr std::uint32_t kUniversalString = 28;
inline constexpr std::uint32_t kBmpString = 30;
}  // namespace tag

/// One TLV element. Primitive nodes carry their content bytes; constructed
/// nodes carry children and an empty `content`.
struct DerNode {
   TagClass tag_class = TagClass::Universal;
   std::uint32_t tag_number = 0;
   bool constructed = false;
   std::size_t header_length = 0;
   Bytes content;
   std::vector<DerNode> children;
   std::size_t total_length = 0;

   bool is(TagClass cls, std::uint32_t number) const noexcept {
      return tag_class == cls && tag_number == number;
   }
   bool is_universal(std::uint32_t number) const noexcept { return is(TagClass::Universal, number); }
   bool is_context(std::uint32_t number) const noexcept { return is(TagClass::ContextSpecific, number); }
   std::size_t content_length() const noexcept { return total_length - header_length; }

   static DerNode primitive(TagClass cls, std::uint32_t number, Bytes content);
   static DerNode primitive(std::uint32_t universal_number, Bytes content) {
      return primitive(TagClass::Universal, universal_number, std::move(content));
   }
   static DerNode make_constructed(TagClass cls, std::uint32_t number, std::vector<DerNode> children);
   static DerNode sequence(std::vector<DerNode> children) {
      return make_constructed(TagClass::Universal, tag::kSequence, std::move(children));
   }
   static DerNode set(std::vector<DerNode> children) {
      return make_constructed(TagClass::Universal, tag::kSet, std::move(children));
   }

   friend bool operator==(const DerNode&, const DerNode&) = default;
};

struct ParseResult {
   DerNode node;
   std::size_t consumed = 0;
};

enum class ConsumeMode { Prefix, Exact };

/// Parses the first complete TLV in `input`. In Exact mode any bytes after
/// it raise TrailingGarbage.
ParseResult parse(ByteView input, ConsumeMode mode = ConsumeMode::Prefix);

/// Convenience: exact-consume parse returning the node.
DerNode parse_exact(ByteView input);

Bytes encode(const DerNode& node);
void encode_to(const DerNode& node, Bytes& out);

/// Length of the header that encode() would produce for this tag/length.
std::size_t header_size(std::uint32_t tag_number, std::size_t content_length);

// ---------------------------------------------------------------------------
// Object identifiers

class Oid {
public:
   Oid() = default;
   explicit Oid(std::vector<std::uint64_t> arcs);

   /// Parses "1.2.840.113549"; throws Error(BadFormat) on malformed text.
   static Oid from_dotted(std::string_view dotted);

   const std::vector<std::uint64_t>& arcs() const noexcept { return arcs_; }
   std::string dotted() const;
   bool empty() const noexcept { return arcs_.empty(); }

   /// True when this OID lies strictly below `prefix` in the OID tree.
   bool has_prefix(const Oid& prefix) const noexcept;

   friend bool operator==(const Oid&, const Oid&) = default;
   friend auto operator<=>(const Oid&, const Oid&) = default;

private:
   std::vector<std::uint64_t> arcs_;
};

Oid decode_oid(ByteView content);
Bytes encode_oid(const Oid& oid);

// ---------------------------------------------------------------------------
// Integers

/// Arbitrary-precision integer as sign plus big-endian magnitude with no
/// leading zero bytes. Zero is an empty magnitude.
struct Integer {
   bool negative = false;
   Bytes magnitude;

   bool is_zero() const noexcept { return magnitude.empty(); }
   bool is_odd() const noexcept { return !magnitude.empty() && (magnitude.back() & 1u); }
   std::size_t bit_length() const noexcept;
   std::optional<std::uint64_t> to_u64() const noexcept;
   /// Lowercase hex of the magnitude, "-" prefixed when negative, "0" for zero.
   std::string to_hex() const;
   std::string to_decimal() const;

   static Integer from_u64(std::uint64_t value);

   friend bool operator==(const Integer&, const Integer&) = default;
};

/// Decodes two's-complement INTEGER content. Non-minimal encodings are
/// accepted here; callers that care check minimality with is_minimal_integer.
Integer decode_integer(ByteView content);
bool is_minimal_integer(ByteView content) noexcept;
Bytes encode_integer(const Integer& value);

// ---------------------------------------------------------------------------
// Times

enum class TimeForm { UtcTime, GeneralizedTime };

struct Timestamp {
   int year = 1970;
   int month = 1;
   int day = 1;
   int hour = 0;
   int minute = 0;
   int second = 0;
   TimeForm source_form = TimeForm::UtcTime;

   /// Days since 1970-01-01 of the calendar date (time of day ignored).
   std::int64_t days_since_epoch() const noexcept;
   /// Seconds since 1970-01-01T00:00:00Z.
   std::int64_t seconds_since_epoch() const noexcept;
   /// "YYYY-MM-DDTHH:MM:SSZ"
   std::string iso8601() const;

   friend bool operator==(const Timestamp& a, const Timestamp& b) noexcept {
      return a.seconds_since_epoch() == b.seconds_since_epoch();
   }
   friend auto operator<=>(const Timestamp& a, const Timestamp& b) noexcept {
      return a.seconds_since_epoch() <=> b.seconds_since_epoch();
   }
};

Timestamp decode_time(const DerNode& node);
/// UTCTime for years 1950..2049, GeneralizedTime otherwise.
DerNode encode_time(const Timestamp& ts);

std::int64_t days_from_civil(int year, int month, int day) noexcept;
struct CivilDate {
   int year;
   int month;
   int day;
};
CivilDate civil_from_days(std::int64_t days) noexcept;

// ---------------------------------------------------------------------------
// Small typed-leaf helpers used by the X.509 layer and fixture builders.

bool decode_boolean(const DerNode& node);
/// BIT STRING content split into unused-bit count and payload.
struct BitString {
   std::uint8_t unused_bits = 0;
   Bytes bytes;
   bool bit(std::size_t index) const noexcept;
   std::size_t bit_count() const noexcept { return bytes.size() * 8 - unused_bits; }
};
BitString decode_bit_string(const DerNode& node);
/// Encodes named bits with trailing zero bits trimmed, as DER requires.
Bytes encode_named_bits(const std::vector<std::size_t>& set_bits);

std::string hex(ByteView bytes);

}  // namespace certlint::der
