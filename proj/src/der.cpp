#include <certlint/der.hpp>

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

namespace certlint::der {

std::string_view to_string(ErrorCode code) {
   switch(code) {
      case ErrorCode::EmptyInput: return "EmptyInput";
      case ErrorCode::TruncatedInput: return "TruncatedInput";
      case ErrorCode::IndefiniteLength: return "IndefiniteLength";
      case ErrorCode::NonMinimalLength: return "NonMinimalLength";
      case ErrorCode::NonMinimalTag: return "NonMinimalTag";
      case ErrorCode::LengthOverflow: return "LengthOverflow";
      case ErrorCode::TrailingGarbage: return "TrailingGarbage";
      case ErrorCode::DepthExceeded: return "DepthExceeded";
      case ErrorCode::InputTooLarge: return "InputTooLarge";
      case ErrorCode::EmptyContent: return "EmptyContent";
      case ErrorCode::UnterminatedArc: return "UnterminatedArc";
      case ErrorCode::NonMinimalArc: return "NonMinimalArc";
      case ErrorCode::BadFormat: return "BadFormat";
      case ErrorCode::WrongType: return "WrongType";
   }
   return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what) :
      std::runtime_error(fmt::format("{}: {}", to_string(code), what)), code_(code) {}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
   throw Error(code, what);
}

std::size_t length_bytes_needed(std::size_t length) {
   std::size_t n = 0;
   while(length > 0) {
      ++n;
      length >>= 8;
   }
   return n;
}

std::size_t tag_size(std::uint32_t tag_number) {
   if(tag_number < 31) {
      return 1;
   }
   std::size_t n = 1;
   while(tag_number > 0) {
      ++n;
      tag_number >>= 7;
   }
   return n;
}

class Reader {
public:
   explicit Reader(ByteView input) : input_(input) {}

   DerNode read(std::size_t offset, std::size_t limit, std::size_t depth) {
      if(depth > kMaxDepth) {
         fail(ErrorCode::DepthExceeded, fmt::format("nesting deeper than {}", kMaxDepth));
      }
      std::size_t pos = offset;
      auto next = [&]() -> std::uint8_t {
         if(pos >= limit) {
            fail(ErrorCode::TruncatedInput, fmt::format("header truncated at offset {}", pos));
         }
         return input_[pos++];
      };

      DerNode node;
      const std::uint8_t first = next();
      node.tag_class = static_cast<TagClass>(first >> 6);
      node.constructed = (first & 0x20) != 0;
      node.tag_number = first & 0x1f;
      if(node.tag_number == 0x1f) {
         std::uint64_t number = 0;
         std::uint8_t b = next();
         if(b == 0x80) {
            fail(ErrorCode::NonMinimalTag, "leading 0x80 in high tag number");
         }
         for(;;) {
            number = (number << 7) | (b & 0x7f);
            if(number > 0xffffffffu) {
               fail(ErrorCode::LengthOverflow, "tag number exceeds 32 bits");
            }
            if((b & 0x80) == 0) {
               break;
            }
            b = next();
         }
         if(number < 31) {
            fail(ErrorCode::NonMinimalTag, fmt::format("tag {} must use the short form", number));
         }
         node.tag_number = static_cast<std::uint32_t>(number);
      }

      const std::uint8_t len_byte = next();
      std::size_t length = 0;
      if(len_byte < 0x80) {
         length = len_byte;
      } else if(len_byte == 0x80) {
         fail(ErrorCode::IndefiniteLength, fmt::format("indefinite length at offset {}", pos - 1));
      } else {
         const std::size_t n = len_byte & 0x7f;
         if(n > sizeof(std::uint32_t)) {
            fail(ErrorCode::LengthOverflow, fmt::format("{}-byte length field", n));
         }
         for(std::size_t i = 0; i < n; ++i) {
            const std::uint8_t b = next();
            if(i == 0 && b == 0) {
               fail(ErrorCode::NonMinimalLength, "length has a leading zero byte");
            }
            length = (length << 8) | b;
         }
         if(length < 0x80) {
            fail(ErrorCode::NonMinimalLength, fmt::format("long form used for length {}", length));
         }
      }

      node.header_length = pos - offset;
      if(length > limit - pos) {
         fail(ErrorCode::TruncatedInput,
              fmt::format("element at offset {} claims {} content bytes, {} available", offset, length, limit - pos));
      }
      const std::size_t end = pos + length;
      if(node.constructed) {
         while(pos < end) {
            DerNode child = read(pos, end, depth + 1);
            pos += child.total_length;
            node.children.push_back(std::move(child));
         }
      } else {
         node.content.assign(input_.begin() + static_cast<std::ptrdiff_t>(pos),
                             input_.begin() + static_cast<std::ptrdiff_t>(end));
      }
      node.total_length = node.header_length + length;
      return node;
   }

private:
   ByteView input_;
};

void append_header(std::uint8_t first_bits, std::uint32_t tag_number, std::size_t length, Bytes& out) {
   if(tag_number < 31) {
      out.push_back(static_cast<std::uint8_t>(first_bits | tag_number));
   } else {
      out.push_back(static_cast<std::uint8_t>(first_bits | 0x1f));
      const std::size_t n = tag_size(tag_number) - 1;
      for(std::size_t i = n; i-- > 0;) {
         std::uint8_t b = static_cast<std::uint8_t>((tag_number >> (7 * i)) & 0x7f);
         if(i != 0) {
            b |= 0x80;
         }
         out.push_back(b);
      }
   }
   if(length < 0x80) {
      out.push_back(static_cast<std::uint8_t>(length));
   } else {
      const std::size_t n = length_bytes_needed(length);
      out.push_back(static_cast<std::uint8_t>(0x80 | n));
      for(std::size_t i = n; i-- > 0;) {
         out.push_back(static_cast<std::uint8_t>((length >> (8 * i)) & 0xff));
      }
   }
}

}  // namespace

std::size_t header_size(std::uint32_t tag_number, std::size_t content_length) {
   const std::size_t len = content_length < 0x80 ? 1 : 1 + length_bytes_needed(content_length);
   return tag_size(tag_number) + len;
}

DerNode DerNode::primitive(TagClass cls, std::uint32_t number, Bytes content) {
   DerNode node;
   node.tag_class = cls;
   node.tag_number = number;
   node.constructed = false;
   node.header_length = header_size(number, content.size());
   node.total_length = node.header_length + content.size();
   node.content = std::move(content);
   return node;
}

DerNode DerNode::make_constructed(TagClass cls, std::uint32_t number, std::vector<DerNode> children) {
   DerNode node;
   node.tag_class = cls;
   node.tag_number = number;
   node.constructed = true;
   std::size_t content_length = 0;
   for(const auto& c : children) {
      content_length += c.total_length;
   }
   node.header_length = header_size(number, content_length);
   node.total_length = node.header_length + content_length;
   node.children = std::move(children);
   return node;
}

ParseResult parse(ByteView input, ConsumeMode mode) {
   if(input.empty()) {
      fail(ErrorCode::EmptyInput, "no bytes to parse");
   }
   if(input.size() > kMaxInputSize) {
      fail(ErrorCode::InputTooLarge, fmt::format("{} bytes exceeds the {} byte limit", input.size(), kMaxInputSize));
   }
   Reader reader(input);
   ParseResult result;
   result.node = reader.read(0, input.size(), 1);
   result.consumed = result.node.total_length;
   if(mode == ConsumeMode::Exact && result.consumed != input.size()) {
      fail(ErrorCode::TrailingGarbage, fmt::format("{} bytes after the top-level element", input.size() - result.consumed));
   }
   return result;
}

DerNode parse_exact(ByteView input) {
   return parse(input, ConsumeMode::Exact).node;
}

void encode_to(const DerNode& node, Bytes& out) {
   const auto first_bits =
      static_cast<std::uint8_t>((static_cast<std::uint8_t>(node.tag_class) << 6) | (node.constructed ? 0x20 : 0x00));
   if(node.constructed) {
      std::size_t content_length = 0;
      for(const auto& c : node.children) {
         content_length += c.total_length;
      }
      append_header(first_bits, node.tag_number, content_length, out);
      for(const auto& c : node.children) {
         encode_to(c, out);
      }
   } else {
      append_header(first_bits, node.tag_number, node.content.size(), out);
      out.insert(out.end(), node.content.begin(), node.content.end());
   }
}

Bytes encode(const DerNode& node) {
   Bytes out;
   out.reserve(node.total_length);
   encode_to(node, out);
   return out;
}

// ---------------------------------------------------------------------------

Oid::Oid(std::vector<std::uint64_t> arcs) : arcs_(std::move(arcs)) {
   if(arcs_.size() < 2) {
      fail(ErrorCode::BadFormat, "an OID needs at least two arcs");
   }
   if(arcs_[0] > 2) {
      fail(ErrorCode::BadFormat, fmt::format("first arc {} out of range", arcs_[0]));
   }
   if(arcs_[0] < 2 && arcs_[1] >= 40) {
      fail(ErrorCode::BadFormat, fmt::format("second arc {} out of range under {}", arcs_[1], arcs_[0]));
   }
}

Oid Oid::from_dotted(std::string_view dotted) {
   std::vector<std::uint64_t> arcs;
   std::size_t pos = 0;
   while(pos <= dotted.size()) {
      const std::size_t dot = std::min(dotted.find('.', pos), dotted.size());
      const auto piece = dotted.substr(pos, dot - pos);
      std::uint64_t value = 0;
      const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
      if(piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size()) {
         fail(ErrorCode::BadFormat, fmt::format("malformed OID text '{}'", dotted));
      }
      arcs.push_back(value);
      pos = dot + 1;
   }
   return Oid(std::move(arcs));
}

std::string Oid::dotted() const {
   std::string out;
   for(std::size_t i = 0; i < arcs_.size(); ++i) {
      if(i) {
         out.push_back('.');
      }
      out += std::to_string(arcs_[i]);
   }
   return out;
}

bool Oid::has_prefix(const Oid& prefix) const noexcept {
   return arcs_.size() > prefix.arcs_.size() && std::equal(prefix.arcs_.begin(), prefix.arcs_.end(), arcs_.begin());
}

Oid decode_oid(ByteView content) {
   if(content.empty()) {
      fail(ErrorCode::EmptyContent, "OID content is empty");
   }
   if(content.back() & 0x80) {
      fail(ErrorCode::UnterminatedArc, "final OID byte has the continuation bit set");
   }
   std::vector<std::uint64_t> values;
   std::uint64_t value = 0;
   bool at_start = true;
   for(const std::uint8_t b : content) {
      if(at_start && b == 0x80) {
         fail(ErrorCode::NonMinimalArc, "OID arc starts with 0x80");
      }
      if(value > (UINT64_MAX >> 7)) {
         fail(ErrorCode::BadFormat, "OID arc exceeds 64 bits");
      }
      value = (value << 7) | (b & 0x7f);
      at_start = (b & 0x80) == 0;
      if(at_start) {
         values.push_back(value);
         value = 0;
      }
   }
   std::vector<std::uint64_t> arcs;
   arcs.reserve(values.size() + 1);
   const std::uint64_t head = values.front();
   if(head < 80) {
      arcs.push_back(head / 40);
      arcs.push_back(head % 40);
   } else {
      arcs.push_back(2);
      arcs.push_back(head - 80);
   }
   arcs.insert(arcs.end(), values.begin() + 1, values.end());
   return Oid(std::move(arcs));
}

Bytes encode_oid(const Oid& oid) {
   const auto& arcs = oid.arcs();
   Bytes out;
   auto put = [&out](std::uint64_t v) {
      std::uint8_t buf[10];
      std::size_t n = 0;
      do {
         buf[n++] = static_cast<std::uint8_t>(v & 0x7f);
         v >>= 7;
      } while(v > 0);
      while(n-- > 0) {
         out.push_back(static_cast<std::uint8_t>(buf[n] | (n ? 0x80 : 0x00)));
      }
   };
   put(arcs[0] * 40 + arcs[1]);
   for(std::size_t i = 2; i < arcs.size(); ++i) {
      put(arcs[i]);
   }
   return out;
}

// ---------------------------------------------------------------------------

std::size_t Integer::bit_length() const noexcept {
   if(magnitude.empty()) {
      return 0;
   }
   std::size_t bits = (magnitude.size() - 1) * 8;
   for(std::uint8_t top = magnitude.front(); top; top >>= 1) {
      ++bits;
   }
   return bits;
}

std::optional<std::uint64_t> Integer::to_u64() const noexcept {
   if(negative || magnitude.size() > 8) {
      return std::nullopt;
   }
   std::uint64_t v = 0;
   for(const auto b : magnitude) {
      v = (v << 8) | b;
   }
   return v;
}

std::string Integer::to_hex() const {
   if(magnitude.empty()) {
      return "0";
   }
   return (negative ? "-" : "") + hex(magnitude);
}

std::string Integer::to_decimal() const {
   if(magnitude.empty()) {
      return "0";
   }
   Bytes work = magnitude;
   std::string digits;
   while(!work.empty()) {
      unsigned remainder = 0;
      Bytes quotient;
      for(const auto b : work) {
         const unsigned cur = remainder * 256 + b;
         const auto q = static_cast<std::uint8_t>(cur / 10);
         remainder = cur % 10;
         if(!quotient.empty() || q != 0) {
            quotient.push_back(q);
         }
      }
      digits.push_back(static_cast<char>('0' + remainder));
      work = std::move(quotient);
   }
   if(negative) {
      digits.push_back('-');
   }
   std::reverse(digits.begin(), digits.end());
   return digits;
}

Integer Integer::from_u64(std::uint64_t value) {
   Integer out;
   while(value > 0) {
      out.magnitude.insert(out.magnitude.begin(), static_cast<std::uint8_t>(value & 0xff));
      value >>= 8;
   }
   return out;
}

Integer decode_integer(ByteView content) {
   if(content.empty()) {
      fail(ErrorCode::EmptyContent, "INTEGER content is empty");
   }
   Integer out;
   out.negative = (content.front() & 0x80) != 0;
   out.magnitude.assign(content.begin(), content.end());
   if(out.negative) {
      // two's complement negate
      for(auto& b : out.magnitude) {
         b = static_cast<std::uint8_t>(~b);
      }
      for(std::size_t i = out.magnitude.size(); i-- > 0;) {
         if(++out.magnitude[i] != 0) {
            break;
         }
      }
   }
   const auto first_nonzero = std::find_if(out.magnitude.begin(), out.magnitude.end(), [](auto b) { return b != 0; });
   out.magnitude.erase(out.magnitude.begin(), first_nonzero);
   return out;
}

bool is_minimal_integer(ByteView content) noexcept {
   if(content.size() < 2) {
      return !content.empty();
   }
   const bool redundant_zero = content[0] == 0x00 && (content[1] & 0x80) == 0;
   const bool redundant_ff = content[0] == 0xff && (content[1] & 0x80) != 0;
   return !redundant_zero && !redundant_ff;
}

Bytes encode_integer(const Integer& value) {
   if(value.magnitude.empty()) {
      return Bytes{0x00};
   }
   Bytes out = value.magnitude;
   if(!value.negative) {
      if(out.front() & 0x80) {
         out.insert(out.begin(), 0x00);
      }
      return out;
   }
   out.insert(out.begin(), 0x00);
   for(auto& b : out) {
      b = static_cast<std::uint8_t>(~b);
   }
   for(std::size_t i = out.size(); i-- > 0;) {
      if(++out[i] != 0) {
         break;
      }
   }
   while(out.size() > 1 && out[0] == 0xff && (out[1] & 0x80)) {
      out.erase(out.begin());
   }
   return out;
}

// ---------------------------------------------------------------------------

std::int64_t days_from_civil(int year, int month, int day) noexcept {
   const std::int64_t y = static_cast<std::int64_t>(year) - (month <= 2 ? 1 : 0);
   const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
   const std::int64_t yoe = y - era * 400;
   const std::int64_t mp = (month + 9) % 12;
   const std::int64_t doy = (153 * mp + 2) / 5 + day - 1;
   const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
   return era * 146097 + doe - 719468;
}

CivilDate civil_from_days(std::int64_t z) noexcept {
   z += 719468;
   const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
   const std::int64_t doe = z - era * 146097;
   const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
   const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
   const std::int64_t mp = (5 * doy + 2) / 153;
   const auto day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
   const auto month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
   const auto year = static_cast<int>(yoe + era * 400 + (month <= 2 ? 1 : 0));
   return {year, month, day};
}

std::int64_t Timestamp::days_since_epoch() const noexcept {
   return days_from_civil(year, month, day);
}

std::int64_t Timestamp::seconds_since_epoch() const noexcept {
   return days_since_epoch() * 86400 + hour * 3600 + minute * 60 + second;
}

std::string Timestamp::iso8601() const {
   return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", year, month, day, hour, minute, second);
}

namespace {

bool is_leap(int y) {
   return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
   static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
   return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

}  // namespace

Timestamp decode_time(const DerNode& node) {
   if(node.tag_class != TagClass::Universal || node.constructed ||
      (node.tag_number != tag::kUtcTime && node.tag_number != tag::kGeneralizedTime)) {
      fail(ErrorCode::WrongType, "expected UTCTime or GeneralizedTime");
   }
   const bool utc = node.tag_number == tag::kUtcTime;
   const std::string text(node.content.begin(), node.content.end());
   const std::size_t expected = utc ? 13 : 15;
   if(text.size() != expected || text.back() != 'Z') {
      fail(ErrorCode::BadFormat, fmt::format("'{}' is not a {} digit time ending in Z", text, expected - 1));
   }
   std::size_t pos = 0;
   auto digits = [&](std::size_t n) {
      int v = 0;
      for(std::size_t i = 0; i < n; ++i) {
         const char c = text[pos++];
         if(c < '0' || c > '9') {
            fail(ErrorCode::BadFormat, fmt::format("non-digit in time '{}'", text));
         }
         v = v * 10 + (c - '0');
      }
      return v;
   };

   Timestamp ts;
   ts.source_form = utc ? TimeForm::UtcTime : TimeForm::GeneralizedTime;
   if(utc) {
      const int yy = digits(2);
      ts.year = yy < 50 ? 2000 + yy : 1900 + yy;
   } else {
      ts.year = digits(4);
   }
   ts.month = digits(2);
   ts.day = digits(2);
   ts.hour = digits(2);
   ts.minute = digits(2);
   ts.second = digits(2);
   if(ts.month < 1 || ts.month > 12 || ts.day < 1 || ts.day > days_in_month(ts.year, ts.month) || ts.hour > 23 ||
      ts.minute > 59 || ts.second > 59) {
      fail(ErrorCode::BadFormat, fmt::format("field out of range in '{}'", text));
   }
   return ts;
}

DerNode encode_time(const Timestamp& ts) {
   std::string text;
   std::uint32_t number = 0;
   if(ts.year >= 1950 && ts.year <= 2049) {
      text = fmt::format("{:02}{:02}{:02}{:02}{:02}{:02}Z", ts.year % 100, ts.month, ts.day, ts.hour, ts.minute, ts.second);
      number = tag::kUtcTime;
   } else {
      text = fmt::format("{:04}{:02}{:02}{:02}{:02}{:02}Z", ts.year, ts.month, ts.day, ts.hour, ts.minute, ts.second);
      number = tag::kGeneralizedTime;
   }
   return DerNode::primitive(number, Bytes(text.begin(), text.end()));
}

// ---------------------------------------------------------------------------

bool decode_boolean(const DerNode& node) {
   if(!node.is_universal(tag::kBoolean) || node.constructed || node.content.size() != 1) {
      fail(ErrorCode::WrongType, "expected a one-byte BOOLEAN");
   }
   if(node.content[0] != 0x00 && node.content[0] != 0xff) {
      fail(ErrorCode::BadFormat, "DER BOOLEAN must be 0x00 or 0xFF");
   }
   return node.content[0] == 0xff;
}

bool BitString::bit(std::size_t index) const noexcept {
   if(index >= bit_count()) {
      return false;
   }
   return (bytes[index / 8] >> (7 - index % 8)) & 1u;
}

BitString decode_bit_string(const DerNode& node) {
   if(!node.is_universal(tag::kBitString) || node.constructed) {
      fail(ErrorCode::WrongType, "expected a primitive BIT STRING");
   }
   if(node.content.empty()) {
      fail(ErrorCode::EmptyContent, "BIT STRING has no unused-bits byte");
   }
   BitString bs;
   bs.unused_bits = node.content[0];
   if(bs.unused_bits > 7 || (node.content.size() == 1 && bs.unused_bits != 0)) {
      fail(ErrorCode::BadFormat, fmt::format("invalid unused-bit count {}", bs.unused_bits));
   }
   bs.bytes.assign(node.content.begin() + 1, node.content.end());
   return bs;
}

Bytes encode_named_bits(const std::vector<std::size_t>& set_bits) {
   if(set_bits.empty()) {
      return Bytes{0x00};
   }
   const std::size_t highest = *std::max_element(set_bits.begin(), set_bits.end());
   Bytes payload(highest / 8 + 1, 0);
   for(const auto bit : set_bits) {
      payload[bit / 8] |= static_cast<std::uint8_t>(0x80 >> (bit % 8));
   }
   const auto unused = static_cast<std::uint8_t>(7 - highest % 8);
   Bytes out{unused};
   out.insert(out.end(), payload.begin(), payload.end());
   return out;
}

std::string hex(ByteView bytes) {
   static constexpr char kDigits[] = "0123456789abcdef";
   std::string out;
   out.reserve(bytes.size() * 2);
   for(const auto b : bytes) {
      out.push_back(kDigits[b >> 4]);
      out.push_back(kDigits[b & 0x0f]);
   }
   return out;
}

}  // namespace certlint::der
