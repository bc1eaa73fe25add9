#include <certlint/x509.hpp>

#include <fmt/format.h>

namespace certlint::x509 {

namespace {

constexpr std::string_view kBegin = "-----BEGIN ";
constexpr std::string_view kEnd = "-----END ";
constexpr std::string_view kDashes = "-----";

int base64_value(char c) {
   if(c >= 'A' && c <= 'Z') {
      return c - 'A';
   }
   if(c >= 'a' && c <= 'z') {
      return c - 'a' + 26;
   }
   if(c >= '0' && c <= '9') {
      return c - '0' + 52;
   }
   if(c == '+') {
      return 62;
   }
   if(c == '/') {
      return 63;
   }
   return -1;
}

bool is_space(char c) {
   return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

}  // namespace

Bytes decode_base64(std::string_view text) {
   std::string clean;
   clean.reserve(text.size());
   for(const char c : text) {
      if(!is_space(c)) {
         clean.push_back(c);
      }
   }
   if(clean.size() % 4 != 0) {
      throw Error(Error::Code::BadBase64, fmt::format("base64 length {} is not a multiple of 4", clean.size()));
   }
   Bytes out;
   out.reserve(clean.size() / 4 * 3);
   for(std::size_t i = 0; i < clean.size(); i += 4) {
      const bool last = i + 4 == clean.size();
      int v[4];
      std::size_t pad = 0;
      for(std::size_t j = 0; j < 4; ++j) {
         const char c = clean[i + j];
         if(c == '=' && last && j >= 2) {
            v[j] = 0;
            ++pad;
            continue;
         }
         if(pad > 0 || (v[j] = base64_value(c)) < 0) {
            throw Error(Error::Code::BadBase64, fmt::format("invalid base64 character '{}'", c));
         }
      }
      const std::uint32_t word = (static_cast<std::uint32_t>(v[0]) << 18) | (static_cast<std::uint32_t>(v[1]) << 12) |
                                 (static_cast<std::uint32_t>(v[2]) << 6) | static_cast<std::uint32_t>(v[3]);
      out.push_back(static_cast<std::uint8_t>(word >> 16));
      if(pad < 2) {
         out.push_back(static_cast<std::uint8_t>(word >> 8));
      }
      if(pad < 1) {
         out.push_back(static_cast<std::uint8_t>(word));
      }
   }
   return out;
}

std::vector<PemBlock> decode_pem(std::string_view text) {
   std::vector<PemBlock> blocks;
   std::size_t pos = 0;
   while((pos = text.find(kBegin, pos)) != std::string_view::npos) {
      const std::size_t label_start = pos + kBegin.size();
      const std::size_t label_end = text.find(kDashes, label_start);
      if(label_end == std::string_view::npos) {
         throw Error(Error::Code::MismatchedMarkers, "unterminated BEGIN marker");
      }
      const auto label = text.substr(label_start, label_end - label_start);
      const std::size_t body_start = label_end + kDashes.size();
      const std::size_t end_pos = text.find(kEnd, body_start);
      if(end_pos == std::string_view::npos) {
         throw Error(Error::Code::MismatchedMarkers, fmt::format("no END marker for '{}'", label));
      }
      const std::size_t end_label_start = end_pos + kEnd.size();
      const std::size_t end_label_end = text.find(kDashes, end_label_start);
      if(end_label_end == std::string_view::npos) {
         throw Error(Error::Code::MismatchedMarkers, "unterminated END marker");
      }
      const auto end_label = text.substr(end_label_start, end_label_end - end_label_start);
      if(end_label != label) {
         throw Error(Error::Code::MismatchedMarkers,
                     fmt::format("BEGIN '{}' closed by END '{}'", label, end_label));
      }
      auto body = text.substr(body_start, end_pos - body_start);
      if(body.find(':') != std::string_view::npos) {
         throw Error(Error::Code::BadBase64, "encapsulated headers are not supported");
      }
      blocks.push_back({std::string(label), decode_base64(body)});
      pos = end_label_end + kDashes.size();
   }
   return blocks;
}

std::string encode_pem(std::string_view label, ByteView der) {
   static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
   std::string b64;
   for(std::size_t i = 0; i < der.size(); i += 3) {
      const std::size_t n = std::min<std::size_t>(3, der.size() - i);
      std::uint32_t word = static_cast<std::uint32_t>(der[i]) << 16;
      if(n > 1) {
         word |= static_cast<std::uint32_t>(der[i + 1]) << 8;
      }
      if(n > 2) {
         word |= der[i + 2];
      }
      b64.push_back(kAlphabet[(word >> 18) & 63]);
      b64.push_back(kAlphabet[(word >> 12) & 63]);
      b64.push_back(n > 1 ? kAlphabet[(word >> 6) & 63] : '=');
      b64.push_back(n > 2 ? kAlphabet[word & 63] : '=');
   }
   std::string out = fmt::format("-----BEGIN {}-----\n", label);
   for(std::size_t i = 0; i < b64.size(); i += 64) {
      out += b64.substr(i, 64);
      out += '\n';
   }
   out += fmt::format("-----END {}-----\n", label);
   return out;
}

}  // namespace certlint::x509
