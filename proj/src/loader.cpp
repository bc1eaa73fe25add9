#include <certlint/cli.hpp>

#include <fstream>
#include <iterator>
#include <regex>

#include <fmt/format.h>

namespace certlint::cli {

namespace {

bool is_crl_label(std::string_view label) {
   return label == "X509 CRL" || label == "CRL";
}

bool is_certificate_label(std::string_view label) {
   return label == "CERTIFICATE" || label == "X509 CERTIFICATE" || label == "TRUSTED CERTIFICATE";
}

rules::Subject failed(std::string id, rules::SubjectClass declared, std::string error) {
   rules::Subject s;
   s.id = std::move(id);
   s.declared = declared;
   s.load_error = std::move(error);
   return s;
}

rules::Subject load_block(std::string id, std::string_view label, const der::Bytes& der) {
   rules::Subject s;
   s.id = std::move(id);
   if(is_crl_label(label)) {
      s.declared = rules::SubjectClass::Crl;
      try {
         s.object = x509::parse_crl(der);
      } catch(const std::exception& e) {
         s.load_error = e.what();
      }
      return s;
   }
   s.declared = rules::SubjectClass::Certificate;
   if(!is_certificate_label(label)) {
      s.load_error = fmt::format("unsupported PEM label '{}'", label);
      return s;
   }
   try {
      s.object = x509::parse_certificate(der);
   } catch(const std::exception& e) {
      s.load_error = e.what();
   }
   return s;
}

}  // namespace

std::vector<rules::Subject> load_file(const std::filesystem::path& path) {
   const std::string base = path.string();
   std::ifstream in(path, std::ios::binary);
   if(!in) {
      return {failed(base + "#0", rules::SubjectClass::Certificate, "cannot read file")};
   }
   const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

   if(data.find("-----BEGIN ") != std::string::npos) {
      std::vector<x509::PemBlock> blocks;
      try {
         blocks = x509::decode_pem(data);
      } catch(const std::exception& e) {
         return {failed(base + "#0", rules::SubjectClass::Certificate, e.what())};
      }
      std::vector<rules::Subject> out;
      for(std::size_t i = 0; i < blocks.size(); ++i) {
         out.push_back(load_block(fmt::format("{}#{}", base, i), blocks[i].label, blocks[i].der));
      }
      return out;
   }

   const der::Bytes der(data.begin(), data.end());
   if(der.empty()) {
      return {failed(base + "#0", rules::SubjectClass::Certificate, "file is empty")};
   }
   rules::Subject s = load_block(base + "#0", "CERTIFICATE", der);
   if(!s.loaded()) {
      rules::Subject as_crl = load_block(base + "#0", "X509 CRL", der);
      if(as_crl.loaded()) {
         return {std::move(as_crl)};
      }
   }
   return {std::move(s)};
}

rules::SubjectClass detect_class(const x509::Certificate& cert, const profile::CatalogConfig& config) {
   if(const auto* e = cert.find_extension(x509::oids::kBasicConstraints)) {
      if(const auto* bc = e->as<x509::BasicConstraints>(); bc && bc->ca) {
         return rules::SubjectClass::CA;
      }
   }
   const auto cns = x509::query_name(cert.subject, x509::oids::kCommonName);
   if(cns.empty()) {
      return rules::SubjectClass::Person;
   }
   const std::regex robot(config.robot_cn_pattern);
   const std::regex host(config.host_fqdn_pattern);
   if(std::regex_search(cns.front().value, robot)) {
      return rules::SubjectClass::Robot;
   }
   if(std::regex_search(cns.front().value, host)) {
      return rules::SubjectClass::Host;
   }
   return rules::SubjectClass::Person;
}

}  // namespace certlint::cli
