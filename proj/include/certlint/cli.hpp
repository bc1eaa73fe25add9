#pragma once

#include <certlint/profile.hpp>
#include <certlint/rules.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace certlint::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitLintFailure = 1;
inline constexpr int kExitUsage = 2;

/// Loads every certificate and CRL in a PEM or DER file. Each PEM block
/// becomes a subject with id "path#index". Unreadable or malformed input
/// yields subjects whose load_error is set; this function does not throw.
/// CRLs are declared SubjectClass::Crl, everything else Certificate.
std::vector<rules::Subject> load_file(const std::filesystem::path& path);

/// Picks the class suite for a certificate: cA=TRUE goes to ca, then the
/// robot CN pattern, then the host FQDN pattern, otherwise person.
rules::SubjectClass detect_class(const x509::Certificate& cert, const profile::CatalogConfig& config);

/// Runs the command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace certlint::cli
