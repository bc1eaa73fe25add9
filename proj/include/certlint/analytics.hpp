#pragma once

// Compliance over time: failure counts against certificate notBefore dates.

#include <certlint/rules.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace certlint::analytics {

class MissingResult : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

class DegenerateFit : public std::runtime_error {
public:
   using std::runtime_error::runtime_error;
};

struct CompliancePoint {
   std::string subject_id;
   /// Days since 1970-01-01 UTC of notBefore (fractional part is time of day).
   double t = 0.0;
   std::size_t failures = 0;
   std::string not_before_iso;
};

struct LinearFit {
   double slope = 0.0;      // failures per day
   double intercept = 0.0;  // failures at t = 0
   std::size_t n = 0;
   double residual_sum_squares = 0.0;
};

struct YearBucket {
   int year = 0;
   double mean_failures = 0.0;
   std::size_t count = 0;
};

/// One point per certificate, in input order. Throws MissingResult if a
/// certificate has no entry in `failures`.
std::vector<CompliancePoint> compliance_points(std::span<const rules::LoadedCertificate> certs,
                                               const std::map<std::string, std::size_t>& failures);

/// Ordinary least squares of failures on t.
LinearFit linear_fit(std::span<const CompliancePoint> points);

/// Calendar-year buckets, ascending, empty years omitted.
std::vector<YearBucket> yearly_average(std::span<const CompliancePoint> points);

/// "subject_id,t_days,not_before_iso8601,failures"
std::string points_csv(std::span<const CompliancePoint> points);
/// "slope_per_day=..., intercept=..., n=..."
std::string format_fit(const LinearFit& fit);

}  // namespace certlint::analytics
