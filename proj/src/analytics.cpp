#include <certlint/analytics.hpp>

#include <cmath>

#include <fmt/format.h>

namespace certlint::analytics {

std::vector<CompliancePoint> compliance_points(std::span<const rules::LoadedCertificate> certs,
                                               const std::map<std::string, std::size_t>& failures) {
   std::vector<CompliancePoint> out;
   out.reserve(certs.size());
   for(const auto& c : certs) {
      const auto it = failures.find(c.subject_id);
      if(it == failures.end()) {
         throw MissingResult(fmt::format("no result for {}", c.subject_id));
      }
      const auto& nb = c.cert->not_before;
      CompliancePoint p;
      p.subject_id = c.subject_id;
      p.t = static_cast<double>(nb.seconds_since_epoch()) / 86400.0;
      p.failures = it->second;
      p.not_before_iso = nb.iso8601();
      out.push_back(std::move(p));
   }
   return out;
}

LinearFit linear_fit(std::span<const CompliancePoint> points) {
   const std::size_t n = points.size();
   if(n < 2) {
      throw DegenerateFit(fmt::format("need at least two points, got {}", n));
   }
   double t_mean = 0.0;
   double y_mean = 0.0;
   for(const auto& p : points) {
      t_mean += p.t;
      y_mean += static_cast<double>(p.failures);
   }
   t_mean /= static_cast<double>(n);
   y_mean /= static_cast<double>(n);

   double sxx = 0.0;
   double sxy = 0.0;
   for(const auto& p : points) {
      const double dt = p.t - t_mean;
      sxx += dt * dt;
      sxy += dt * (static_cast<double>(p.failures) - y_mean);
   }
   if(sxx == 0.0) {
      throw DegenerateFit("all points share one t value");
   }

   LinearFit fit;
   fit.n = n;
   fit.slope = sxy / sxx;
   fit.intercept = y_mean - fit.slope * t_mean;
   for(const auto& p : points) {
      const double r = static_cast<double>(p.failures) - (fit.intercept + fit.slope * p.t);
      fit.residual_sum_squares += r * r;
   }
   return fit;
}

std::vector<YearBucket> yearly_average(std::span<const CompliancePoint> points) {
   std::map<int, std::pair<double, std::size_t>> buckets;
   for(const auto& p : points) {
      const auto year = der::civil_from_days(static_cast<std::int64_t>(std::floor(p.t))).year;
      auto& [sum, count] = buckets[year];
      sum += static_cast<double>(p.failures);
      ++count;
   }
   std::vector<YearBucket> out;
   for(const auto& [year, b] : buckets) {
      out.push_back({year, b.first / static_cast<double>(b.second), b.second});
   }
   return out;
}

std::string points_csv(std::span<const CompliancePoint> points) {
   std::string out = "subject_id,t_days,not_before_iso8601,failures\n";
   for(const auto& p : points) {
      out += fmt::format("{},{:.6f},{},{}\n", p.subject_id, p.t, p.not_before_iso, p.failures);
   }
   return out;
}

std::string format_fit(const LinearFit& fit) {
   return fmt::format("slope_per_day={:.9g}, intercept={:.9g}, n={}", fit.slope, fit.intercept, fit.n);
}

}  // namespace certlint::analytics
