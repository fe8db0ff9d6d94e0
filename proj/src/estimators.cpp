#include "rcover/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "rcover/report.hpp"

namespace rcover {

SlopeFit fit_slope(std::vector<std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i].first > points[i - 1].first)) throw std::invalid_argument("slope fit scales must strictly decrease");
  double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : points) {
    if (!std::isfinite(y)) throw std::invalid_argument("slope fit needs positive counts");
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points = std::move(points);
  return f;
}

SlopeFit box_dimension_fit(const std::vector<std::pair<int, double>>& counts) {
  std::vector<std::pair<double, double>> pts;
  for (auto [n, c] : counts) {
    if (!(c > 0.0)) throw std::invalid_argument("box count must be positive");
    pts.emplace_back(static_cast<double>(n), std::log2(c));
  }
  return fit_slope(std::move(pts));
}

LocalDimProfile local_dimension_profile(const MeasureAccessor& mu, std::string point, std::vector<double> log2_radii) {
  if (log2_radii.empty()) throw std::invalid_argument("local dimension needs at least one radius");
  LocalDimProfile p;
  p.point = std::move(point);
  for (std::size_t i = 0; i < log2_radii.size(); ++i) {
    double lr = log2_radii[i];
    if (!(lr < -1.0)) throw std::invalid_argument("radii must lie in (0, 1/2)");
    if (i > 0 && !(lr < log2_radii[i - 1])) throw std::invalid_argument("radii must decrease");
    double lm = mu(lr);
    if (!std::isfinite(lm)) throw std::domain_error("zero-mass ball: point outside the support");
    p.ratios.push_back(lm / lr);
  }
  p.log2_radii = std::move(log2_radii);
  std::size_t half = p.ratios.size() / 2;
  p.liminf_estimate = *std::min_element(p.ratios.begin() + static_cast<std::ptrdiff_t>(half), p.ratios.end());
  return p;
}

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0,1)");
  boost::math::normal_distribution<double> z;
  return boost::math::quantile(z, 0.5 + confidence / 2.0);
}

ProportionInterval binomial_interval(std::uint64_t successes, std::uint64_t trials, double confidence) {
  if (trials == 0) throw std::invalid_argument("binomial interval needs trials >= 1");
  if (successes > trials) throw std::invalid_argument("successes exceed trials");
  double z = normal_quantile_two_sided(confidence);
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  ProportionInterval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) iv.lo = 0.0;
  if (successes == trials) iv.hi = 1.0;
  return iv;
}

void write_csv(std::ostream& os, const SlopeFit& fit) {
  os << "log2_inv_scale,log2_count\r\n";
  for (auto [x, y] : fit.points) os << format_double(x) << ',' << format_double(y) << "\r\n";
}

void write_csv(std::ostream& os, const LocalDimProfile& profile) {
  os << "point,log2_radius,ratio\r\n";
  for (std::size_t i = 0; i < profile.ratios.size(); ++i)
    os << csv_field(profile.point) << ',' << format_double(profile.log2_radii[i]) << ','
       << format_double(profile.ratios[i]) << "\r\n";
}

}  // namespace rcover
