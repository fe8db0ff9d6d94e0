#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rcover {

// points: (log2 1/scale, log2 count)
struct SlopeFit {
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

// Unweighted least squares through (x, y); needs >= 3 points with strictly increasing x.
SlopeFit fit_slope(std::vector<std::pair<double, double>> points);

// counts: (grid level n, number of occupied cubes)
SlopeFit box_dimension_fit(const std::vector<std::pair<int, double>>& counts);

// log2 of the measure of the ball of radius 2^log2_radius around a fixed point.
using MeasureAccessor = std::function<double(double log2_radius)>;

struct LocalDimProfile {
  std::string point;
  std::vector<double> log2_radii;  // decreasing
  std::vector<double> ratios;      // log mu(B(x,r)) / log r
  double liminf_estimate = 0.0;    // minimum over the finest half
};

LocalDimProfile local_dimension_profile(const MeasureAccessor& mu, std::string point, std::vector<double> log2_radii);

struct ProportionInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval.
ProportionInterval binomial_interval(std::uint64_t successes, std::uint64_t trials, double confidence);

// Two-sided standard normal quantile for the given confidence, e.g. 0.95 -> 1.96.
double normal_quantile_two_sided(double confidence);

void write_csv(std::ostream& os, const SlopeFit& fit);
void write_csv(std::ostream& os, const LocalDimProfile& profile);

}  // namespace rcover
