#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rcover/estimators.hpp"
#include "rcover/target_sets.hpp"

using namespace rcover;

namespace {

double wilson_hi(double k, double n, double z) {
  double p = k / n;
  double den = 1 + z * z / n;
  return (p + z * z / (2 * n) + z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n))) / den;
}

}  // namespace

TEST_SUITE("estimators") {
  TEST_CASE("normal quantiles") {
    CHECK(normal_quantile_two_sided(0.95) == doctest::Approx(1.959963984540054));
    CHECK(normal_quantile_two_sided(0.99) == doctest::Approx(2.5758293035489));
    CHECK_THROWS(normal_quantile_two_sided(1.0));
  }

  TEST_CASE("Wilson interval") {
    auto zero = binomial_interval(0, 100, 0.95);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi == doctest::Approx(0.03699).epsilon(1e-3));
    CHECK(zero.hi == doctest::Approx(wilson_hi(0, 100, 1.959963984540054)));
    auto half = binomial_interval(50, 100, 0.95);
    CHECK(half.lo + half.hi == doctest::Approx(1.0));
    auto all = binomial_interval(100, 100, 0.95);
    CHECK(all.hi == 1.0);
    CHECK(all.lo == doctest::Approx(1.0 - zero.hi));
    for (std::uint64_t k : {0u, 3u, 17u, 60u}) {
      auto a = binomial_interval(k, 100, 0.99);
      CHECK(a.hi == doctest::Approx(wilson_hi(static_cast<double>(k), 100, 2.5758293035489)));
      CHECK(a.lo <= k / 100.0);
      CHECK(a.hi >= k / 100.0);
    }
    auto small = binomial_interval(30, 100, 0.95), big = binomial_interval(3000, 10000, 0.95);
    CHECK(big.hi - big.lo < small.hi - small.lo);
    CHECK_THROWS(binomial_interval(5, 0, 0.95));
    CHECK_THROWS(binomial_interval(5, 4, 0.95));
  }

  TEST_CASE("least squares") {
    auto f = fit_slope({{0, 1}, {1, 3}, {2, 5}, {3, 7}});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    auto g = fit_slope({{0, 0}, {1, 1}, {2, 0}, {3, 1}});
    CHECK(g.slope == doctest::Approx(0.2));
    CHECK(g.r2 < 1.0);
    CHECK_THROWS(fit_slope({{0, 0}, {1, 1}}));
    CHECK_THROWS(fit_slope({{0, 0}, {1, 1}, {1, 2}}));
  }

  TEST_CASE("box dimension of grid images") {
    auto levels = build_levels(TargetSetSpec::self_similar(1.0 / 3.0, 2), 14);
    std::vector<std::pair<int, double>> counts;
    for (int n = 8; n <= 20; n += 2) counts.push_back({n, static_cast<double>(to_gridset(levels.back(), n).popcount())});
    CHECK(std::abs(box_dimension_fit(counts).slope - std::log(2.0) / std::log(3.0)) < 0.05);
    std::vector<std::pair<int, double>> full;
    for (int n = 1; n <= 6; ++n) full.push_back({n, static_cast<double>(GridSet::full(1, n).popcount())});
    CHECK(box_dimension_fit(full).slope == doctest::Approx(1.0));
  }

  TEST_CASE("local dimension profiles") {
    std::vector<double> radii;
    for (int j = 2; j <= 21; ++j) radii.push_back(-j);
    auto leb = local_dimension_profile([](double lr) { return lr + 1.0; }, "x", radii);  // mu(B(x,r)) = 2r
    CHECK(leb.ratios.size() == radii.size());
    CHECK(leb.ratios.back() == doctest::Approx(1.0 - 1.0 / 21));
    CHECK(leb.liminf_estimate == doctest::Approx(1.0 - 1.0 / 12));
    // Cantor measure at 0: mu(B(0, 3^-k)) = 2^-k
    double s = std::log(2.0) / std::log(3.0);
    std::vector<double> cr;
    for (int k = 1; k <= 30; ++k) cr.push_back(-k * std::log2(3.0));
    auto cant = local_dimension_profile([&](double lr) { return lr * s; }, "0", cr);
    for (double r : cant.ratios) CHECK(r == doctest::Approx(s));
    CHECK(cant.liminf_estimate == doctest::Approx(s));
  }

  TEST_CASE("csv output") {
    std::ostringstream os;
    write_csv(os, fit_slope({{0, 1}, {1, 3}, {2, 5}}));
    CHECK(os.str() == "log2_inv_scale,log2_count\r\n0,1\r\n1,3\r\n2,5\r\n");
    std::ostringstream os2;
    write_csv(os2, local_dimension_profile([](double lr) { return lr; }, "p", {-2, -3, -4}));
    CHECK(os2.str().find("p") != std::string::npos);
  }
}
