#include <doctest.h>

#include <cmath>

#include "rcover/intersection_set.hpp"

using namespace rcover;

namespace {

std::size_t scale_index(const IntersectionSet& g, const std::string& name) {
  const auto& sc = g.scales();
  for (std::size_t i = 0; i < sc.size(); ++i)
    if (sc[i].name == name) return i;
  FAIL("missing scale " << name);
  return 0;
}

}  // namespace

TEST_SUITE("intersection_set") {
  TEST_CASE("counts follow the schedule") {
    auto s = build_schedule_prop14(0.3, 0.6, {}, {}, 2);
    IntersectionSet g(s, 7);
    CHECK(g.node_levels() == 4);
    CHECK(g.precision_bits() == s.levels[1].eta_exp + 64);
    CHECK(g.log2_count(0) == 0.0);
    for (int k = 1; k <= 2; ++k) {
      CHECK(g.log2_count(2 * k - 1) == doctest::Approx(s.levels[k - 1].L.log2()).epsilon(1e-9));
      CHECK(g.log2_count(2 * k) == doctest::Approx(s.levels[k - 1].M.log2()).epsilon(1e-9));
    }
    CHECK_THROWS_AS(g.log2_count(5), std::out_of_range);
    auto pts = g.box_count_points();
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].first == doctest::Approx(static_cast<double>(s.levels[0].delta_exp)));
    CHECK(pts[1].first == doctest::Approx(static_cast<double>(s.levels[0].eta_exp)));
  }

  TEST_CASE("scales decrease") {
    IntersectionSet g(build_schedule_prop14(0.3, 0.6, {}, {}, 2), 7);
    const auto& sc = g.scales();
    REQUIRE(sc.size() == 7);
    for (std::size_t i = 1; i < sc.size(); ++i) CHECK(sc[i].log2_radius < sc[i - 1].log2_radius);
    CHECK(sc[0].log2_radius == doctest::Approx(-4.0));
  }

  TEST_CASE("ball masses") {
    auto s = build_schedule_prop14(0.3, 0.6, {}, {}, 2);
    IntersectionSet g(s, 3);
    for (std::uint64_t i = 0; i < 4; ++i) {
      auto p = g.sample_point(i);
      CHECK_FALSE(g.describe_point(p).empty());
      double prev_lo = 1.0, prev_hi = 1.0;
      for (std::size_t j = 0; j < g.scales().size(); ++j) {
        auto [lo, hi] = g.log2_ball_mass(p, j);
        CHECK(lo <= hi + 1e-12);
        CHECK(hi <= 1e-12);
        CHECK(lo <= prev_lo + 1e-12);
        CHECK(hi <= prev_hi + 1e-12);
        prev_lo = lo;
        prev_hi = hi;
      }
      // a ball of radius delta_k (eta_k) around a point of G holds exactly its I_k (J_k) node
      for (int k = 1; k <= 2; ++k) {
        auto [dl, dh] = g.log2_ball_mass(p, scale_index(g, "delta_" + std::to_string(k)));
        CHECK(dl == doctest::Approx(-s.levels[k - 1].L.log2()).epsilon(1e-9));
        CHECK(dh == doctest::Approx(-s.levels[k - 1].L.log2()).epsilon(1e-9));
        auto [el, eh] = g.log2_ball_mass(p, scale_index(g, "eta_" + std::to_string(k)));
        CHECK(el == doctest::Approx(-s.levels[k - 1].M.log2()).epsilon(1e-9));
        CHECK(eh == doctest::Approx(-s.levels[k - 1].M.log2()).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("deterministic in the seed") {
    auto s = build_schedule_prop14(0.6, 0.3, {}, {}, 2);
    IntersectionSet a(s, 11), b(s, 11);
    auto pa = a.sample_point(5), pb = b.sample_point(5);
    CHECK(a.describe_point(pa) == b.describe_point(pb));
    for (std::size_t j = 0; j < a.scales().size(); ++j) CHECK(a.log2_ball_mass(pa, j) == b.log2_ball_mass(pb, j));
  }

  TEST_CASE("rejects unsupported schedules") {
    CHECK_THROWS_AS(IntersectionSet(build_schedule_prop14(0.0, 0.6, {}, {}, 2), 1), std::invalid_argument);
    CHECK_THROWS_AS(IntersectionSet(generic_schedule({1}, {2}), 1), std::invalid_argument);
  }
}
