#include <doctest.h>

#include <cmath>

#include "rcover/covering_simulator.hpp"
#include "rcover/estimators.hpp"

using namespace rcover;

TEST_SUITE("covering_simulator") {
  TEST_CASE("realizations are deterministic") {
    auto spec = LengthSequenceSpec::power_law(0.5, 2);
    auto a = realize(5, spec, 100), b = realize(5, spec, 100), c = realize(6, spec, 100);
    for (std::uint64_t j = 1; j <= 100; ++j) {
      CHECK(a.center(j)[0] == b.center(j)[0]);
      CHECK(a.center(j)[1] == b.center(j)[1]);
    }
    CHECK(a.center(1)[0] != c.center(1)[0]);
    auto one = realize(9, LengthSequenceSpec::power_law(0.5), 1);
    CHECK(one.center(1)[0] >= 0.0);
    CHECK(one.center(1)[0] < 1.0);
    CHECK_THROWS(realize(1, LengthSequenceSpec::explicit_lengths({0.5, 0.25}), 3));
  }

  TEST_CASE("centers pass a chi-square uniformity test") {
    auto r = realize(2024, LengthSequenceSpec::power_law(0.5), 100000);
    std::vector<double> bins(16, 0.0);
    for (std::uint64_t j = 1; j <= 100000; ++j) bins[static_cast<std::size_t>(r.center(j)[0] * 16)] += 1.0;
    double chi = 0.0, e = 100000.0 / 16.0;
    for (double b : bins) chi += (b - e) * (b - e) / e;
    CHECK(chi < 30.578);  // 99% quantile, 15 degrees of freedom
  }

  TEST_CASE("ball cubes of a fixed ball") {
    // Level-4 cubes inside [0.2, 0.8]: [k/16, (k+1)/16] for k = 4..11.
    TorusBall b({0.5}, 0.3);
    std::vector<std::uint64_t> inside, met;
    for_each_ball_cube(b, 4, StageMode::contained, [&](const DyadicCube& q) { inside.push_back(q.index(0)); });
    for_each_ball_cube(b, 4, StageMode::intersected, [&](const DyadicCube& q) { met.push_back(q.index(0)); });
    std::sort(inside.begin(), inside.end());
    std::sort(met.begin(), met.end());
    CHECK(inside == std::vector<std::uint64_t>{4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(met == std::vector<std::uint64_t>{3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  }

  TEST_CASE("stage_gridset matches brute force over all cubes") {
    for (int d = 1; d <= 2; ++d) {
      auto spec = LengthSequenceSpec::power_law(0.5 * d, d);
      auto r = realize(77, spec, 60);
      StageWindow w(3, 60);
      int level = d == 1 ? 9 : 5;
      GridSet c = stage_gridset(r, w, level, StageMode::contained);
      GridSet m = stage_gridset(r, w, level, StageMode::intersected);
      GridSet bc(d, level), bm(d, level);
      for (std::uint64_t i = 0; i < bc.cube_count(); ++i) {
        DyadicCube q = bc.cube_at(i);
        for (std::uint64_t j = w.first(); j <= w.last(); ++j) {
          if (ball_contains_cube(r.ball(j), q)) bc.insert_linear(i);
          if (ball_intersects_cube(r.ball(j), q)) bm.insert_linear(i);
        }
      }
      CHECK(c == bc);
      CHECK(m == bm);
      CHECK(c.subset_of(m));
    }
  }

  TEST_CASE("stage_gridset edge cases") {
    auto r = realize(3, LengthSequenceSpec::explicit_lengths({0.5, 0.5, 0.25}, 1), 3);
    // an open arc of length 1/2 meets 32 cubes of side 1/64 plus the one it starts in
    GridSet half = stage_gridset(r, StageWindow(1, 1), 6, StageMode::intersected);
    CHECK(half.popcount() == 33);
    CHECK(empty_gridset(2, 4).empty());
    CHECK_THROWS(StageWindow(5, 4));
  }

  TEST_CASE("intersected measure grows with the window") {
    auto spec = LengthSequenceSpec::power_law(0.8);
    auto r = realize(4, spec, 400);
    double prev = 0.0;
    for (std::uint64_t last = 10; last <= 400; last += 30) {
      double f = measure_fraction(stage_gridset(r, StageWindow(1, last), 10, StageMode::intersected));
      CHECK(f >= prev);
      prev = f;
    }
  }

  TEST_CASE("N(Q,n) counts") {
    auto spec = LengthSequenceSpec::power_law(0.5);
    auto r = realize(8, spec, 500);
    // Q = T: every index in the band counts.
    int n = 20;
    auto [f, l] = indices_with_length_in(spec, std::ldexp(1.0, -n), 1.0, 1, 500);
    CHECK(count_N_Q_n(r, DyadicCube(0, {0}), n) == l - f + 1);
    // brute force for Q at level 2
    DyadicCube q(2, {1});
    std::uint64_t brute = 0;
    for (std::uint64_t j = 1; j <= 500; ++j) {
      double lj = r.diameter(j);
      if (lj < std::ldexp(1.0, -n) || lj > 0.25) continue;
      double x = r.center(j)[0];
      brute += x >= 0.25 && x < 0.5;
    }
    CHECK(count_N_Q_n(r, q, n) == brute);
    std::uint64_t exact = 0;
    for (std::uint64_t j = 1; j <= 500; ++j) {
      if (r.diameter(j) > 0.25) continue;
      DyadicCube qj = cube_of_point(r.center(j), n);
      if (cube_subset(qj, q) && ball_contains_cube(r.ball(j), qj)) ++exact;
    }
    CHECK(count_N_Q_n(r, q, n, BandRule::exact_containment) == exact);
    // empty band
    auto tiny = LengthSequenceSpec::explicit_lengths({0.001, 0.001});
    CHECK(count_N_Q_n(realize(1, tiny, 2), DyadicCube(2, {0}), 3) == 0);
  }

  TEST_CASE("measure_fraction and hits") {
    GridSet e(1, 1), f(1, 1);
    CHECK(measure_fraction(e) == 0.0);
    CHECK(measure_fraction(GridSet::full(2, 3)) == 1.0);
    e.insert_linear(0);
    CHECK(measure_fraction(e) == 0.5);
    f.insert_linear(1);
    CHECK_FALSE(hits(e, f));
    CHECK(hits(e, e));
    CHECK(hits(e, GridSet::full(1, 6)));
    GridSet fine(1, 6);
    fine.insert_linear(5);
    CHECK(hits(e, fine));
    CHECK_FALSE(hits(f, fine));
  }

  TEST_CASE("hitting MC on trivial targets") {
    auto spec = LengthSequenceSpec::power_law(0.5);
    std::vector<StageWindow> ws{StageWindow(1, 10), StageWindow(11, 50), StageWindow(51, 100)};
    HittingMcOptions opt;
    opt.trials = 200;
    auto full = hitting_probability_mc(spec, GridSet::full(1, 8), ws, 8, opt);
    auto none = hitting_probability_mc(spec, GridSet(1, 8), ws, 8, opt);
    for (std::size_t k = 1; k < full.checks.size(); ++k) {
      CHECK(full.checks[k].estimate == 1.0);
      CHECK(none.checks[k].estimate == 0.0);
    }
  }

  TEST_CASE("hitting MC toward a Cantor grid increases with depth") {
    // middle-third level 8 at grid level 12
    GridSet target(1, 12);
    for (std::uint64_t i = 0; i < target.cube_count(); ++i) {
      double a = std::ldexp(static_cast<double>(i), -12), b = a + std::ldexp(1.0, -12);
      // cube meets the level-8 cover iff some level-8 interval overlaps it
      bool hit = false;
      for (std::uint64_t o = 0; o < 256 && !hit; ++o) {
        double lo = 0.0, len = 1.0;
        for (int d = 7; d >= 0; --d) {
          len /= 3.0;
          if ((o >> d) & 1) lo += 2.0 * len;
        }
        hit = lo < b && lo + len > a;
      }
      if (hit) target.insert_linear(i);
    }
    std::vector<StageWindow> ws{StageWindow(30, 40), StageWindow(300, 400), StageWindow(3000, 4000)};
    HittingMcOptions opt;
    opt.trials = 300;
    opt.predicted_direction = 1;
    auto rep = hitting_probability_mc(LengthSequenceSpec::power_law(0.5), target, ws, 12, opt);
    CHECK(rep.checks[0].verdict == Verdict::pass);
  }
}
