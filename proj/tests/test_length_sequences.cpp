#include <doctest.h>

#include <cmath>

#include "rcover/length_sequences.hpp"
#include "rcover/rng.hpp"
#include "rcover/target_sets.hpp"

using namespace rcover;

namespace {

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

LengthSequenceSpec random_block_spec(CounterRng& rng, std::uint64_t i) {
  int nb = 3 + static_cast<int>(rng.bits(20, i) % 6);
  std::vector<LengthBlock> blocks;
  double log2_len = -1.0 - 3.0 * rng.uniform(21, i);
  double log2_first = 0.0;
  for (int b = 0; b < nb; ++b) {
    Magnitude first = b == 0 ? Magnitude::exact(1) : Magnitude::ceil_exp2(log2_first);
    blocks.push_back({log2_len, first});
    log2_first += 1.0 + 20.0 * rng.uniform(22, 8 * i + b);
    log2_len -= 1.0 + 30.0 * rng.uniform(23, 8 * i + b);
  }
  return LengthSequenceSpec::block_constant(blocks, Magnitude::ceil_exp2(log2_first));
}

CantorSchedule prop13_schedule(int depth) {
  std::vector<double> s, eps;
  for (int k = 1; k <= depth; ++k) {
    s.push_back(1.0 - std::ldexp(1.0, -k));
    eps.push_back(std::ldexp(1.0, -k));
  }
  return build_schedule_prop13(s, eps, depth);
}

}  // namespace

TEST_SUITE("length_sequences") {
  TEST_CASE("value_at examples") {
    CHECK(value_at(LengthSequenceSpec::power_law(0.5), 4) == doctest::Approx(1.0 / 32.0));
    CHECK(value_at(LengthSequenceSpec::explicit_lengths({0.5, 0.25}), 2) == 0.25);
    CHECK_THROWS_AS(value_at(LengthSequenceSpec::explicit_lengths({0.5, 0.25}), 3), std::out_of_range);
    CHECK_THROWS_AS(LengthSequenceSpec::power_law(0.5, 1, 0.75), std::invalid_argument);
    CHECK_THROWS_AS(LengthSequenceSpec::explicit_lengths({0.25, 0.5}), std::invalid_argument);
  }

  TEST_CASE("block constant value is delta_k on block k") {
    auto sched = prop13_schedule(3);
    auto spec = covering_sequence(sched);
    const auto& lv = sched.levels;
    for (std::uint64_t n = lv[0].block_first.value(); n < lv[0].block_end.value(); ++n)
      CHECK(log2_value_at(spec, n) == -static_cast<double>(lv[0].delta_exp));
    std::uint64_t f2 = lv[1].block_first.value();
    CHECK(log2_value_at(spec, f2) == -static_cast<double>(lv[1].delta_exp));
    CHECK(log2_value_at(spec, f2 - 1) == -static_cast<double>(lv[0].delta_exp));
  }

  TEST_CASE("value_at is non-increasing on random specs") {
    CounterRng rng(11);
    for (std::uint64_t i = 0; i < 50; ++i) {
      auto pl = LengthSequenceSpec::power_law(0.05 + 0.95 * rng.uniform(0, i));
      auto bl = random_block_spec(rng, i);
      double prev_p = 1.0, prev_b = 0.0;
      for (std::uint64_t n = 1; n < 3000; n += 1 + (n / 7)) {
        double v = value_at(pl, n);
        CHECK(v <= prev_p);
        prev_p = v;
        double w = log2_value_at(bl, n);
        CHECK(w <= prev_b);
        prev_b = w;
      }
    }
  }

  TEST_CASE("indices_with_length_in matches a scan") {
    std::vector<double> vals;
    for (int n = 1; n <= 300; ++n) vals.push_back(0.5 / std::sqrt(static_cast<double>(n)));
    for (const auto& spec : {LengthSequenceSpec::power_law(0.7), LengthSequenceSpec::explicit_lengths(vals)}) {
      CounterRng rng(12);
      for (std::uint64_t i = 0; i < 200; ++i) {
        double a = 0.5 * rng.uniform(0, i) * rng.uniform(1, i), b = 0.5 * rng.uniform(2, i);
        if (a > b) std::swap(a, b);
        auto [f, l] = indices_with_length_in(spec, a, b, 1, 300);
        std::uint64_t first = 0, last = 0, count = 0;
        for (std::uint64_t n = 1; n <= 300; ++n) {
          double v = value_at(spec, n);
          if (v >= a && v <= b) {
            if (!count) first = n;
            last = n;
            ++count;
          }
        }
        if (count == 0) {
          CHECK(f > l);
        } else {
          CHECK(f == first);
          CHECK(l == last);
        }
      }
    }
  }

  TEST_CASE("alpha exponents") {
    CHECK(alpha_exponent(LengthSequenceSpec::power_law(0.5)).value == 0.5);
    CHECK(critical_sum_exponent(LengthSequenceSpec::power_law(0.5)).value == 0.5);
    std::vector<double> geo;
    for (int n = 1; n <= 60; ++n) geo.push_back(std::ldexp(1.0, -n));
    auto g = alpha_exponent(LengthSequenceSpec::explicit_lengths(geo));
    CHECK(g.finite_horizon);
    CHECK(g.value < 0.2);
    CHECK(critical_sum_exponent(LengthSequenceSpec::explicit_lengths(geo)).value == g.value);
  }

  TEST_CASE("block sequences of prop13 schedules have alpha increasing toward 1") {
    double prev = 0.0;
    for (int depth = 2; depth <= 4; ++depth) {
      double a = alpha_exponent(covering_sequence(prop13_schedule(depth))).value;
      CHECK(a > prev);
      CHECK(a <= 1.0);
      prev = a;
    }
    CHECK(prev > 0.9);
  }

  TEST_CASE("alpha and critical sum exponent agree on random specs") {
    CounterRng rng(13);
    for (std::uint64_t i = 0; i < 100; ++i) {
      LengthSequenceSpec spec = (i % 2 == 0) ? LengthSequenceSpec::power_law(0.01 + 0.99 * rng.uniform(0, i))
                                             : random_block_spec(rng, i);
      CHECK(alpha_exponent(spec).value == critical_sum_exponent(spec).value);
    }
  }

  TEST_CASE("dyadic bands") {
    CHECK(dyadic_band(1.0) == 1);
    CHECK(dyadic_band(0.5) == 2);
    CHECK(dyadic_band(0.75) == 2);
    CHECK(dyadic_band(0.25) == 3);
    CHECK(dyadic_band_log2(-3.0) == 4);
    CHECK(dyadic_band_log2(-3.5) == 5);
    for (int k = 1; k < 60; ++k) {
      double lo = std::ldexp(1.0, 1 - k);
      CHECK(dyadic_band(lo) == k);
      CHECK(dyadic_band(std::nextafter(2.0 * lo, 0.0)) == k);
    }
  }

  TEST_CASE("census of power law matches integer square roots") {
    // l_n = n^-2 / 2 lies in band k iff 2^(k-3) < n^2 <= 2^(k-2).
    auto spec = LengthSequenceSpec::power_law(0.5, 1, 0.5);
    auto census = scale_census(spec, Magnitude::exact(1000000));
    int checked = 0;
    for (const auto& b : census.bands) {
      if (!b.complete) continue;
      std::int64_t k = b.k;
      std::uint64_t hi = isqrt(std::uint64_t{1} << (k - 2));
      std::uint64_t lo = k >= 3 ? isqrt(std::uint64_t{1} << (k - 3)) : 0;
      CHECK(b.count.value() == hi - lo);
      ++checked;
    }
    CHECK(checked >= 38);
    CHECK(census.total().value() == 1000000);
  }

  TEST_CASE("census of 2^-n has one length per band") {
    std::vector<double> geo;
    for (int n = 1; n <= 50; ++n) geo.push_back(std::ldexp(1.0, -n));
    auto census = scale_census(LengthSequenceSpec::explicit_lengths(geo), Magnitude::exact(50));
    CHECK(census.bands.size() == 50);
    for (const auto& b : census.bands) CHECK(b.count.value() == 1);
  }

  TEST_CASE("prop13 census has empty bands between blocks") {
    auto sched = prop13_schedule(3);
    auto spec = covering_sequence(sched);
    auto census = scale_census(spec, spec.last_index());
    std::int64_t k1 = dyadic_band_log2(-static_cast<double>(sched.levels[0].delta_exp));
    std::int64_t k2 = dyadic_band_log2(-static_cast<double>(sched.levels[1].delta_exp));
    CHECK(census.count(k1) == sched.levels[0].block_end - sched.levels[0].block_first);
    for (std::int64_t k = k1 + 1; k < k2; ++k) CHECK(census.count(k) == Magnitude::exact(0));
    CHECK(census.total().log2() == doctest::Approx(spec.last_index().log2()).epsilon(1e-9));
  }

  TEST_CASE("condition C diagnosis") {
    auto pl = condition_c_diagnose(scale_census(LengthSequenceSpec::power_law(0.5), Magnitude::exact(1000000)));
    CHECK(pl.verdict == ConditionCVerdict::consistent);
    CHECK(pl.limit_estimate == doctest::Approx(0.5).epsilon(0.05));

    auto sched = prop13_schedule(3);
    auto spec = covering_sequence(sched);
    auto census = scale_census(spec, spec.last_index());
    CHECK(census.last_band == dyadic_band_log2(-static_cast<double>(sched.levels[2].delta_exp)));
    auto p13 = condition_c_diagnose(census);
    CHECK(p13.verdict == ConditionCVerdict::violated);

    auto few = condition_c_diagnose(
        scale_census(LengthSequenceSpec::explicit_lengths({0.5, 0.25, 0.125, 0.0625}), Magnitude::exact(4)));
    CHECK(few.verdict == ConditionCVerdict::inconclusive);
  }

  TEST_CASE("Borel-Cantelli classification") {
    CHECK(borel_cantelli_classify(LengthSequenceSpec::power_law(1.0, 1)) == MeasureClass::full_measure);
    CHECK(borel_cantelli_classify(LengthSequenceSpec::power_law(0.5, 1)) == MeasureClass::measure_zero);
    CHECK(borel_cantelli_classify(LengthSequenceSpec::power_law(2.0, 2)) == MeasureClass::full_measure);
    CHECK(borel_cantelli_classify(LengthSequenceSpec::power_law(1.5, 2)) == MeasureClass::measure_zero);
    std::vector<double> harmonic;
    for (int n = 1; n <= 4096; ++n) harmonic.push_back(0.5 / n);
    CHECK(borel_cantelli_classify(LengthSequenceSpec::explicit_lengths(harmonic)) == MeasureClass::full_measure);
    std::vector<double> sq;
    for (int n = 1; n <= 4096; ++n) sq.push_back(0.5 / (static_cast<double>(n) * n));
    CHECK(borel_cantelli_classify(LengthSequenceSpec::explicit_lengths(sq)) == MeasureClass::measure_zero);
  }
}
