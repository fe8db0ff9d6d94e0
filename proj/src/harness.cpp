#include "rcover/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rcover/estimators.hpp"
#include "rcover/intersection_set.hpp"
#include "rcover/parallel.hpp"
#include "rcover/rng.hpp"

namespace rcover {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kConfidence = 0.99;
constexpr double kSlack = 1e-9;

std::string window_name(const StageWindow& w) {
  return "window=[" + std::to_string(w.first()) + "," + std::to_string(w.last()) + "]";
}

void require_trials(int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

// Half-length l/2 as a 64-bit fixed point fraction.
std::uint64_t fixed_half(double l) {
  double h = std::ldexp(l / 2.0, 64);
  if (h >= 0x1p64) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(h);
}

Check three_se_check(std::string name, std::string setting, const std::vector<double>& samples, double theory) {
  double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var = samples.size() > 1 ? var / (n - 1.0) : 0.0;
  double se = std::sqrt(var / n);
  return make_check(std::move(name), std::move(setting), mean, mean - 3.0 * se - kSlack, mean + 3.0 * se + kSlack,
                    theory, TheoryKind::exact);
}

Check frequency_check(std::string name, std::string setting, std::uint64_t hits, std::uint64_t trials, double theory,
                      TheoryKind kind) {
  auto iv = binomial_interval(hits, trials, kConfidence);
  return make_check(std::move(name), std::move(setting), static_cast<double>(hits) / static_cast<double>(trials),
                    iv.lo, iv.hi, theory, kind);
}

Check trend_check(std::string name, std::string setting, std::vector<double> series, int direction) {
  double last = series.empty() ? 0.0 : series.back();
  return make_check(std::move(name), std::move(setting), last, last, last, static_cast<double>(direction),
                    TheoryKind::limit_trend, std::move(series));
}

}  // namespace

nlohmann::json to_json(const LengthSequenceSpec& spec) {
  nlohmann::json j;
  j["d"] = spec.dim();
  std::visit(Overloaded{
                 [&](const PowerLaw& p) {
                   j["variant"] = "power_law";
                   j["alpha"] = p.alpha;
                   j["c"] = p.c;
                 },
                 [&](const BlockConstant& b) {
                   j["variant"] = "block_constant";
                   nlohmann::json blocks = nlohmann::json::array();
                   for (const auto& blk : b.blocks)
                     blocks.push_back({{"log2_length", blk.log2_length}, {"first_index", blk.first_index.to_string()}});
                   j["blocks"] = blocks;
                   j["end_index"] = b.end_index.to_string();
                 },
                 [&](const ExplicitLengths& e) {
                   j["variant"] = "explicit";
                   j["values"] = e.values;
                 },
             },
             spec.variant());
  return j;
}

ExperimentReport verify_moment_lemma(int n0, int d, const LengthSequenceSpec& spec, StageWindow window, int trials,
                                     std::uint64_t seed, int threads) {
  require_trials(trials);
  if (spec.dim() != d) throw std::invalid_argument("moment lemma: spec dimension differs from d");
  if (n0 < 0 || n0 * d > 60) throw std::invalid_argument("moment lemma: n0 out of range");
  Magnitude last = spec.last_index();
  if (last.is_exact() && window.last() > last.value()) throw std::invalid_argument("window beyond the sequence");

  double root_d = std::sqrt(static_cast<double>(d));
  double min_l = std::numeric_limits<double>::infinity();
  for (std::uint64_t j = window.first(); j <= window.last(); ++j) min_l = std::min(min_l, value_at(spec, j));
  int n = n0;
  while (n < 62 && std::ldexp(root_d, -n) > min_l) ++n;

  double band_lo = std::ldexp(root_d, -n), band_hi = std::ldexp(root_d, -n0);
  std::vector<std::uint64_t> band;
  for (std::uint64_t j = window.first(); j <= window.last(); ++j) {
    double l = value_at(spec, j);
    if (l >= band_lo && l <= band_hi) band.push_back(j);
  }
  if (band.empty()) throw std::invalid_argument("degenerate window: L_n = 0");
  if (band.size() < 100) throw std::invalid_argument("moment lemma needs L_n >= 100, window gives " + std::to_string(band.size()));

  std::vector<double> N(static_cast<std::size_t>(trials));
  parallel_for(N.size(), threads, [&](std::size_t t) {
    CenterStream cs(seed + t, d);
    std::uint64_t count = 0;
    for (std::uint64_t j : band) {
      bool inside = true;
      for (int c = 0; c < d && inside; ++c) inside = top_bits(cs.word(j, c), n0) == 0;
      count += inside;
    }
    N[t] = static_cast<double>(count);
  });

  double L = static_cast<double>(band.size());
  double p = std::ldexp(1.0, -n0 * d);
  double mean = p * L;
  double second = p * L + (L * L - L) * p * p;
  std::vector<double> sq(N.size());
  std::uint64_t deviations = 0;
  for (std::size_t t = 0; t < N.size(); ++t) {
    sq[t] = N[t] * N[t];
    if (std::abs(N[t] - mean) >= mean / 2.0) ++deviations;
  }

  ExperimentReport rep;
  rep.name = "moment_lemma";
  rep.parameters = {{"n0", n0},     {"d", d},           {"n", n},       {"L_n", band.size()},
                    {"window", {window.first(), window.last()}}, {"trials", trials}, {"seed", seed},
                    {"spec", to_json(spec)}};
  std::string setting = "n0=" + std::to_string(n0) + " L_n=" + std::to_string(band.size());
  rep.checks.push_back(three_se_check("mean", setting, N, mean));
  rep.checks.push_back(three_se_check("second_moment", setting, sq, second));
  rep.checks.push_back(frequency_check("deviation_frequency", setting, deviations, N.size(),
                                       std::ldexp(1.0, n0 * d + 2) / L, TheoryKind::upper_bound));
  rep.finalize();
  return rep;
}

namespace {

double coincidence_bound(int n0, int n, double s, double t, int d) {
  double base = 1.0 - std::exp2(n0 + n * (s - d));
  base = std::clamp(base, 0.0, 1.0);
  double L = std::ceil(std::exp2(n * t));
  return std::pow(base, L);
}

}  // namespace

ExperimentReport verify_coincidence_lemma(int n0, const std::vector<int>& ns, double s, double t, int d, int trials,
                                          std::uint64_t seed, int threads) {
  require_trials(trials);
  if (ns.empty()) throw std::invalid_argument("coincidence lemma needs at least one n");
  if (d < 1 || n0 < 0) throw std::invalid_argument("coincidence lemma: bad d or n0");
  if (!(s >= 0.0 && s <= d && t >= 0.0 && t <= d)) throw std::invalid_argument("coincidence lemma: s, t must lie in [0, d]");
  bool graded = s + t > d;

  ExperimentReport rep;
  rep.name = "coincidence_lemma";
  rep.parameters = {{"n0", n0}, {"n", ns}, {"s", s}, {"t", t}, {"d", d}, {"trials", trials}, {"seed", seed},
                    {"hypothesis_s_plus_t_gt_d", graded}};
  nlohmann::json exact = nlohmann::json::array();

  for (int n : ns) {
    if (n < n0) throw std::invalid_argument("coincidence lemma needs n >= n0");
    int bits = n - n0;
    if (bits * d > 62 || n * s > 61 || n * t > 40) throw std::invalid_argument("coincidence lemma: n too large");
    std::uint64_t M = std::uint64_t{1} << (bits * d);
    std::uint64_t K = std::min(Magnitude::ceil_exp2(n * s).value(), M);
    std::uint64_t L = Magnitude::ceil_exp2(n * t).value();

    std::vector<std::uint8_t> miss(static_cast<std::size_t>(trials));
    parallel_for(miss.size(), threads, [&](std::size_t tr) {
      CounterRng rng(seed + tr);
      bool hit = false;
      for (std::uint64_t i = 0; i < L && !hit; ++i) {
        std::uint64_t linear = 0;
        for (int c = 0; c < d; ++c) {
          std::uint64_t idx = (static_cast<std::uint64_t>(n) << 40) + i * static_cast<std::uint64_t>(d) + c;
          linear |= top_bits(rng.bits(streams::coincidence, idx), bits) << (bits * c);
        }
        hit = linear < K;
      }
      miss[tr] = !hit;
    });
    std::uint64_t misses = 0;
    for (auto m : miss) misses += m;
    double bound = coincidence_bound(n0, n, s, t, d);
    exact.push_back({{"n", n}, {"K", K}, {"L", L}, {"cubes", M},
                     {"miss_probability", std::pow(1.0 - static_cast<double>(K) / static_cast<double>(M), static_cast<double>(L))}});
    rep.checks.push_back(frequency_check("miss_frequency", "n=" + std::to_string(n), misses, miss.size(),
                                         graded ? bound : NAN, TheoryKind::upper_bound));
  }

  std::vector<int> trend_n = ns;
  if (trend_n.size() < 3) trend_n = {ns.back(), ns.back() + 2, ns.back() + 4};
  std::vector<double> bounds;
  std::string setting = "n=";
  for (std::size_t i = 0; i < trend_n.size(); ++i) {
    bounds.push_back(coincidence_bound(n0, trend_n[i], s, t, d));
    setting += (i ? "," : "") + std::to_string(trend_n[i]);
  }
  Check trend = trend_check("bound_trend", setting, bounds, -1);
  if (!graded) {
    trend.theory_value = NAN;
    trend.verdict = Verdict::inconclusive;
  }
  rep.checks.push_back(trend);
  rep.parameters["exact"] = exact;
  rep.finalize();
  return rep;
}

ExperimentReport verify_covering_lemma(const std::vector<double>& etas, double beta, double alpha, double c, double C,
                                       int trials, std::uint64_t seed, int threads) {
  require_trials(trials);
  if (etas.empty()) throw std::invalid_argument("covering lemma needs at least one eta");
  if (!(beta > 0.0 && beta < alpha && alpha < 1.0))
    throw std::invalid_argument("covering lemma needs 0 < beta < alpha < 1");
  if (!(c > 0.0) || C < 0.0) throw std::invalid_argument("covering lemma needs c > 0 and C >= 0");

  ExperimentReport rep;
  rep.name = "covering_lemma";
  rep.parameters = {{"eta", etas}, {"beta", beta}, {"alpha", alpha}, {"c", c},
                    {"C", C},      {"trials", trials}, {"seed", seed}};
  std::vector<double> freqs;
  std::string setting_all = "eta=";
  for (std::size_t k = 0; k < etas.size(); ++k) {
    double eta = etas[k];
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("covering lemma needs 0 < eta < 1");
    double top = c * std::pow(eta, -alpha);
    if (!(top > C)) throw std::invalid_argument("covering lemma needs c eta^-alpha > C");
    auto first = static_cast<std::uint64_t>(std::floor(C)) + 1;
    auto last = static_cast<std::uint64_t>(std::floor(top));
    std::uint64_t count = last >= first ? last - first + 1 : 0;
    double len = std::pow(eta, beta);
    bool always = len >= 1.0;
    std::uint64_t A = always ? ~std::uint64_t{0} : static_cast<std::uint64_t>(std::ldexp(len, 64));

    std::vector<std::uint8_t> fail(static_cast<std::size_t>(trials));
    parallel_for(fail.size(), threads, [&](std::size_t tr) {
      if (always) return;
      if (count == 0) {
        fail[tr] = 1;
        return;
      }
      CounterRng rng(seed + tr);
      std::vector<std::uint64_t> starts;
      starts.reserve(count);
      for (std::uint64_t n = first; n <= last; ++n)
        starts.push_back(unit_fixed(rng.bits(streams::cover_arcs, (static_cast<std::uint64_t>(k) << 40) + n)));
      std::sort(starts.begin(), starts.end());
      // Arcs [x, x + A] cover the circle iff no cyclic gap between starts exceeds A.
      bool covered = true;
      if (starts.size() == 1) covered = false;
      for (std::size_t i = 0; i + 1 < starts.size() && covered; ++i) covered = starts[i + 1] - starts[i] <= A;
      if (covered && starts.size() > 1) covered = starts.front() - starts.back() <= A;
      fail[tr] = !covered;
    });
    std::uint64_t failures = 0;
    for (auto f : fail) failures += f;
    double bound = 3.0 * std::pow(eta, -beta) * std::pow(1.0 - len / 2.0, top - C);
    std::string setting = "eta=" + format_double(eta);
    rep.checks.push_back(frequency_check("noncover_frequency", setting, failures, fail.size(), bound, TheoryKind::upper_bound));
    freqs.push_back(static_cast<double>(failures) / trials);
    setting_all += (k ? "," : "") + format_double(eta);
  }
  rep.checks.push_back(trend_check("noncover_trend", setting_all, freqs, -1));
  rep.finalize();
  return rep;
}

ExperimentReport dichotomy_experiment(const LengthSequenceSpec& spec, const TargetSetSpec& target,
                                      const std::vector<StageWindow>& windows, int trials, std::uint64_t seed,
                                      int threads) {
  require_trials(trials);
  if (spec.dim() != 1) throw std::invalid_argument("dichotomy experiment runs on the circle (d = 1)");
  if (windows.empty()) throw std::invalid_argument("at least one window is required");
  Magnitude last_index = spec.last_index();
  std::uint64_t horizon = 0;
  for (const auto& w : windows) horizon = std::max(horizon, w.last());
  if (last_index.is_exact() && horizon > last_index.value()) throw std::invalid_argument("window beyond the sequence");

  TargetGeometry geom(target);
  DimensionPair dims = analytic_dimensions(target);
  double alpha = alpha_exponent(spec).value;
  double critical = 1.0 - alpha;
  int direction = 0;
  if (dims.hausdorff > critical) direction = 1;
  else if (dims.packing < critical) direction = -1;

  std::size_t nw = windows.size();
  std::vector<std::vector<std::uint64_t>> halves(nw);
  for (std::size_t k = 0; k < nw; ++k)
    for (std::uint64_t j = windows[k].first(); j <= windows[k].last(); ++j)
      halves[k].push_back(fixed_half(value_at(spec, j)));

  std::vector<std::uint8_t> hit(static_cast<std::size_t>(trials) * nw, 0);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    CenterStream cs(seed + t, 1);
    for (std::size_t k = 0; k < nw; ++k) {
      bool found = false;
      std::uint64_t j = windows[k].first();
      for (std::size_t i = 0; i < halves[k].size() && !found; ++i, ++j) found = geom.meets_arc(cs.word(j, 0), halves[k][i]);
      hit[t * nw + k] = found;
    }
  });

  ExperimentReport rep;
  rep.name = "dichotomy";
  rep.parameters = {{"spec", to_json(spec)},
                    {"target", target.name()},
                    {"alpha", alpha},
                    {"dim_H", dims.hausdorff},
                    {"dim_P", dims.packing},
                    {"dims_rigorous", dims.rigorous},
                    {"critical_dimension", critical},
                    {"predicted_direction", direction},
                    {"exact_geometry", geom.exact()},
                    {"trials", trials},
                    {"seed", seed}};
  std::vector<double> series;
  std::string setting_all = "windows=";
  std::vector<std::uint64_t> hits_per_window(nw, 0);
  for (std::size_t k = 0; k < nw; ++k) {
    for (int t = 0; t < trials; ++t) hits_per_window[k] += hit[static_cast<std::size_t>(t) * nw + k];
    series.push_back(static_cast<double>(hits_per_window[k]) / trials);
    setting_all += (k ? ";" : "") + std::to_string(windows[k].first()) + "-" + std::to_string(windows[k].last());
  }
  rep.checks.push_back(trend_check("hit_trend", setting_all, series, direction));
  for (std::size_t k = 0; k < nw; ++k)
    rep.checks.push_back(
        frequency_check("hit_frequency", window_name(windows[k]), hits_per_window[k], trials, NAN, TheoryKind::exact));

  // P(hit) = 1 - prod (1 - |F_{l_j/2}|) when the neighbourhood measure is known.
  const StageWindow& deep = windows.back();
  double log_miss = 0.0;
  bool known = geom.exact();
  for (std::uint64_t j = deep.first(); j <= deep.last() && known; ++j) {
    double m = geom.neighbourhood_measure(value_at(spec, j) / 2.0);
    if (std::isnan(m)) known = false;
    else log_miss += std::log1p(-std::min(m, 1.0));
  }
  if (known) {
    double p = -std::expm1(log_miss);
    double f = series.back();
    double se = std::sqrt(p * (1.0 - p) / trials);
    rep.checks.push_back(make_check("deepest_hit_exact", window_name(deep), f, f - 3.0 * se - kSlack,
                                    f + 3.0 * se + kSlack, p, TheoryKind::exact));
  }
  rep.finalize();
  return rep;
}

ExperimentReport prop13_experiment(const std::vector<double>& s, const std::vector<double>& eps, int depth, int trials,
                                   std::uint64_t seed, int threads) {
  require_trials(trials);
  CantorSchedule schedule = build_schedule_prop13(s, eps, depth);
  const auto& lv = schedule.levels;

  CantorSchedule first_level = schedule;
  first_level.levels.resize(1);
  TargetGeometry f1(TargetSetSpec::scheduled(first_level));
  TargetGeometry full(TargetSetSpec::full_torus());
  double l1 = std::exp2(-static_cast<double>(lv[0].delta_exp));
  std::uint64_t h1 = fixed_half(l1);
  std::uint64_t b1_first = lv[0].block_first.value(), b1_end = lv[0].block_end.value();

  // Probability that a block of B balls of diameter delta_k meets the N_k
  // separated intervals of length delta_k: 1 - (1 - 2 N_k delta_k)^B.
  std::vector<double> p(lv.size());
  for (std::size_t k = 0; k < lv.size(); ++k) {
    double log2_x = lv[k].N.log2() + 1.0 - static_cast<double>(lv[k].delta_exp);
    double log2_B = (lv[k].block_end - lv[k].block_first).log2();
    if (log2_x >= 0.0) {
      p[k] = 1.0;
    } else if (log2_x < -40.0) {
      // log1p(-x) = -x to double precision
      p[k] = -std::expm1(-std::exp2(log2_B + log2_x));
    } else {
      p[k] = -std::expm1(std::exp2(log2_B) * std::log1p(-std::exp2(log2_x)));
    }
  }

  std::size_t nb = lv.size();
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(trials) * nb, 0);
  std::vector<std::uint8_t> sanity(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    CenterStream cs(seed + t, 1);
    bool h = false, hs = false;
    for (std::uint64_t j = b1_first; j < b1_end; ++j) {
      std::uint64_t c = cs.word(j, 0);
      if (!h) h = f1.meets_arc(c, h1);
      if (!hs) hs = full.meets_arc(c, h1);
    }
    hit[t * nb] = h;
    sanity[t] = hs;
    CounterRng rng(seed + t);
    for (std::size_t k = 1; k < nb; ++k) hit[t * nb + k] = rng.uniform(streams::block_hits, k) < p[k];
  });

  ExperimentReport rep;
  rep.name = "prop13";
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t k = 0; k < nb; ++k)
    blocks.push_back({{"k", lv[k].k},
                      {"m", lv[k].m},
                      {"n", lv[k].n},
                      {"s", lv[k].s},
                      {"eps", lv[k].eps},
                      {"log2_N", lv[k].N.log2()},
                      {"log2_delta", -static_cast<double>(lv[k].delta_exp)},
                      {"block_first", lv[k].block_first.to_string()},
                      {"block_end", lv[k].block_end.to_string()},
                      {"hit_probability", p[k]},
                      {"sampler", k == 0 ? "geometric" : "bernoulli"}});
  rep.parameters = {{"s", s}, {"eps", eps}, {"depth", depth}, {"trials", trials}, {"seed", seed}, {"blocks", blocks}};

  std::vector<double> series;
  std::string setting_all = "blocks=1.." + std::to_string(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    std::uint64_t hits = 0;
    for (int t = 0; t < trials; ++t) hits += hit[static_cast<std::size_t>(t) * nb + k];
    double bound = std::exp2(lv[k].log2_bound);
    rep.checks.push_back(frequency_check("block_hit_frequency", "k=" + std::to_string(k + 1), hits,
                                         static_cast<std::uint64_t>(trials), bound, TheoryKind::upper_bound));
    series.push_back(static_cast<double>(hits) / trials);
  }
  rep.checks.push_back(trend_check("block_hit_trend", setting_all, series, -1));
  std::uint64_t sane = 0;
  for (auto v : sanity) sane += v;
  rep.checks.push_back(frequency_check("full_F1_hit_frequency", "k=1 F_1=[0,1]", sane,
                                       static_cast<std::uint64_t>(trials), 1.0, TheoryKind::exact));
  rep.finalize();
  return rep;
}

ExperimentReport prop14_experiment(double t, double alpha, int depth, int points, std::uint64_t seed) {
  if (points < 1) throw std::invalid_argument("prop14 needs at least one point");
  if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("prop14 needs 0 <= t < 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("prop14 needs 0 < alpha < 1");
  CantorSchedule schedule = build_schedule_prop14(t, alpha, {}, {}, depth);
  const auto& lv = schedule.levels;
  double target = std::min(alpha, t);

  ExperimentReport rep;
  rep.name = "prop14";
  nlohmann::json levels = nlohmann::json::array();
  double log_success = 0.0;
  for (const auto& l : lv) {
    double fail = std::min(1.0, std::exp2(l.log2_bound));
    log_success += std::log1p(-fail);
    levels.push_back({{"k", l.k},
                      {"n", l.n},
                      {"m", l.m},
                      {"beta", l.beta},
                      {"eps", l.eps},
                      {"log2_delta", -static_cast<double>(l.delta_exp)},
                      {"log2_eta", -static_cast<double>(l.eta_exp)},
                      {"log2_L", l.L.log2()},
                      {"log2_M", l.M.log2()},
                      {"ratio_L", l.ratio_L},
                      {"ratio_M", l.ratio_M},
                      {"log2_cover_failure_bound", l.log2_bound}});
  }
  double success = std::exp(log_success);
  rep.parameters = {{"t", t}, {"alpha", alpha}, {"depth", depth}, {"points", points}, {"seed", seed},
                    {"target", target}, {"levels", levels}};
  rep.checks.push_back(make_check("full_cover_success", "levels=1.." + std::to_string(depth), success, success,
                                  success, NAN, TheoryKind::lower_bound));

  auto tolerance_check = [&](std::string name, std::string setting, double est, std::vector<double> series) {
    return make_check(std::move(name), std::move(setting), est, est - kProp14Tolerance, est + kProp14Tolerance, target,
                      TheoryKind::exact, std::move(series));
  };

  if (t == 0.0) {
    // F is the single point 0, so G is at most a point.
    rep.parameters["degenerate"] = "t = 0: G is a single point";
    rep.checks.push_back(tolerance_check("box_count_slope", "degenerate", 0.0, {}));
    for (int i = 0; i < points; ++i)
      rep.checks.push_back(tolerance_check("local_dimension", "point=" + std::to_string(i), 0.0, {}));
    rep.finalize();
    return rep;
  }

  IntersectionSet G(schedule, seed);
  rep.parameters["precision_bits"] = G.precision_bits();

  // Tail levels k >= 2: the first level carries no ratio constraint.
  auto box = G.box_count_points();
  std::vector<double> ratios;
  nlohmann::json box_json = nlohmann::json::array();
  for (std::size_t i = 0; i < box.size(); ++i) {
    double r = box[i].second / box[i].first;
    box_json.push_back({{"log2_inv_r", box[i].first}, {"log2_N", box[i].second}, {"ratio", r}});
    if (i >= 2) ratios.push_back(r);
  }
  rep.parameters["box_counts"] = box_json;
  double slope = *std::min_element(ratios.begin(), ratios.end());
  rep.checks.push_back(tolerance_check("box_count_slope", "levels=2.." + std::to_string(depth), slope, ratios));

  const auto& scales = G.scales();
  std::vector<double> radii;
  for (const auto& sc : scales) radii.push_back(sc.log2_radius);
  nlohmann::json profiles = nlohmann::json::array();
  for (int i = 0; i < points; ++i) {
    std::size_t x = G.sample_point(static_cast<std::uint64_t>(i));
    MeasureAccessor mu = [&](double log2_r) {
      for (std::size_t s = 0; s < scales.size(); ++s)
        if (scales[s].log2_radius == log2_r) return G.log2_ball_mass(x, s).first;
      throw std::invalid_argument("radius is not a construction scale");
    };
    LocalDimProfile prof = local_dimension_profile(mu, G.describe_point(x), radii);
    profiles.push_back({{"point", prof.point}, {"ratios", prof.ratios}});
    rep.checks.push_back(
        tolerance_check("local_dimension", "point=" + std::to_string(i), prof.liminf_estimate, prof.ratios));
  }
  nlohmann::json names = nlohmann::json::array();
  for (const auto& sc : scales) names.push_back({{"scale", sc.name}, {"log2_radius", sc.log2_radius}});
  rep.parameters["scales"] = names;
  rep.parameters["profiles"] = profiles;
  rep.finalize();
  return rep;
}

}  // namespace rcover
