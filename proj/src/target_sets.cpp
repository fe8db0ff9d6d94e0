#include "rcover/target_sets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace rcover {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const long double kLog2_3 = std::log2(3.0L);
const long double kLog2_12 = std::log2(12.0L);

// Smallest x in [lo, cap] with pred(x), for pred monotone false -> true.
std::int64_t least_monotone(std::int64_t lo, std::int64_t cap, const std::function<bool(std::int64_t)>& pred,
                            const std::string& what) {
  if (lo > cap) throw InfeasibleSchedule(what + ": lower limit " + std::to_string(lo) + " exceeds the cap");
  std::int64_t step = 1, hi = lo;
  while (!pred(hi)) {
    if (hi == cap)
      throw InfeasibleSchedule(what + ": no feasible value up to the cap " + std::to_string(cap));
    lo = hi + 1;
    hi = std::min(cap, hi + step);
    step *= 2;
  }
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// Smallest x in [lo, cap] with pred(x). `relaxed` must be monotone and
// implied by pred; the scan starts where it first holds.
std::int64_t least_satisfying(std::int64_t lo, std::int64_t cap, const std::function<bool(std::int64_t)>& pred,
                              const std::string& what, const std::function<bool(std::int64_t)>& relaxed = {}) {
  if (!relaxed) return least_monotone(lo, cap, pred, what);
  for (std::int64_t x = least_monotone(lo, cap, relaxed, what); x <= cap; ++x)
    if (pred(x)) return x;
  throw InfeasibleSchedule(what + ": no feasible value up to the cap " + std::to_string(cap));
}

// floor(n t) from the rounded double product, so that t = 0.6 and n = 5
// give 3 rather than 2.
long double floor_nt(std::int64_t n, double t) { return std::floor(static_cast<double>(n) * t); }

// log2(2^x - 2) for x >= 2
long double log2_pow2_minus_two(long double x) {
  if (x > 60) return x;
  return std::log2(std::exp2(x) - 2.0L);
}

// log2 floor(2^x)
long double log2_floor_pow2(long double x) {
  if (x > 60) return x;
  return std::log2(std::floor(std::exp2(x)));
}

// log2 of 3 eta^-beta (1 - eta^beta / 2)^count, eta = 2^-h, count = 2^log2_count
long double log2_cover_bound(long double beta_h, long double log2_count) {
  // log2(-log2(1 - x)) with x = 2^(-beta_h - 1); x alone underflows for large beta_h
  long double log2_neg_per;
  if (beta_h > 40.0L) {
    log2_neg_per = -beta_h - 1.0L - std::log2(std::log(2.0L));
  } else {
    long double x = std::exp2(-beta_h - 1.0L);
    log2_neg_per = std::log2(-std::log1p(-x) / std::log(2.0L));
  }
  long double e = log2_count + log2_neg_per;
  long double tail = e > 16000.0L ? -std::numeric_limits<long double>::infinity() : -std::exp2(e);
  return kLog2_3 + beta_h + tail;
}

void check_increasing_unit(const std::vector<double>& v, int depth, const char* name, bool strict_below_one) {
  for (int k = 0; k < depth; ++k) {
    if (!(v[k] > 0.0) || (strict_below_one && !(v[k] < 1.0)))
      throw std::invalid_argument(std::string(name) + "_k must lie in (0,1)");
    if (k > 0 && !(v[k] > v[k - 1])) throw std::invalid_argument(std::string(name) + "_k must increase");
  }
}

}  // namespace

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::prop13: return "prop13";
    case ScheduleKind::prop14: return "prop14";
    case ScheduleKind::generic: return "generic";
  }
  return "?";
}

CantorSchedule build_schedule_prop13(const std::vector<double>& s, const std::vector<double>& eps, int depth) {
  if (depth < 1) throw std::invalid_argument("schedule depth must be >= 1");
  if (static_cast<int>(s.size()) < depth || static_cast<int>(eps.size()) < depth)
    throw std::invalid_argument("s_k and eps_k need at least depth entries");
  check_increasing_unit(s, depth, "s", true);
  for (int k = 0; k < depth; ++k)
    if (!(eps[k] > 0.0))
      throw InfeasibleSchedule("eps_" + std::to_string(k + 1) + " must be positive: the hit bound 3 N_k 2^(n_k s_k) delta_k is never 0");

  CantorSchedule out;
  out.kind = ScheduleKind::prop13;
  long double a = 0;  // log2 N_{k-1}
  long double b = 0;  // -log2 delta_{k-1}
  std::int64_t m_prev = 0, n_prev = 0;
  long double x_prev = 0;  // covering block k starts at 2^(n_{k-1} s_{k-1})
  for (int k = 1; k <= depth; ++k) {
    long double sk = s[k - 1];
    long double log2_eps = std::log2(static_cast<long double>(eps[k - 1]));
    std::string tag = "prop13 level " + std::to_string(k);
    std::int64_t m = least_satisfying(
        std::max<std::int64_t>(1, m_prev + 1), kScheduleCap,
        [&](std::int64_t mm) { return mm + a - sk * (mm + b) >= 0; }, tag + " m_k");
    long double ak = a + m;
    std::int64_t n = least_satisfying(
        std::max(m + 1, n_prev + 1), kScheduleCap,
        [&](std::int64_t nn) { return kLog2_3 + ak + nn * sk - (b + nn) <= log2_eps; }, tag + " n_k");

    ScheduleLevel lv;
    lv.k = k;
    lv.m = m;
    lv.n = n;
    lv.s = s[k - 1];
    lv.eps = eps[k - 1];
    lv.slot_exp = m;
    lv.delta_exp = static_cast<std::int64_t>(b) + n;
    lv.N = Magnitude::from_log2(static_cast<double>(ak));
    long double xk = n * sk;
    lv.log2_bound = static_cast<double>(kLog2_3 + ak + xk - (b + n));
    lv.block_first = Magnitude::ceil_exp2(static_cast<double>(x_prev));
    lv.block_end = Magnitude::ceil_exp2(static_cast<double>(xk));
    lv.ratio_L = static_cast<double>(ak / (b + n));
    out.levels.push_back(lv);

    a = ak;
    b += n;
    m_prev = m;
    n_prev = n;
    x_prev = xk;
  }
  return out;
}

CantorSchedule build_schedule_prop14(double t, double alpha, const std::vector<double>& beta_in,
                                     const std::vector<double>& eps_in, int depth) {
  if (depth < 1) throw std::invalid_argument("schedule depth must be >= 1");
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t must be in [0,1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  std::vector<double> beta = beta_in, eps = eps_in;
  if (beta.empty())
    for (int k = 1; k <= depth; ++k) beta.push_back(alpha * (1.0 - std::ldexp(1.0, -(k + 2))));
  if (eps.empty())
    for (int k = 1; k <= depth; ++k) eps.push_back(std::ldexp(1.0, -k));
  if (static_cast<int>(beta.size()) < depth || static_cast<int>(eps.size()) < depth)
    throw std::invalid_argument("beta_k and eps_k need at least depth entries");
  check_increasing_unit(beta, depth, "beta", false);
  for (int k = 0; k < depth; ++k) {
    if (!(beta[k] < alpha)) throw std::invalid_argument("beta_k must stay below alpha");
    if (!(eps[k] > 0.0)) throw InfeasibleSchedule("eps_k must be positive");
  }
  const std::int64_t cap = std::int64_t{1} << 28;
  const long double a = alpha;
  const long double tt = t;

  CantorSchedule out;
  out.kind = ScheduleKind::prop14;
  out.t = t;
  out.alpha = alpha;

  std::int64_t n1 = 1;
  if (t > 0.0)
    n1 = least_satisfying(1, cap, [&](std::int64_t n) { return floor_nt(n, t) >= 1; }, "prop14 n_1");
  std::int64_t u = static_cast<std::int64_t>(floor_nt(n1, t));
  long double D = n1, H = 0;
  long double logL = u, logN = u;
  std::int64_t m_prev = 0, n_cur = n1, slot = u;
  Magnitude i_per_j = Magnitude::exact(0);

  for (int k = 1; k <= depth; ++k) {
    long double bk = beta[k - 1];
    long double log2_eps = std::log2(static_cast<long double>(eps[k - 1]));
    bool ratio_gate = k >= 2;
    Magnitude first = Magnitude::ceil_exp2(static_cast<double>(a * m_prev));
    auto log2_count = [&](std::int64_t m) {
      Magnitude end = Magnitude::ceil_exp2(static_cast<double>(a * m));
      return static_cast<long double>((end - first).log2());
    };
    auto ok_m = [&](std::int64_t m) {
      long double hk = H + m;
      if (!(bk * hk > D + kLog2_12)) return false;
      long double logM = logL + log2_floor_pow2(bk * hk - D - kLog2_3);
      if (log2_cover_bound(bk * hk, log2_count(m)) > log2_eps) return false;
      if (ratio_gate && !(std::abs(logM / hk - a) < kProp14RatioTolerance)) return false;
      return true;
    };
    // log2 floor(2^x) <= x
    auto relaxed_m = [&](std::int64_t m) {
      long double hk = H + m;
      if (!(bk * hk > D + kLog2_12)) return false;
      if (log2_cover_bound(bk * hk, log2_count(m)) > log2_eps) return false;
      return !ratio_gate || (logL + bk * hk - D - kLog2_3) / hk > a - kProp14RatioTolerance;
    };
    std::int64_t m = least_satisfying(n_cur + 1, cap, ok_m, "prop14 level " + std::to_string(k) + " m_k", relaxed_m);
    H += m;
    long double xj = bk * H - D - kLog2_3;
    long double logM = logL + log2_floor_pow2(xj);

    ScheduleLevel lv;
    lv.k = k;
    lv.m = m;
    lv.n = n_cur;
    lv.beta = beta[k - 1];
    lv.eps = eps[k - 1];
    lv.slot_exp = slot;
    lv.delta_exp = static_cast<std::int64_t>(D);
    lv.eta_exp = static_cast<std::int64_t>(H);
    lv.N = Magnitude::from_log2(static_cast<double>(logN));
    lv.L = Magnitude::from_log2(static_cast<double>(logL));
    lv.j_per_i = Magnitude::from_log2(static_cast<double>(log2_floor_pow2(xj)));
    lv.M = Magnitude::from_log2(static_cast<double>(logM));
    lv.i_per_j = i_per_j;
    lv.log2_bound = static_cast<double>(log2_cover_bound(bk * H, log2_count(m)));
    lv.block_first = first;
    lv.block_end = Magnitude::ceil_exp2(static_cast<double>(a * m));
    lv.ratio_L = static_cast<double>(logL / D);
    lv.ratio_M = static_cast<double>(logM / H);
    out.levels.push_back(lv);
    m_prev = m;
    if (k == depth) break;

    std::string tag = "prop14 level " + std::to_string(k + 1) + " n_k";
    std::int64_t n_next;
    if (t == 0.0) {
      // F is a nested chain of single intervals; G keeps one interval per level.
      n_next = m + 1;
      i_per_j = Magnitude::exact(1);
    } else {
      auto ok_n = [&](std::int64_t n) {
        long double e = floor_nt(n, t) + D - H;
        if (e < 2) return false;
        long double next = logM + log2_pow2_minus_two(e);
        return std::abs(next / (D + n) - tt) < kProp14RatioTolerance;
      };
      // floor(n t) jitters the ratio around the threshold; n t bounds it above
      auto relaxed_n = [&](std::int64_t n) {
        long double e = static_cast<long double>(static_cast<double>(n) * t) + D - H;
        return e >= 2 && (logM + e) / (D + n) > tt - kProp14RatioTolerance;
      };
      n_next = least_satisfying(m + 1, cap, ok_n, tag, relaxed_n);
      long double e = floor_nt(n_next, t) + D - H;
      i_per_j = Magnitude::from_log2(static_cast<double>(log2_pow2_minus_two(e)));
      logL = logM + log2_pow2_minus_two(e);
    }
    slot = static_cast<std::int64_t>(floor_nt(n_next, t));
    D += n_next;
    logN += slot;
    n_cur = n_next;
  }
  return out;
}

CantorSchedule generic_schedule(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& n) {
  if (m.empty() || m.size() != n.size()) throw std::invalid_argument("generic schedule needs equal, nonempty m_k and n_k");
  CantorSchedule out;
  out.kind = ScheduleKind::generic;
  std::int64_t a = 0, b = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 0 || n[i] < m[i] || n[i] < 1) throw std::invalid_argument("generic schedule needs 0 <= m_k <= n_k, n_k >= 1");
    a += m[i];
    b += n[i];
    ScheduleLevel lv;
    lv.k = static_cast<int>(i) + 1;
    lv.m = m[i];
    lv.n = n[i];
    lv.slot_exp = m[i];
    lv.delta_exp = b;
    lv.N = Magnitude::from_log2(static_cast<double>(a));
    lv.ratio_L = static_cast<double>(a) / static_cast<double>(b);
    out.levels.push_back(lv);
  }
  return out;
}

LengthSequenceSpec covering_sequence(const CantorSchedule& schedule) {
  std::vector<LengthBlock> blocks;
  for (const auto& lv : schedule.levels) {
    switch (schedule.kind) {
      case ScheduleKind::prop13:
        blocks.push_back({-static_cast<double>(lv.delta_exp), lv.block_first});
        break;
      case ScheduleKind::prop14:
        blocks.push_back({-static_cast<double>(lv.eta_exp), lv.block_first});
        break;
      case ScheduleKind::generic:
        throw std::invalid_argument("generic schedules carry no covering sequence");
    }
  }
  return LengthSequenceSpec::block_constant(std::move(blocks), schedule.levels.back().block_end, 1);
}

TargetSetSpec::TargetSetSpec(Variant v) : v_(std::move(v)) {
  if (const auto* c = std::get_if<SelfSimilarCantor>(&v_)) {
    if (!(c->ratio > 0.0 && c->ratio < 1.0) || c->copies < 1 || c->ratio * c->copies > 1.0 + 1e-12)
      throw std::invalid_argument("self-similar Cantor needs 0 < ratio < 1, copies >= 1, ratio * copies <= 1");
    double q = std::round(1.0 / c->ratio);
    if (std::abs(q * c->ratio - 1.0) > 1e-12)
      throw std::invalid_argument("self-similar Cantor ratio must be 1/q for an integer q");
    if (c->copies > 1 && (static_cast<long>(q) - 1) % (c->copies - 1) != 0)
      throw std::invalid_argument("copies must split the q-adic grid evenly: (q-1) % (copies-1) == 0");
  }
  if (const auto* s = std::get_if<Scheduled>(&v_))
    if (s->schedule.levels.empty()) throw std::invalid_argument("scheduled target needs at least one level");
}

std::string TargetSetSpec::name() const {
  return std::visit(Overloaded{
                        [](const FullTorus&) { return std::string("full_torus"); },
                        [](const SinglePoint&) { return std::string("single_point"); },
                        [](const SelfSimilarCantor&) { return std::string("self_similar_cantor"); },
                        [](const Scheduled& s) { return "scheduled_" + to_string(s.schedule.kind); },
                    },
                    v_);
}

namespace {

std::uint64_t cantor_q(const SelfSimilarCantor& c) { return static_cast<std::uint64_t>(std::llround(1.0 / c.ratio)); }

std::uint64_t cantor_step(const SelfSimilarCantor& c) {
  std::uint64_t q = cantor_q(c);
  return c.copies > 1 ? (q - 1) / static_cast<std::uint64_t>(c.copies - 1) : 0;
}

// ceil(log2(q^e)) bound for representability
double family_bits(std::uint32_t base, int exponent) { return exponent * std::log2(static_cast<double>(base)); }

}  // namespace

std::vector<IntervalFamily> build_levels(const TargetSetSpec& spec, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  std::vector<IntervalFamily> out;
  auto fits = [](std::uint32_t base, int exponent, double count) {
    if (family_bits(base, exponent) > 126.0) throw std::length_error("interval endpoints exceed 126 bits");
    if (count > static_cast<double>(kMaxFamilySize)) throw std::length_error("interval family exceeds 10^7 members");
  };
  std::visit(Overloaded{
                 [&](const FullTorus&) {
                   for (int k = 1; k <= depth; ++k) out.push_back({k, 2, 0, 1, {0}});
                 },
                 [&](const SinglePoint&) {
                   for (int k = 1; k <= depth; ++k) out.push_back({k, 2, 0, 0, {0}});
                 },
                 [&](const SelfSimilarCantor& c) {
                   std::uint64_t q = cantor_q(c), g = cantor_step(c);
                   std::vector<u128> prev{0};
                   for (int k = 1; k <= depth; ++k) {
                     fits(static_cast<std::uint32_t>(q), k, static_cast<double>(prev.size()) * c.copies);
                     std::vector<u128> cur;
                     cur.reserve(prev.size() * c.copies);
                     for (u128 p : prev)
                       for (int i = 0; i < c.copies; ++i) cur.push_back(p * q + static_cast<u128>(i) * g);
                     out.push_back({k, static_cast<std::uint32_t>(q), k, 1, cur});
                     prev = std::move(cur);
                   }
                 },
                 [&](const Scheduled& s) {
                   if (depth > static_cast<int>(s.schedule.levels.size()))
                     throw std::invalid_argument("depth beyond the schedule");
                   std::vector<u128> prev{0};
                   for (int k = 1; k <= depth; ++k) {
                     const auto& lv = s.schedule.levels[k - 1];
                     std::int64_t n = lv.delta_exp - (k > 1 ? s.schedule.levels[k - 2].delta_exp : 0);
                     fits(2, static_cast<int>(lv.delta_exp), std::exp2(static_cast<double>(lv.slot_exp)) * prev.size());
                     std::vector<u128> cur;
                     u128 per = u128{1} << lv.slot_exp;
                     cur.reserve(static_cast<std::size_t>(per * prev.size()));
                     for (u128 p : prev)
                       for (u128 i = 0; i < per; ++i) cur.push_back((p << n) + (i << (n - lv.slot_exp)));
                     out.push_back({k, 2, static_cast<int>(lv.delta_exp), 1, cur});
                     prev = std::move(cur);
                   }
                 },
             },
             spec.variant());
  return out;
}

namespace {

// floor(num * 2^level / base^exponent), and whether the division is exact
std::pair<std::uint64_t, bool> scaled_floor(u128 num, int level, std::uint32_t base, int exponent) {
  u128 den = 1;
  for (int i = 0; i < exponent; ++i) den *= base;
  if (base == 2) {
    if (level >= exponent) return {static_cast<std::uint64_t>(num << (level - exponent)), true};
    int sh = exponent - level;
    u128 mask = (u128{1} << sh) - 1;
    return {static_cast<std::uint64_t>(num >> sh), (num & mask) == 0};
  }
  if (family_bits(base, exponent) + level > 127.0) throw std::length_error("grid conversion exceeds 128-bit arithmetic");
  u128 x = num << level;
  return {static_cast<std::uint64_t>(x / den), x % den == 0};
}

}  // namespace

GridSet to_gridset(const IntervalFamily& family, int level) {
  GridSet g(1, level);
  std::uint64_t cells = std::uint64_t{1} << level;
  for (u128 off : family.offsets) {
    std::uint64_t a = scaled_floor(off, level, family.base, family.exponent).first;
    std::uint64_t last = a;
    if (family.length > 0) {
      auto [b, b_exact] = scaled_floor(off + family.length, level, family.base, family.exponent);
      last = b_exact ? b - 1 : b;
    }
    for (std::uint64_t i = a; i <= last; ++i) g.insert_linear(i % cells);
  }
  return g;
}

DimensionPair analytic_dimensions(const TargetSetSpec& spec) {
  return std::visit(Overloaded{
                        [](const FullTorus&) { return DimensionPair{1.0, 1.0, true}; },
                        [](const SinglePoint&) { return DimensionPair{0.0, 0.0, true}; },
                        [](const SelfSimilarCantor& c) {
                          double dim = std::log(static_cast<double>(c.copies)) / -std::log(c.ratio);
                          return DimensionPair{dim, dim, true};
                        },
                        [](const Scheduled& s) {
                          const auto& lv = s.schedule.levels;
                          if (s.schedule.kind == ScheduleKind::prop14) return DimensionPair{s.schedule.t, 1.0, true};
                          // log N_k / -log delta_k over the finer half of the levels
                          double lo = INFINITY, hi = 0.0;
                          for (std::size_t i = lv.size() / 2; i < lv.size(); ++i) {
                            double r = lv[i].N.log2() / static_cast<double>(lv[i].delta_exp);
                            lo = std::min(lo, r);
                            hi = std::max(hi, r);
                          }
                          if (s.schedule.kind == ScheduleKind::prop13) return DimensionPair{lo, 1.0, false};
                          return DimensionPair{lo, hi, false};
                        },
                    },
                    spec.variant());
}

double natural_measure_weight(const std::vector<IntervalFamily>& levels, int level, u128 offset) {
  if (level == 0) {
    if (offset != 0) throw std::invalid_argument("the root interval starts at 0");
    return 1.0;
  }
  if (level < 1 || level > static_cast<int>(levels.size())) throw std::invalid_argument("level outside the construction");
  const auto& f = levels[level - 1];
  if (!std::binary_search(f.offsets.begin(), f.offsets.end(), offset))
    throw std::invalid_argument("query is not a construction interval");
  return 1.0 / static_cast<double>(f.offsets.size());
}

double natural_measure_of_cube(const std::vector<IntervalFamily>& levels, const DyadicCube& cube) {
  if (levels.empty()) throw std::invalid_argument("no construction levels");
  if (cube.dim() != 1) throw std::invalid_argument("constructions are one-dimensional");
  const auto& f = levels.back();
  std::uint64_t target = cube.index(0), inside = 0;
  for (u128 off : f.offsets) {
    std::uint64_t first = scaled_floor(off, cube.level(), f.base, f.exponent).first;
    std::uint64_t last = first;
    if (f.length > 0) {
      auto [b, b_exact] = scaled_floor(off + f.length, cube.level(), f.base, f.exponent);
      last = b_exact ? b - 1 : b;
    }
    if (first == target && last == target)
      ++inside;
    else if (first <= target && target <= last)
      throw std::invalid_argument("cube boundary cuts a construction interval");
  }
  return static_cast<double>(inside) / static_cast<double>(f.offsets.size());
}

TargetGeometry::TargetGeometry(TargetSetSpec spec) : spec_(std::move(spec)) {
  point_ = std::holds_alternative<SinglePoint>(spec_.variant());
  full_ = std::holds_alternative<FullTorus>(spec_.variant());
  if (const auto* c = std::get_if<SelfSimilarCantor>(&spec_.variant())) {
    q_ = cantor_q(*c);
    copies_ = static_cast<std::uint64_t>(c->copies);
    gap_step_ = cantor_step(*c);
    u128 p = 1;
    while (p * q_ < (u128{1} << 63)) {
      p *= q_;
      ++max_depth_;
    }
  }
  if (const auto* s = std::get_if<Scheduled>(&spec_.variant())) {
    // deepest level that can be materialized
    int depth = 0;
    double count = 1.0;
    for (const auto& lv : s->schedule.levels) {
      count *= std::exp2(static_cast<double>(lv.slot_exp));
      if (lv.delta_exp > 126 || count > static_cast<double>(kMaxFamilySize)) break;
      ++depth;
    }
    if (depth == 0) throw std::length_error("scheduled target has no materializable level");
    finest_ = build_levels(spec_, depth).back();
    exact_ = false;
  }
}

bool TargetGeometry::cantor_meets(u128 a, u128 b, int m, std::uint64_t u) const {
  // [u, u+1] q^-m against [a, b] 2^-64, compared after scaling both by q^m 2^64
  u128 qm = 1;
  for (int i = 0; i < m; ++i) qm *= q_;
  u128 left = static_cast<u128>(u) << 64;
  u128 right = static_cast<u128>(u + 1) << 64;
  if (b * qm < left || a * qm > right) return false;
  if (a * qm <= left && right <= b * qm) return true;
  if (m == max_depth_) return true;
  for (std::uint64_t i = 0; i < copies_; ++i)
    if (cantor_meets(a, b, m + 1, u * q_ + i * gap_step_)) return true;
  return false;
}

bool TargetGeometry::meets_piece(u128 a, u128 b) const {
  return std::visit(Overloaded{
                        [&](const FullTorus&) { return true; },
                        [&](const SinglePoint&) { return a == 0 || b == (u128{1} << 64); },
                        [&](const SelfSimilarCantor&) { return cantor_meets(a, b, 0, 0); },
                        [&](const Scheduled&) {
                          // outer cover by the finest materialized level
                          const auto& f = finest_;
                          int e = f.exponent;
                          u128 A = e > 64 ? a << (e - 64) : a, B = e > 64 ? b << (e - 64) : b;
                          auto lo_of = [&](u128 off) { return e > 64 ? off : off << (64 - e); };
                          auto it = std::upper_bound(f.offsets.begin(), f.offsets.end(), B,
                                                     [&](u128 v, u128 off) { return v < lo_of(off); });
                          if (it == f.offsets.begin()) return false;
                          --it;
                          return lo_of(*it + f.length) >= A;
                        },
                    },
                    spec_.variant());
}

bool TargetGeometry::meets_arc(std::uint64_t center, std::uint64_t half) const {
  if (point_) return center <= half || (half != 0 && center >= 0 - half);
  if (full_) return true;
  const u128 one = u128{1} << 64;
  if (static_cast<u128>(half) * 2 >= one) return meets_piece(0, one);
  u128 c = center;
  // shift by one turn so that c - half stays nonnegative
  u128 lo = c + one - half, hi = c + one + half;
  if (hi <= 2 * one && lo >= one) return meets_piece(lo - one, hi - one);
  if (lo < one) return meets_piece(lo, one) || meets_piece(0, hi - one);
  return meets_piece(lo - one, one) || meets_piece(0, hi - 2 * one);
}

double TargetGeometry::neighbourhood_measure(double r) const {
  return std::visit(Overloaded{
                        [&](const FullTorus&) { return 1.0; },
                        [&](const SinglePoint&) { return std::min(1.0, 2.0 * r); },
                        [&](const SelfSimilarCantor& c) {
                          if (c.copies == 1) return std::min(1.0, 2.0 * r);
                          double q = static_cast<double>(q_);
                          double gap_cells = static_cast<double>(gap_step_) - 1.0;
                          double uncovered = 0.0;
                          double count = static_cast<double>(c.copies - 1);
                          double scale = 1.0 / q;
                          while (gap_cells > 0.0 && gap_cells * scale > 2.0 * r) {
                            uncovered += count * (gap_cells * scale - 2.0 * r);
                            count *= c.copies;
                            scale /= q;
                          }
                          return 1.0 - uncovered;
                        },
                        [&](const Scheduled&) { return static_cast<double>(NAN); },
                    },
                    spec_.variant());
}

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

u128 u128_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  u128 v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad integer: " + s);
    u128 next = v * 10 + static_cast<u128>(ch - '0');
    if (next / 10 != v) throw std::out_of_range("integer exceeds 128 bits");
    v = next;
  }
  return v;
}

void write_intervals(std::ostream& os, const IntervalFamily& f) {
  os << "intervals 1\n";
  os << "level " << f.level << "\n";
  os << "base " << f.base << "\n";
  os << "exponent " << f.exponent << "\n";
  os << "length " << u128_to_string(f.length) << "\n";
  os << "count " << f.offsets.size() << "\n";
  for (u128 off : f.offsets) os << u128_to_string(off) << " " << f.exponent << "\n";
}

IntervalFamily read_intervals(std::istream& is) {
  std::string tag, word;
  auto expect = [&](const char* key) {
    if (!(is >> tag) || tag != key) throw std::runtime_error(std::string("intervals: expected '") + key + "'");
  };
  IntervalFamily f;
  int version = 0;
  std::size_t count = 0;
  expect("intervals");
  is >> version;
  if (version != 1) throw std::runtime_error("intervals: unsupported version");
  expect("level");
  is >> f.level;
  expect("base");
  is >> f.base;
  expect("exponent");
  is >> f.exponent;
  expect("length");
  is >> word;
  f.length = u128_from_string(word);
  expect("count");
  is >> count;
  if (!is) throw std::runtime_error("intervals: malformed header");
  for (std::size_t i = 0; i < count; ++i) {
    int e = 0;
    if (!(is >> word >> e)) throw std::runtime_error("intervals: truncated list");
    if (e != f.exponent) throw std::runtime_error("intervals: mixed exponents");
    u128 off = u128_from_string(word);
    if (!f.offsets.empty() && off <= f.offsets.back()) throw std::runtime_error("intervals: offsets not increasing");
    f.offsets.push_back(off);
  }
  return f;
}

}  // namespace rcover
