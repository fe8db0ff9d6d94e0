#include "rcover/intersection_set.hpp"

#include <gmpxx.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rcover/rng.hpp"

namespace rcover {

namespace {

double log2_of(const mpz_class& z) {
  if (sgn(z) <= 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(d) + static_cast<double>(exp);
}

mpz_class pow2(std::int64_t e) {
  mpz_class z;
  mpz_setbit(z.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  return z;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 29;
  return h;
}

std::uint64_t mix(std::uint64_t h, const mpz_class& z) {
  std::size_t n = mpz_size(z.get_mpz_t());
  h = mix(h, n);
  for (std::size_t i = 0; i < n; ++i) h = mix(h, static_cast<std::uint64_t>(mpz_getlimbn(z.get_mpz_t(), i)));
  return h;
}

// log2(2^a + 2^b)
double log2_add(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

struct MassAcc {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = -std::numeric_limits<double>::infinity();
};

}  // namespace

struct IntersectionSet::Impl {
  CantorSchedule schedule;
  std::uint64_t seed = 0;
  CounterRng rng{0};
  int K = 0;
  std::int64_t P = 0;
  mpz_class one;  // 2^P

  // index k-1 for level k
  std::vector<mpz_class> delta, eta, q, three_q, off0, half_q, half_eta, a;
  std::vector<std::int64_t> sigma_shift;  // sigma_{k+1} = 2^sigma_shift[k-1]
  std::vector<mpz_class> b;               // I per J at level k+1, index k-1
  std::int64_t root_shift = 0;
  mpz_class root_count;

  std::vector<double> log2_counts;  // node levels 0..2K
  std::vector<Scale> scale_list;
  std::vector<mpz_class> scale_radius;

  std::vector<mpz_class> points;
  std::uint64_t word_counter = 0;

  const mpz_class& length(int j) const {
    if (j == 0) return one;
    int k = (j + 1) / 2;
    return (j % 2 == 1) ? delta[k - 1] : eta[k - 1];
  }
  double mass(int j) const { return -log2_counts[j]; }

  // Center of J child i of the I node (k, left, id).
  mpz_class j_center(int k, const mpz_class& left, std::uint64_t id, const mpz_class& i) const {
    std::uint64_t w = rng.bits(streams::g_jitter, mix(id, i));
    mpz_class wz;
    mpz_import(wz.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    mpz_class jit = (q[k - 1] * wz) >> 64;
    return left + three_q[k - 1] * i + off0[k - 1] + jit - half_q[k - 1];
  }

  mpz_class uniform_below(const mpz_class& n, std::uint64_t point) {
    std::size_t words = mpz_sizeinbase(n.get_mpz_t(), 2) / 64 + 2;
    std::vector<std::uint64_t> buf(words);
    for (std::size_t i = 0; i < words; ++i) buf[i] = rng.bits(streams::g_points, (point << 40) + word_counter++);
    mpz_class z;
    mpz_import(z.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, buf.data());
    return z % n;
  }

  void visit(int j, const mpz_class& left, std::uint64_t id, const mpz_class& lo, const mpz_class& hi,
             MassAcc& acc) const;
  void regular(int j, const mpz_class& base, std::int64_t shift, const mpz_class& count, std::uint64_t id,
               const mpz_class& lo, const mpz_class& hi, MassAcc& acc) const;
  void jittered(int k, const mpz_class& left, std::uint64_t id, const mpz_class& lo, const mpz_class& hi,
                MassAcc& acc) const;
  void classify(int j, const mpz_class& left, std::uint64_t id, const mpz_class& lo, const mpz_class& hi,
                MassAcc& acc) const;
};

void IntersectionSet::Impl::classify(int j, const mpz_class& left, std::uint64_t id, const mpz_class& lo,
                                     const mpz_class& hi, MassAcc& acc) const {
  mpz_class right = left + length(j);
  if (right < lo || left > hi) return;
  if (left >= lo && right <= hi) {
    acc.lower = log2_add(acc.lower, mass(j));
    acc.upper = log2_add(acc.upper, mass(j));
    return;
  }
  visit(j, left, id, lo, hi, acc);
}

void IntersectionSet::Impl::visit(int j, const mpz_class& left, std::uint64_t id, const mpz_class& lo,
                                  const mpz_class& hi, MassAcc& acc) const {
  if (j == 2 * K) {
    acc.upper = log2_add(acc.upper, mass(j));
    return;
  }
  if (j == 0) {
    regular(1, mpz_class(0), root_shift, root_count, id, lo, hi, acc);
  } else if (j % 2 == 1) {
    jittered((j + 1) / 2, left, id, lo, hi, acc);
  } else {
    int k = j / 2;
    std::int64_t sh = sigma_shift[k - 1];
    mpz_class base;
    mpz_cdiv_q_2exp(base.get_mpz_t(), left.get_mpz_t(), static_cast<mp_bitcnt_t>(sh));
    base <<= sh;
    regular(j + 1, base, sh, b[k - 1], id, lo, hi, acc);
  }
}

// Children base + i 2^shift, i < count, of node level j.
void IntersectionSet::Impl::regular(int j, const mpz_class& base, std::int64_t shift, const mpz_class& count,
                                    std::uint64_t id, const mpz_class& lo, const mpz_class& hi,
                                    MassAcc& acc) const {
  const mpz_class& len = length(j);
  auto sh = static_cast<mp_bitcnt_t>(shift);
  auto cdiv = [&](const mpz_class& x) {
    mpz_class r;
    mpz_cdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), sh);
    return r;
  };
  auto fdiv = [&](const mpz_class& x) {
    mpz_class r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), sh);
    return r;
  };
  mpz_class last = count - 1;
  mpz_class o1 = cdiv(lo - len - base), o2 = fdiv(hi - base);
  if (o1 < 0) o1 = 0;
  if (o2 > last) o2 = last;
  if (o1 > o2) return;
  mpz_class f1 = cdiv(lo - base), f2 = fdiv(hi - len - base);
  if (f1 < o1) f1 = o1;
  if (f2 > o2) f2 = o2;
  auto child = [&](const mpz_class& i) {
    mpz_class l = base + (i << sh);
    classify(j, l, mix(id, i), lo, hi, acc);
  };
  if (f1 <= f2) {
    mpz_class full = f2 - f1 + 1;
    double lg = log2_of(full) + mass(j);
    acc.lower = log2_add(acc.lower, lg);
    acc.upper = log2_add(acc.upper, lg);
    for (mpz_class i = o1; i < f1; ++i) child(i);
    for (mpz_class i = f2 + 1; i <= o2; ++i) child(i);
  } else {
    if (o2 - o1 > 4) throw std::logic_error("intersection set: unexpected partial run");
    for (mpz_class i = o1; i <= o2; ++i) child(i);
  }
}

void IntersectionSet::Impl::jittered(int k, const mpz_class& left, std::uint64_t id, const mpz_class& lo,
                                     const mpz_class& hi, MassAcc& acc) const {
  int j = 2 * k;
  const mpz_class& s = three_q[k - 1];
  const mpz_class& qq = q[k - 1];
  const mpz_class& he = half_eta[k - 1];
  // J_i lies within [left + s i + q - eta/2, left + s i + 2q + eta/2].
  mpz_class last = a[k - 1] - 1;
  mpz_class o1, o2, f1, f2;
  mpz_class x = lo - left - 2 * qq - he;
  mpz_cdiv_q(o1.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
  x = hi - left - qq + he;
  mpz_fdiv_q(o2.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
  if (o1 < 0) o1 = 0;
  if (o2 > last) o2 = last;
  if (o1 > o2) return;
  x = lo - left - qq + he;
  mpz_cdiv_q(f1.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
  x = hi - left - 2 * qq - he;
  mpz_fdiv_q(f2.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
  if (f1 < o1) f1 = o1;
  if (f2 > o2) f2 = o2;
  auto child = [&](const mpz_class& i) {
    mpz_class l = j_center(k, left, id, i) - he;
    classify(j, l, mix(id, i), lo, hi, acc);
  };
  if (f1 <= f2) {
    mpz_class full = f2 - f1 + 1;
    double lg = log2_of(full) + mass(j);
    acc.lower = log2_add(acc.lower, lg);
    acc.upper = log2_add(acc.upper, lg);
    for (mpz_class i = o1; i < f1; ++i) child(i);
    for (mpz_class i = f2 + 1; i <= o2; ++i) child(i);
  } else {
    if (o2 - o1 > 4) throw std::logic_error("intersection set: unexpected partial run");
    for (mpz_class i = o1; i <= o2; ++i) child(i);
  }
}

IntersectionSet::IntersectionSet(CantorSchedule schedule, std::uint64_t seed) : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  if (schedule.kind != ScheduleKind::prop14) throw std::invalid_argument("intersection set needs a prop14 schedule");
  if (!(schedule.t > 0.0)) throw std::invalid_argument("intersection set needs t > 0");
  if (schedule.levels.empty()) throw std::invalid_argument("empty schedule");
  m.schedule = std::move(schedule);
  m.seed = seed;
  m.rng = CounterRng(seed);
  const auto& lv = m.schedule.levels;
  m.K = static_cast<int>(lv.size());
  m.P = lv.back().eta_exp + 64;
  m.one = pow2(m.P);
  m.root_shift = m.P - lv[0].slot_exp;
  m.root_count = pow2(lv[0].slot_exp);

  for (int k = 1; k <= m.K; ++k) {
    const ScheduleLevel& L = lv[k - 1];
    m.delta.push_back(pow2(m.P - L.delta_exp));
    m.eta.push_back(pow2(m.P - L.eta_exp));
    // eta^beta in units of 2^-P, rounded to 62 significant bits.
    long double e = static_cast<long double>(m.P) - static_cast<long double>(L.beta) * L.eta_exp;
    auto E = static_cast<std::int64_t>(std::floor(e));
    long double frac = e - E;
    mpz_class qz;
    mpz_set_ui(qz.get_mpz_t(), 0);
    auto mant = static_cast<unsigned long>(std::llround(std::exp2(frac + 62.0L)));
    qz = mant;
    qz <<= static_cast<mp_bitcnt_t>(E - 62);
    m.q.push_back(qz);
    m.three_q.push_back(3 * qz);
    m.off0.push_back((3 * qz) >> 1);
    m.half_q.push_back(qz >> 1);
    m.half_eta.push_back(m.eta.back() >> 1);
    mpz_class aa;
    mpz_fdiv_q(aa.get_mpz_t(), m.delta.back().get_mpz_t(), m.three_q.back().get_mpz_t());
    if (aa < 1) throw std::invalid_argument("schedule level has no room for a covering arc");
    m.a.push_back(aa);
    if (k < m.K) {
      const ScheduleLevel& N = lv[k];
      std::int64_t e2 = L.delta_exp + N.slot_exp - L.eta_exp;
      if (e2 < 2) throw std::invalid_argument("schedule level leaves no slot inside J");
      m.sigma_shift.push_back(m.P - L.delta_exp - N.slot_exp);
      m.b.push_back(pow2(e2) - 2);
    }
  }

  mpz_class count = m.root_count;
  m.log2_counts.push_back(0.0);
  for (int k = 1; k <= m.K; ++k) {
    m.log2_counts.push_back(log2_of(count));
    count *= m.a[k - 1];
    m.log2_counts.push_back(log2_of(count));
    if (k < m.K) count *= m.b[k - 1];
  }

  auto add_scale = [&](std::string name, const mpz_class& r) {
    m.scale_list.push_back({std::move(name), log2_of(r) - static_cast<double>(m.P)});
    m.scale_radius.push_back(r);
  };
  for (int k = 1; k <= m.K; ++k) {
    add_scale("delta_" + std::to_string(k), m.delta[k - 1]);
    add_scale("arc_spacing_" + std::to_string(k), m.three_q[k - 1]);
    add_scale("eta_" + std::to_string(k), m.eta[k - 1]);
    if (k < m.K) add_scale("slot_" + std::to_string(k + 1), pow2(m.sigma_shift[k - 1]));
  }
}

IntersectionSet::~IntersectionSet() = default;
IntersectionSet::IntersectionSet(IntersectionSet&&) noexcept = default;
IntersectionSet& IntersectionSet::operator=(IntersectionSet&&) noexcept = default;

const CantorSchedule& IntersectionSet::schedule() const { return impl_->schedule; }
std::uint64_t IntersectionSet::seed() const { return impl_->seed; }
std::int64_t IntersectionSet::precision_bits() const { return impl_->P; }
int IntersectionSet::node_levels() const { return 2 * impl_->K; }

double IntersectionSet::log2_count(int node_level) const {
  if (node_level < 0 || node_level > 2 * impl_->K) throw std::out_of_range("node level");
  return impl_->log2_counts[node_level];
}

const std::vector<IntersectionSet::Scale>& IntersectionSet::scales() const { return impl_->scale_list; }

std::size_t IntersectionSet::sample_point(std::uint64_t index) {
  Impl& m = *impl_;
  m.word_counter = 0;
  mpz_class left = 0;
  std::uint64_t id = 0;
  for (int k = 1; k <= m.K; ++k) {
    // choose an I child
    if (k == 1) {
      mpz_class i = m.uniform_below(m.root_count, index);
      left = i << static_cast<mp_bitcnt_t>(m.root_shift);
      id = mix(id, i);
    } else {
      auto sh = static_cast<mp_bitcnt_t>(m.sigma_shift[k - 2]);
      mpz_class base;
      mpz_cdiv_q_2exp(base.get_mpz_t(), left.get_mpz_t(), sh);
      base <<= sh;
      mpz_class i = m.uniform_below(m.b[k - 2], index);
      left = base + (i << sh);
      id = mix(id, i);
    }
    mpz_class i = m.uniform_below(m.a[k - 1], index);
    mpz_class c = m.j_center(k, left, id, i);
    id = mix(id, i);
    left = c - m.half_eta[k - 1];
    if (k == m.K) {
      m.points.push_back(c);
      return m.points.size() - 1;
    }
  }
  throw std::logic_error("unreachable");
}

std::string IntersectionSet::describe_point(std::size_t point) const {
  const mpz_class& x = impl_->points.at(point);
  std::ostringstream os;
  os.precision(17);
  mpz_class top = x >> static_cast<mp_bitcnt_t>(impl_->P - 53);
  os << top.get_d() * 0x1p-53 << " (" << impl_->P << "-bit position)";
  return os.str();
}

std::pair<double, double> IntersectionSet::log2_ball_mass(std::size_t point, std::size_t scale) const {
  const Impl& m = *impl_;
  const mpz_class& x = m.points.at(point);
  const mpz_class& r = m.scale_radius.at(scale);
  MassAcc acc;
  if (2 * r >= m.one) return {0.0, 0.0};
  mpz_class lo = x - r, hi = x + r;
  auto piece = [&](const mpz_class& a, const mpz_class& b) { m.visit(0, mpz_class(0), 0, a, b, acc); };
  if (lo < 0) {
    piece(lo + m.one, m.one);
    piece(mpz_class(0), hi);
  } else if (hi > m.one) {
    piece(lo, m.one);
    piece(mpz_class(0), hi - m.one);
  } else {
    piece(lo, hi);
  }
  return {acc.lower, acc.upper};
}

std::vector<std::pair<double, double>> IntersectionSet::box_count_points() const {
  std::vector<std::pair<double, double>> out;
  const auto& lv = impl_->schedule.levels;
  for (int k = 1; k <= impl_->K; ++k) {
    out.emplace_back(static_cast<double>(lv[k - 1].delta_exp), impl_->log2_counts[2 * k - 1]);
    out.emplace_back(static_cast<double>(lv[k - 1].eta_exp), impl_->log2_counts[2 * k]);
  }
  return out;
}

}  // namespace rcover
