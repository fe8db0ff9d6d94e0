#include "rcover/covering_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rcover/estimators.hpp"
#include "rcover/parallel.hpp"

namespace rcover {

StageWindow::StageWindow(std::uint64_t first, std::uint64_t last) : first_(first), last_(last) {
  if (first < 1 || first > last) throw std::invalid_argument("stage window needs 1 <= first <= last");
}

CoveringRealization::CoveringRealization(std::uint64_t seed, LengthSequenceSpec spec, std::uint64_t count)
    : seed_(seed), spec_(std::move(spec)), count_(count) {
  if (count < 1) throw std::invalid_argument("realization needs at least one center");
  if (Magnitude::exact(count) > spec_.last_index()) throw std::out_of_range("realization exceeds the sequence horizon");
}

std::uint64_t CoveringRealization::center_word(std::uint64_t j, int c) const {
  if (j < 1 || j > count_) throw std::out_of_range("center index outside the realization");
  std::uint64_t lane = (j - 1) * static_cast<std::uint64_t>(dim()) + static_cast<std::uint64_t>(c);
  CounterRng rng(seed_);
  return unit_fixed(rng.block(streams::centers, lane >> 1)[lane & 1]);
}

TorusPoint CoveringRealization::center(std::uint64_t j) const {
  std::array<double, kMaxDim> x{};
  for (int c = 0; c < dim(); ++c) x[c] = unit_double(center_word(j, c));
  return TorusPoint(std::span<const double>(x.data(), dim()));
}

CoveringRealization realize(std::uint64_t seed, const LengthSequenceSpec& spec, std::uint64_t count) {
  return CoveringRealization(seed, spec, count);
}

void for_each_ball_cube(const TorusBall& b, int level, StageMode mode,
                        const std::function<void(const DyadicCube&)>& visit) {
  int d = b.center().dim();
  std::int64_t side = std::int64_t{1} << level;
  std::array<std::int64_t, kMaxDim> lo{}, count{};
  for (int c = 0; c < d; ++c) {
    double x = b.center()[c];
    auto a = static_cast<std::int64_t>(std::floor(std::ldexp(x - b.radius(), level)));
    auto z = static_cast<std::int64_t>(std::floor(std::ldexp(x + b.radius(), level)));
    lo[c] = a;
    count[c] = std::min<std::int64_t>(z - a + 1, side);
  }
  std::array<std::int64_t, kMaxDim> off{};
  std::array<std::uint64_t, kMaxDim> idx{};
  while (true) {
    for (int c = 0; c < d; ++c) idx[c] = static_cast<std::uint64_t>(((lo[c] + off[c]) % side + side) % side);
    DyadicCube q(level, std::span<const std::uint64_t>(idx.data(), d));
    bool take = mode == StageMode::contained ? ball_contains_cube(b, q) : ball_intersects_cube(b, q);
    if (take) visit(q);
    int c = 0;
    while (c < d && ++off[c] == count[c]) off[c++] = 0;
    if (c == d) break;
  }
}

GridSet empty_gridset(int dim, int level) { return GridSet(dim, level); }

GridSet stage_gridset(const CoveringRealization& r, const StageWindow& w, int level, StageMode mode) {
  if (level < 1) throw std::invalid_argument("stage grid level must be >= 1");
  if (w.last() > r.size()) throw std::out_of_range("window beyond the realization");
  GridSet g(r.dim(), level);
  for (std::uint64_t j = w.first(); j <= w.last(); ++j) {
    double l = r.diameter(j);
    if (l > 1.0) throw std::invalid_argument("ball radius cap violated");
    for_each_ball_cube(r.ball(j), level, mode, [&](const DyadicCube& q) { g.insert(q); });
  }
  return g;
}

std::uint64_t count_N_Q_n(const CoveringRealization& r, const DyadicCube& q, int n, BandRule rule) {
  if (n < q.level()) throw std::invalid_argument("count_N_Q_n needs n >= level of Q");
  if (q.dim() != r.dim()) throw std::invalid_argument("cube dimension differs from the realization");
  double root_d = std::sqrt(static_cast<double>(r.dim()));
  double hi = std::ldexp(root_d, -q.level());
  double lo = rule == BandRule::diameter_band ? std::ldexp(root_d, -n) : 0.0;
  auto [first, last] = indices_with_length_in(r.spec(), lo, hi, 1, r.size());
  std::uint64_t count = 0;
  for (std::uint64_t j = first; j <= last; ++j) {
    TorusPoint x = r.center(j);
    DyadicCube qj = cube_of_point(x, n);
    if (!cube_subset(qj, q)) continue;
    if (rule == BandRule::exact_containment && !ball_contains_cube(r.ball(j), qj)) continue;
    ++count;
  }
  return count;
}

double measure_fraction(const GridSet& g) {
  return static_cast<double>(g.popcount()) / static_cast<double>(g.cube_count());
}

bool hits(const GridSet& e, const GridSet& f) {
  if (e.dim() != f.dim()) throw std::invalid_argument("hits: dimension mismatch");
  if (e.level() == f.level()) return e.intersects(f);
  if (e.level() < f.level()) return e.refined(f.level()).intersects(f);
  return e.intersects(f.refined(e.level()));
}

ExperimentReport hitting_probability_mc(const LengthSequenceSpec& spec, const GridSet& target,
                                        const std::vector<StageWindow>& windows, int level,
                                        const HittingMcOptions& opt) {
  if (opt.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (windows.empty()) throw std::invalid_argument("at least one window is required");
  if (target.dim() != spec.dim()) throw std::invalid_argument("target dimension differs from the sequence");
  GridSet tgt = target.level() < level ? target.refined(level) : target;
  if (tgt.level() != level) throw std::invalid_argument("target grid is finer than the simulation level");

  std::uint64_t horizon = 0;
  for (const auto& w : windows) horizon = std::max(horizon, w.last());
  std::size_t nw = windows.size();
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(opt.trials) * nw, 0);

  parallel_for(static_cast<std::size_t>(opt.trials), opt.threads, [&](std::size_t t) {
    CoveringRealization r(opt.base_seed + t, spec, horizon);
    for (std::size_t k = 0; k < nw; ++k) {
      bool found = false;
      for (std::uint64_t j = windows[k].first(); j <= windows[k].last() && !found; ++j)
        for_each_ball_cube(r.ball(j), level, StageMode::intersected, [&](const DyadicCube& q) {
          if (tgt.contains(q)) found = true;
        });
      hit[t * nw + k] = found;
    }
  });

  ExperimentReport rep;
  rep.name = "hitting_probability_mc";
  rep.parameters = {{"level", level},
                    {"trials", opt.trials},
                    {"base_seed", opt.base_seed},
                    {"target_cubes", tgt.popcount()},
                    {"predicted_direction", opt.predicted_direction}};
  std::vector<double> series;
  double last_lo = 0.0, last_hi = 1.0;
  for (std::size_t k = 0; k < nw; ++k) {
    std::uint64_t s = 0;
    for (int t = 0; t < opt.trials; ++t) s += hit[static_cast<std::size_t>(t) * nw + k];
    double f = static_cast<double>(s) / opt.trials;
    auto iv = binomial_interval(s, static_cast<std::uint64_t>(opt.trials), 0.99);
    std::string setting = "window=[" + std::to_string(windows[k].first()) + "," + std::to_string(windows[k].last()) + "]";
    rep.checks.push_back(make_check("hit_frequency", setting, f, iv.lo, iv.hi, NAN, TheoryKind::exact));
    series.push_back(f);
    last_lo = iv.lo;
    last_hi = iv.hi;
  }
  rep.checks.insert(rep.checks.begin(),
                    make_check("hit_trend", "windows", series.back(), last_lo, last_hi,
                               static_cast<double>(opt.predicted_direction), TheoryKind::limit_trend, series));
  rep.finalize();
  return rep;
}

}  // namespace rcover
