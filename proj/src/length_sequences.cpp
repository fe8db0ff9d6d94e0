#include "rcover/length_sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rcover {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Magnitude kUnbounded = Magnitude::exact(std::numeric_limits<std::uint64_t>::max());

// Index of the block holding n, or -1.
int block_of(const BlockConstant& b, const Magnitude& n) {
  if (n < b.blocks.front().first_index || n >= b.end_index) return -1;
  auto it = std::upper_bound(b.blocks.begin(), b.blocks.end(), n,
                             [](const Magnitude& v, const LengthBlock& blk) { return v < blk.first_index; });
  return static_cast<int>(it - b.blocks.begin()) - 1;
}

Magnitude block_end(const BlockConstant& b, std::size_t i) {
  return i + 1 < b.blocks.size() ? b.blocks[i + 1].first_index : b.end_index;
}

// Last index of block i.
Magnitude block_last(const BlockConstant& b, std::size_t i) { return block_end(b, i) - Magnitude::exact(1); }

std::size_t tail_start(std::size_t count) { return count / 2; }

// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = static_cast<double>(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

LengthSequenceSpec::LengthSequenceSpec(Variant v, int dim) : v_(std::move(v)), dim_(dim) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("sequence dimension must be in [1, 8]");
  std::visit(Overloaded{
                 [&](const PowerLaw& p) {
                   if (!(p.alpha > 0.0) || p.alpha > dim)
                     throw std::invalid_argument("power law alpha must be in (0, d]");
                   if (!(p.c > 0.0) || p.c > 0.5) throw std::invalid_argument("power law prefactor c must be in (0, 1/2]");
                 },
                 [&](const BlockConstant& b) {
                   if (b.blocks.empty()) throw std::invalid_argument("block sequence needs at least one block");
                   if (!(b.blocks.front().first_index == Magnitude::exact(1)))
                     throw std::invalid_argument("first block must start at index 1");
                   for (std::size_t i = 0; i < b.blocks.size(); ++i) {
                     const auto& blk = b.blocks[i];
                     if (!(blk.log2_length <= -1.0)) throw std::invalid_argument("block lengths must be <= 1/2");
                     if (i > 0) {
                       if (!(b.blocks[i - 1].first_index < blk.first_index))
                         throw std::invalid_argument("block first indices must increase");
                       if (blk.log2_length > b.blocks[i - 1].log2_length)
                         throw std::invalid_argument("block lengths must be non-increasing");
                     }
                   }
                   if (!(b.blocks.back().first_index < b.end_index))
                     throw std::invalid_argument("block end index must follow the last block start");
                 },
                 [&](const ExplicitLengths& e) {
                   if (e.values.empty()) throw std::invalid_argument("explicit sequence is empty");
                   for (std::size_t i = 0; i < e.values.size(); ++i) {
                     if (!(e.values[i] > 0.0) || e.values[i] > 0.5)
                       throw std::invalid_argument("explicit lengths must be in (0, 1/2]");
                     if (i > 0 && e.values[i] > e.values[i - 1])
                       throw std::invalid_argument("explicit lengths must be non-increasing");
                   }
                 },
             },
             v_);
}

LengthSequenceSpec LengthSequenceSpec::power_law(double alpha, int dim, double c) {
  return LengthSequenceSpec(PowerLaw{alpha, c}, dim);
}

LengthSequenceSpec LengthSequenceSpec::block_constant(std::vector<LengthBlock> blocks, Magnitude end_index, int dim) {
  return LengthSequenceSpec(BlockConstant{std::move(blocks), end_index}, dim);
}

LengthSequenceSpec LengthSequenceSpec::explicit_lengths(std::vector<double> values, int dim) {
  return LengthSequenceSpec(ExplicitLengths{std::move(values)}, dim);
}

Magnitude LengthSequenceSpec::last_index() const {
  return std::visit(Overloaded{
                        [](const PowerLaw&) { return kUnbounded; },
                        [](const BlockConstant& b) { return b.end_index - Magnitude::exact(1); },
                        [](const ExplicitLengths& e) { return Magnitude::exact(e.values.size()); },
                    },
                    v_);
}

double value_at(const LengthSequenceSpec& spec, std::uint64_t n) {
  if (n < 1) throw std::out_of_range("sequence index starts at 1");
  return std::visit(Overloaded{
                        [&](const PowerLaw& p) { return p.c * std::pow(static_cast<double>(n), -1.0 / p.alpha); },
                        [&](const BlockConstant& b) {
                          int i = block_of(b, Magnitude::exact(n));
                          if (i < 0) throw std::out_of_range("index beyond the block sequence");
                          return std::exp2(b.blocks[i].log2_length);
                        },
                        [&](const ExplicitLengths& e) {
                          if (n > e.values.size()) throw std::out_of_range("index beyond the explicit horizon");
                          return e.values[n - 1];
                        },
                    },
                    spec.variant());
}

double log2_value_at(const LengthSequenceSpec& spec, std::uint64_t n) {
  if (n < 1) throw std::out_of_range("sequence index starts at 1");
  return std::visit(Overloaded{
                        [&](const PowerLaw& p) {
                          return std::log2(p.c) - std::log2(static_cast<double>(n)) / p.alpha;
                        },
                        [&](const BlockConstant& b) {
                          int i = block_of(b, Magnitude::exact(n));
                          if (i < 0) throw std::out_of_range("index beyond the block sequence");
                          return b.blocks[i].log2_length;
                        },
                        [&](const ExplicitLengths& e) {
                          if (n > e.values.size()) throw std::out_of_range("index beyond the explicit horizon");
                          return std::log2(e.values[n - 1]);
                        },
                    },
                    spec.variant());
}

std::pair<std::uint64_t, std::uint64_t> indices_with_length_in(const LengthSequenceSpec& spec, double lo, double hi,
                                                               std::uint64_t first, std::uint64_t last) {
  if (first < 1 || first > last) return {1, 0};
  // first index in [first, last+1] with l_j <= hi
  std::uint64_t a = first, b = last + 1;
  while (a < b) {
    std::uint64_t mid = a + (b - a) / 2;
    if (value_at(spec, mid) <= hi)
      b = mid;
    else
      a = mid + 1;
  }
  std::uint64_t begin = a;
  // first index in [first, last+1] with l_j < lo
  a = first;
  b = last + 1;
  while (a < b) {
    std::uint64_t mid = a + (b - a) / 2;
    if (value_at(spec, mid) < lo)
      b = mid;
    else
      a = mid + 1;
  }
  if (a == 0 || begin > a - 1) return {1, 0};
  return {begin, a - 1};
}

ExponentValue alpha_exponent(const LengthSequenceSpec& spec) {
  return std::visit(Overloaded{
                        [](const PowerLaw& p) { return ExponentValue{p.alpha, false}; },
                        [](const BlockConstant& b) {
                          // limsup of log n / -log l_n is attained at block ends
                          double best = 0.0;
                          for (std::size_t i = tail_start(b.blocks.size()); i < b.blocks.size(); ++i) {
                            double log_n = block_last(b, i).log2();
                            double log_inv_l = -b.blocks[i].log2_length;
                            best = std::max(best, log_n / log_inv_l);
                          }
                          return ExponentValue{best, false};
                        },
                        [](const ExplicitLengths& e) {
                          double best = 0.0;
                          for (std::size_t n = std::max<std::size_t>(1, tail_start(e.values.size()));
                               n <= e.values.size(); ++n)
                            best = std::max(best, std::log2(static_cast<double>(n)) / -std::log2(e.values[n - 1]));
                          return ExponentValue{best, true};
                        },
                    },
                    spec.variant());
}

ExponentValue critical_sum_exponent(const LengthSequenceSpec& spec) {
  return std::visit(Overloaded{
                        // sum_n n^(-s/alpha) diverges iff s <= alpha
                        [](const PowerLaw& p) { return ExponentValue{p.alpha, false}; },
                        [](const BlockConstant& b) {
                          // partial sums up to a block end reach 1 while E * l^s >= 1
                          double best = 0.0;
                          for (std::size_t i = tail_start(b.blocks.size()); i < b.blocks.size(); ++i) {
                            Magnitude reach = block_last(b, i);
                            double s = reach.log2() / -b.blocks[i].log2_length;
                            best = std::max(best, s);
                          }
                          return ExponentValue{best, false};
                        },
                        [](const ExplicitLengths& e) {
                          double best = 0.0;
                          for (std::size_t n = std::max<std::size_t>(1, tail_start(e.values.size()));
                               n <= e.values.size(); ++n) {
                            double s = std::log2(static_cast<double>(n)) / -std::log2(e.values[n - 1]);
                            best = std::max(best, s);
                          }
                          return ExponentValue{best, true};
                        },
                    },
                    spec.variant());
}

std::int64_t dyadic_band(double length) {
  if (!(length > 0.0)) throw std::invalid_argument("dyadic_band of a nonpositive length");
  int e = 0;
  std::frexp(length, &e);
  return 2 - e;
}

std::int64_t dyadic_band_log2(double log2_length) {
  return 1 - static_cast<std::int64_t>(std::floor(log2_length));
}

Magnitude ScaleCensus::count(std::int64_t k) const {
  for (const auto& b : bands)
    if (b.k == k) return b.count;
  return Magnitude::exact(0);
}

Magnitude ScaleCensus::total() const {
  Magnitude t = Magnitude::exact(0);
  for (const auto& b : bands) t = t + b.count;
  return t;
}

ScaleCensus scale_census(const LengthSequenceSpec& spec, Magnitude horizon) {
  if (horizon < Magnitude::exact(1)) throw std::invalid_argument("census horizon must be >= 1");
  Magnitude last = spec.last_index();
  if (horizon > last) horizon = last;
  ScaleCensus census;
  census.horizon = horizon;

  std::map<std::int64_t, ScaleBand> acc;
  auto add = [&](std::int64_t k, Magnitude count, bool complete) {
    auto [it, fresh] = acc.try_emplace(k, ScaleBand{k, Magnitude::exact(0), true});
    it->second.count = it->second.count + count;
    it->second.complete = it->second.complete && complete;
  };

  if (const auto* b = std::get_if<BlockConstant>(&spec.variant())) {
    for (std::size_t i = 0; i < b->blocks.size(); ++i) {
      const auto& blk = b->blocks[i];
      if (blk.first_index > horizon) break;
      Magnitude end = block_end(*b, i);
      Magnitude stop = end - Magnitude::exact(1) > horizon ? horizon + Magnitude::exact(1) : end;
      bool complete = stop == end;
      std::int64_t k = dyadic_band_log2(blk.log2_length);
      if (complete && i + 1 < b->blocks.size() && b->blocks[i + 1].first_index > horizon &&
          dyadic_band_log2(b->blocks[i + 1].log2_length) == k)
        complete = false;
      add(k, stop - blk.first_index, complete);
    }
    census.first_band = dyadic_band_log2(b->blocks.front().log2_length);
    // last block starting at or before the horizon; block_of would reject
    // horizon == end_index - 1 once the magnitudes are approximate
    auto it = std::upper_bound(b->blocks.begin(), b->blocks.end(), horizon,
                               [](const Magnitude& v, const LengthBlock& blk) { return v < blk.first_index; });
    census.last_band = dyadic_band_log2(std::prev(it)->log2_length);
  } else {
    if (!horizon.is_exact() || horizon.value() > (std::uint64_t{1} << 36))
      throw std::invalid_argument("census horizon too large to enumerate");
    std::uint64_t h = horizon.value();
    std::int64_t run_band = dyadic_band(value_at(spec, 1));
    std::uint64_t run = 0;
    census.first_band = run_band;
    for (std::uint64_t n = 1; n <= h; ++n) {
      std::int64_t k = dyadic_band(value_at(spec, n));
      if (k != run_band) {
        add(run_band, Magnitude::exact(run), true);
        run_band = k;
        run = 0;
      }
      ++run;
    }
    bool complete = true;
    if (Magnitude::exact(h) < last) complete = dyadic_band(value_at(spec, h + 1)) != run_band;
    add(run_band, Magnitude::exact(run), complete);
    census.last_band = run_band;
  }
  for (auto& [k, band] : acc)
    if (band.count > Magnitude::exact(0)) census.bands.push_back(band);
  return census;
}

std::string to_string(ConditionCVerdict v) {
  switch (v) {
    case ConditionCVerdict::consistent: return "consistent";
    case ConditionCVerdict::violated: return "violated";
    case ConditionCVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

ConditionCDiagnosis condition_c_diagnose(const ScaleCensus& census) {
  ConditionCDiagnosis out;
  std::vector<const ScaleBand*> full;
  for (const auto& b : census.bands)
    if (b.complete) full.push_back(&b);

  auto ratio_of = [](const ScaleBand* b) { return b->count.log2() / static_cast<double>(b->k); };

  if (static_cast<int>(full.size()) >= kConditionCMinBands) {
    std::size_t w0 = full.size() - kConditionCWitness;
    std::vector<double> vals;
    for (std::size_t i = w0; i < full.size(); ++i) {
      out.witness.push_back(full[i]->k);
      vals.push_back(ratio_of(full[i]));
    }
    std::vector<double> xs, ys;
    for (std::size_t i = tail_start(full.size()); i < full.size(); ++i) {
      xs.push_back(static_cast<double>(full[i]->k));
      ys.push_back(full[i]->count.log2());
    }
    out.limit_estimate = ls_slope(xs, ys);

    bool ratios_ok = true;
    for (std::size_t i = 1; i < out.witness.size(); ++i)
      if (static_cast<double>(out.witness[i]) / static_cast<double>(out.witness[i - 1]) > 1.0 + kConditionCRatioTolerance)
        ratios_ok = false;
    double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    double spread = 0.0;
    for (double v : vals) spread = std::max(spread, std::abs(v - mean));
    if (ratios_ok && spread < kConditionCTolerance) {
      out.verdict = ConditionCVerdict::consistent;
      out.reason = "tail bands are dense and log2 n_k / k is stable";
    } else {
      out.verdict = ConditionCVerdict::violated;
      out.reason = ratios_ok ? "log2 n_k / k does not stabilize on the tail bands"
                             : "consecutive tail bands are too far apart";
    }
    return out;
  }

  if (!full.empty()) out.limit_estimate = ratio_of(full.back());
  for (const auto* b : full) out.witness.push_back(b->k);
  // Few occupied bands spread over a long scale range: every subsequence of
  // occupied bands has k_{i+1}/k_i >= 2, so no ratio can tend to 1.
  std::int64_t span = census.last_band - census.first_band + 1;
  bool sparse = full.size() >= 3 && span >= kConditionCMinBands;
  for (std::size_t i = 1; sparse && i < full.size(); ++i)
    if (static_cast<double>(full[i]->k) < 2.0 * static_cast<double>(full[i - 1]->k)) sparse = false;
  if (sparse) {
    out.verdict = ConditionCVerdict::violated;
    out.reason = "occupied bands are geometrically sparse";
  } else {
    out.verdict = ConditionCVerdict::inconclusive;
    out.reason = "fewer than " + std::to_string(kConditionCMinBands) + " occupied bands";
  }
  return out;
}

std::string to_string(MeasureClass m) { return m == MeasureClass::full_measure ? "full_measure" : "measure_zero"; }

MeasureClass borel_cantelli_classify(const LengthSequenceSpec& spec) {
  double d = spec.dim();
  // Tail decay exponent a in l_n ~ n^(-1/a); sum l_n^d diverges iff a >= d.
  constexpr double kSlack = 1e-9;
  return std::visit(Overloaded{
                        [&](const PowerLaw& p) {
                          return p.alpha >= d ? MeasureClass::full_measure : MeasureClass::measure_zero;
                        },
                        [&](const BlockConstant& b) {
                          if (b.blocks.size() < 2) return MeasureClass::measure_zero;
                          std::vector<double> xs, ys;
                          for (std::size_t i = std::min(tail_start(b.blocks.size()), b.blocks.size() - 2);
                               i < b.blocks.size(); ++i) {
                            xs.push_back(block_last(b, i).log2());
                            ys.push_back(b.blocks[i].log2_length);
                          }
                          double slope = ls_slope(xs, ys);
                          if (slope >= 0.0) return MeasureClass::full_measure;
                          return -1.0 / slope >= d - kSlack ? MeasureClass::full_measure : MeasureClass::measure_zero;
                        },
                        [&](const ExplicitLengths& e) {
                          if (e.values.size() < 2) return MeasureClass::measure_zero;
                          std::vector<double> xs, ys;
                          for (std::size_t n = std::max<std::size_t>(1, tail_start(e.values.size()));
                               n <= e.values.size(); ++n) {
                            xs.push_back(std::log2(static_cast<double>(n)));
                            ys.push_back(std::log2(e.values[n - 1]));
                          }
                          double slope = ls_slope(xs, ys);
                          if (slope >= 0.0) return MeasureClass::full_measure;
                          return -1.0 / slope >= d - kSlack ? MeasureClass::full_measure : MeasureClass::measure_zero;
                        },
                    },
                    spec.variant());
}

}  // namespace rcover
