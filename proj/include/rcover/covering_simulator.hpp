#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rcover/gridset.hpp"
#include "rcover/length_sequences.hpp"
#include "rcover/report.hpp"
#include "rcover/rng.hpp"
#include "rcover/torus_geometry.hpp"

namespace rcover {

// Inclusive index range [first, last] of the sequence.
class StageWindow {
 public:
  StageWindow(std::uint64_t first, std::uint64_t last);
  std::uint64_t first() const { return first_; }
  std::uint64_t last() const { return last_; }
  std::uint64_t size() const { return last_ - first_ + 1; }

 private:
  std::uint64_t first_;
  std::uint64_t last_;
};

// Coordinate c of center j is word (j-1)*d + c of the centers stream; each
// Philox call yields two consecutive words. The top 53 bits of a word give
// the coordinate, read either as a double or as a 64-bit fixed point value.
class CenterStream {
 public:
  CenterStream(std::uint64_t seed, int dim) : rng_(seed), dim_(dim) {}

  std::uint64_t word(std::uint64_t j, int c) {
    std::uint64_t lane = (j - 1) * static_cast<std::uint64_t>(dim_) + static_cast<std::uint64_t>(c);
    std::uint64_t blk = lane >> 1;
    if (blk != cached_) {
      cache_ = rng_.block(streams::centers, blk);
      cached_ = blk;
    }
    return unit_fixed(cache_[lane & 1]);
  }

 private:
  CounterRng rng_;
  int dim_;
  std::uint64_t cached_ = ~std::uint64_t{0};
  std::array<std::uint64_t, 2> cache_{};
};

class CoveringRealization {
 public:
  CoveringRealization(std::uint64_t seed, LengthSequenceSpec spec, std::uint64_t count);

  std::uint64_t seed() const { return seed_; }
  const LengthSequenceSpec& spec() const { return spec_; }
  std::uint64_t size() const { return count_; }
  int dim() const { return spec_.dim(); }

  std::uint64_t center_word(std::uint64_t j, int c) const;
  TorusPoint center(std::uint64_t j) const;
  double diameter(std::uint64_t j) const { return value_at(spec_, j); }
  TorusBall ball(std::uint64_t j) const { return TorusBall(center(j), diameter(j) / 2.0); }

 private:
  std::uint64_t seed_;
  LengthSequenceSpec spec_;
  std::uint64_t count_;
};

CoveringRealization realize(std::uint64_t seed, const LengthSequenceSpec& spec, std::uint64_t count);

enum class StageMode { contained, intersected };

// Calls visit(cube) for every level-n cube that the ball contains (or meets).
void for_each_ball_cube(const TorusBall& b, int level, StageMode mode, const std::function<void(const DyadicCube&)>& visit);

GridSet stage_gridset(const CoveringRealization& r, const StageWindow& w, int level, StageMode mode);
GridSet empty_gridset(int dim, int level);

enum class BandRule {
  // j with 2^-n sqrt(d) <= l_j <= 2^-n0 sqrt(d) and Q^j inside Q
  diameter_band,
  // j with l_j <= 2^-n0 sqrt(d) whose ball truly contains Q^j, Q^j inside Q
  exact_containment,
};

std::uint64_t count_N_Q_n(const CoveringRealization& r, const DyadicCube& q, int n, BandRule rule = BandRule::diameter_band);

double measure_fraction(const GridSet& g);

// Refines the coarser grid when levels differ.
bool hits(const GridSet& e, const GridSet& f);

struct HittingMcOptions {
  int trials = 1000;
  std::uint64_t base_seed = 1;
  int threads = 0;
  // Predicted direction of the hit frequency over the windows: +1, -1 or 0.
  int predicted_direction = 0;
};

ExperimentReport hitting_probability_mc(const LengthSequenceSpec& spec, const GridSet& target,
                                        const std::vector<StageWindow>& windows, int level,
                                        const HittingMcOptions& opt);

}  // namespace rcover
