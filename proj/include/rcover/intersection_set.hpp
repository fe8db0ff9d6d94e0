#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rcover/target_sets.hpp"

namespace rcover {

// The Cantor set G inside E ∩ F of a prop14 schedule, for one draw of the
// covering. Positions are exact integers in units of 2^-P with P = H_K + 64.
//
// Node levels alternate: 0 is [0,1], 2k-1 is the I family of level k and 2k
// the J family of level k. Children:
//   [0,1] -> I_1   : 2^u_1 dyadic slots, leftmost delta_1 interval in each
//   I_k   -> J_k   : floor(delta_k / 3 eta_k^beta_k) arcs. Arc i covers the
//                    target point y_i = left + (3i + 3/2) eta_k^beta_k; its
//                    center is uniform within eta_k^beta_k / 2 of y_i. J is
//                    the concentric interval of length eta_k.
//   J_k   -> I_k+1 : floor(eta_k / sigma) - 2 leftmost slots of size
//                    sigma = 2^-u_{k+1} delta_k lying inside J, delta_{k+1}
//                    interval at the left of each.
// Only the arcs that G actually uses are ever generated.
class IntersectionSet {
 public:
  IntersectionSet(CantorSchedule schedule, std::uint64_t seed);
  ~IntersectionSet();
  IntersectionSet(IntersectionSet&&) noexcept;
  IntersectionSet& operator=(IntersectionSet&&) noexcept;

  const CantorSchedule& schedule() const;
  std::uint64_t seed() const;
  std::int64_t precision_bits() const;
  int node_levels() const;

  // log2 of the number of nodes at a node level, from the exact counts.
  double log2_count(int node_level) const;

  struct Scale {
    std::string name;
    double log2_radius = 0.0;
  };
  // Construction scales delta_k > 3 eta_k^beta_k > eta_k > sigma_{k+1} > delta_{k+1} ...
  const std::vector<Scale>& scales() const;

  // Draws a mu-random point (center of a deepest J) and returns its handle.
  std::size_t sample_point(std::uint64_t index);
  std::string describe_point(std::size_t point) const;

  // Bounds on log2 mu(B(x, r)) for r = scales()[scale]. The lower bound
  // counts nodes inside the ball; the upper adds deepest nodes that only
  // meet it.
  std::pair<double, double> log2_ball_mass(std::size_t point, std::size_t scale) const;

  // (log2 1/r, log2 N(r)) at r = delta_k (exact: L_k cubes) and r = eta_k
  // (lower bound M_k of the dyadic eta_k cubes meeting G).
  std::vector<std::pair<double, double>> box_count_points() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rcover
