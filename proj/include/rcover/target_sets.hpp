#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rcover/gridset.hpp"
#include "rcover/length_sequences.hpp"
#include "rcover/magnitude.hpp"

namespace rcover {

using u128 = unsigned __int128;

enum class ScheduleKind { prop13, prop14, generic };
std::string to_string(ScheduleKind k);

// Per-level quantities of a nested-interval schedule. Lengths are powers of
// two and stored by exponent: delta_k = 2^-delta_exp, eta_k = 2^-eta_exp.
struct ScheduleLevel {
  int k = 0;
  std::int64_t m = 0;
  std::int64_t n = 0;
  double s = 0.0;     // prop13 target exponent s_k
  double beta = 0.0;  // prop14 covering exponent beta_k
  double eps = 0.0;
  // Each level-(k-1) interval is split into 2^slot_exp slots and the
  // leftmost delta_k-subinterval of every slot is kept.
  std::int64_t slot_exp = 0;
  std::int64_t delta_exp = 0;
  std::int64_t eta_exp = 0;
  Magnitude N;        // intervals of F at this level
  Magnitude L;        // prop14: intervals of G's level-k I family
  Magnitude M;        // prop14: intervals of G's level-k J family
  Magnitude j_per_i;  // prop14: J intervals inside each I
  Magnitude i_per_j;  // prop14: level-k I intervals inside each level-(k-1) J
  double log2_bound = 0.0;  // prop13 block hit bound; prop14 covering failure bound
  Magnitude block_first;    // covering indices [block_first, block_end)
  Magnitude block_end;
  double ratio_L = 0.0;  // log L_k / -log delta_k
  double ratio_M = 0.0;  // log M_k / -log eta_k
};

struct CantorSchedule {
  ScheduleKind kind = ScheduleKind::generic;
  double t = 0.0;
  double alpha = 0.0;
  std::vector<ScheduleLevel> levels;
};

inline constexpr std::int64_t kScheduleCap = std::int64_t{1} << 20;
inline constexpr double kProp14RatioTolerance = 0.05;

// Thrown when no schedule parameter below the cap satisfies the constraints.
class InfeasibleSchedule : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CantorSchedule build_schedule_prop13(const std::vector<double>& s, const std::vector<double>& eps, int depth);

// Empty beta or eps select beta_k = alpha (1 - 2^-(k+2)) and eps_k = 2^-k.
CantorSchedule build_schedule_prop14(double t, double alpha, const std::vector<double>& beta,
                                     const std::vector<double>& eps, int depth);

// Homogeneous Cantor schedule: 2^m_k slots per parent, kept length 2^-n_k of the parent.
CantorSchedule generic_schedule(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& n);

// Sequence of covering diameters driven by a schedule: delta_k on prop13
// blocks, eta_k on prop14 blocks.
LengthSequenceSpec covering_sequence(const CantorSchedule& schedule);

struct FullTorus {};
struct SinglePoint {};
struct SelfSimilarCantor {
  double ratio = 1.0 / 3.0;
  int copies = 2;
};
struct Scheduled {
  CantorSchedule schedule;
};

class TargetSetSpec {
 public:
  using Variant = std::variant<FullTorus, SinglePoint, SelfSimilarCantor, Scheduled>;
  explicit TargetSetSpec(Variant v);

  static TargetSetSpec full_torus() { return TargetSetSpec(FullTorus{}); }
  static TargetSetSpec single_point() { return TargetSetSpec(SinglePoint{}); }
  static TargetSetSpec self_similar(double ratio, int copies) { return TargetSetSpec(SelfSimilarCantor{ratio, copies}); }
  static TargetSetSpec scheduled(CantorSchedule s) { return TargetSetSpec(Scheduled{std::move(s)}); }

  const Variant& variant() const { return v_; }
  std::string name() const;

 private:
  Variant v_;
};

// Closed intervals [offset, offset + length] * base^-exponent, sorted.
struct IntervalFamily {
  int level = 0;
  std::uint32_t base = 2;
  int exponent = 0;
  u128 length = 1;
  std::vector<u128> offsets;
};

inline constexpr std::size_t kMaxFamilySize = 10'000'000;

// Levels 1..depth. Throws std::length_error beyond the budget.
std::vector<IntervalFamily> build_levels(const TargetSetSpec& spec, int depth);

// Level-n cubes meeting some interval, with intervals read as half-open
// [a, a+len) (a single cube for zero length).
GridSet to_gridset(const IntervalFamily& family, int level);

struct DimensionPair {
  double hausdorff = 0.0;
  double packing = 0.0;
  bool rigorous = true;
};

DimensionPair analytic_dimensions(const TargetSetSpec& spec);

// Mass 1/#family of the level-`level` interval starting at `offset`.
double natural_measure_weight(const std::vector<IntervalFamily>& levels, int level, u128 offset);
// Mass of a dyadic cube; throws if some finest interval straddles its boundary.
double natural_measure_of_cube(const std::vector<IntervalFamily>& levels, const DyadicCube& cube);

// Exact hit test of closed arcs [c - h, c + h] (64-bit fixed point) against F, d = 1.
class TargetGeometry {
 public:
  explicit TargetGeometry(TargetSetSpec spec);

  bool meets_arc(std::uint64_t center, std::uint64_t half) const;
  // Lebesgue measure of the closed r-neighbourhood of F on the circle; NaN if unknown.
  double neighbourhood_measure(double r) const;
  // True when meets_arc decides against F itself rather than a finite-level cover.
  bool exact() const { return exact_; }

 private:
  bool meets_piece(u128 a, u128 b) const;
  bool cantor_meets(u128 a, u128 b, int m, std::uint64_t u) const;

  TargetSetSpec spec_;
  std::uint64_t q_ = 0;
  std::uint64_t copies_ = 0;
  std::uint64_t gap_step_ = 0;
  int max_depth_ = 0;
  IntervalFamily finest_;
  bool exact_ = true;
  bool point_ = false;
  bool full_ = false;
};

// Text format: header line "intervals 1", then "level <k>", "base <b>",
// "exponent <e>", "length <numerator>", "count <n>" and n lines of
// "<offset numerator> <exponent>".
void write_intervals(std::ostream& os, const IntervalFamily& f);
IntervalFamily read_intervals(std::istream& is);

std::string u128_to_string(u128 v);
u128 u128_from_string(const std::string& s);

}  // namespace rcover
