#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rcover/magnitude.hpp"

namespace rcover {

// l_n = c * n^(-1/alpha)
struct PowerLaw {
  double alpha = 0.5;
  double c = 0.5;
};

// Constant length 2^log2_length on [first_index, next block's first_index).
struct LengthBlock {
  double log2_length = -1.0;
  Magnitude first_index = Magnitude::exact(1);
};

// The last block runs up to end_index (exclusive).
struct BlockConstant {
  std::vector<LengthBlock> blocks;
  Magnitude end_index = Magnitude::exact(2);
};

struct ExplicitLengths {
  std::vector<double> values;
};

class LengthSequenceSpec {
 public:
  using Variant = std::variant<PowerLaw, BlockConstant, ExplicitLengths>;

  LengthSequenceSpec(Variant v, int dim);

  static LengthSequenceSpec power_law(double alpha, int dim = 1, double c = 0.5);
  static LengthSequenceSpec block_constant(std::vector<LengthBlock> blocks, Magnitude end_index, int dim = 1);
  static LengthSequenceSpec explicit_lengths(std::vector<double> values, int dim = 1);

  const Variant& variant() const { return v_; }
  int dim() const { return dim_; }

  bool unbounded() const { return std::holds_alternative<PowerLaw>(v_); }
  // Last valid index. Unbounded sequences report 2^64-1.
  Magnitude last_index() const;

 private:
  Variant v_;
  int dim_;
};

double value_at(const LengthSequenceSpec& spec, std::uint64_t n);
double log2_value_at(const LengthSequenceSpec& spec, std::uint64_t n);

// Indices j in [first, last] with lo <= l_j <= hi, as an inclusive range;
// empty when first > last in the result.
std::pair<std::uint64_t, std::uint64_t> indices_with_length_in(const LengthSequenceSpec& spec, double lo, double hi,
                                                               std::uint64_t first, std::uint64_t last);

struct ExponentValue {
  double value = 0.0;
  // Set when the value comes from a finite prefix rather than a closed form.
  bool finite_horizon = false;
};

ExponentValue alpha_exponent(const LengthSequenceSpec& spec);
ExponentValue critical_sum_exponent(const LengthSequenceSpec& spec);

// Band k holds lengths in [2^(1-k), 2^(2-k)).
std::int64_t dyadic_band(double length);
std::int64_t dyadic_band_log2(double log2_length);

struct ScaleBand {
  std::int64_t k = 0;
  Magnitude count;
  bool complete = true;
};

struct ScaleCensus {
  std::vector<ScaleBand> bands;  // nonzero bands, increasing k
  Magnitude horizon;
  std::int64_t first_band = 0;
  std::int64_t last_band = 0;

  Magnitude count(std::int64_t k) const;
  Magnitude total() const;
};

ScaleCensus scale_census(const LengthSequenceSpec& spec, Magnitude horizon);

enum class ConditionCVerdict { consistent, violated, inconclusive };
std::string to_string(ConditionCVerdict v);

struct ConditionCDiagnosis {
  ConditionCVerdict verdict = ConditionCVerdict::inconclusive;
  std::vector<std::int64_t> witness;
  double limit_estimate = 0.0;
  std::string reason;
  bool finite_horizon = true;
};

inline constexpr int kConditionCMinBands = 10;
inline constexpr int kConditionCWitness = 5;
inline constexpr double kConditionCTolerance = 0.05;
inline constexpr double kConditionCRatioTolerance = 0.1;

ConditionCDiagnosis condition_c_diagnose(const ScaleCensus& census);

enum class MeasureClass { measure_zero, full_measure };
std::string to_string(MeasureClass m);

MeasureClass borel_cantelli_classify(const LengthSequenceSpec& spec);

}  // namespace rcover
