#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace rcover {

// Nonnegative count or index that may be far beyond 64 bits.
// Values below 2^62 are kept exactly; larger ones only as log2.
class Magnitude {
 public:
  Magnitude() = default;

  static Magnitude exact(std::uint64_t v) {
    Magnitude m;
    m.exact_ = true;
    m.value_ = v;
    m.log2_ = v == 0 ? -INFINITY : std::log2(static_cast<double>(v));
    return m;
  }

  // 2^x rounded up to an integer; exact when it fits.
  static Magnitude ceil_exp2(double x);
  static Magnitude from_log2(double log2v);

  bool is_exact() const { return exact_; }
  std::uint64_t value() const;  // throws when not exact
  double log2() const { return log2_; }
  double approx() const { return exact_ ? static_cast<double>(value_) : std::exp2(log2_); }

  std::string to_string() const;

  friend Magnitude operator+(const Magnitude& a, const Magnitude& b);
  // a - b for a >= b
  friend Magnitude operator-(const Magnitude& a, const Magnitude& b);
  friend Magnitude operator*(const Magnitude& a, const Magnitude& b);

  friend bool operator==(const Magnitude& a, const Magnitude& b);
  friend std::partial_ordering operator<=>(const Magnitude& a, const Magnitude& b);

 private:
  bool exact_ = true;
  std::uint64_t value_ = 0;
  double log2_ = -INFINITY;
};

inline constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 62;

}  // namespace rcover
