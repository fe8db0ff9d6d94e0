#include "rcover/magnitude.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace rcover {

Magnitude Magnitude::ceil_exp2(double x) {
  if (x < 61.0) {
    long double v = std::ceil(std::exp2l(static_cast<long double>(x)));
    return exact(static_cast<std::uint64_t>(v));
  }
  return from_log2(x);
}

Magnitude Magnitude::from_log2(double log2v) {
  if (log2v < 61.0) {
    long double v = std::round(std::exp2l(static_cast<long double>(log2v)));
    return exact(static_cast<std::uint64_t>(v));
  }
  Magnitude m;
  m.exact_ = false;
  m.log2_ = log2v;
  return m;
}

std::uint64_t Magnitude::value() const {
  if (!exact_) throw std::overflow_error("magnitude 2^" + std::to_string(log2_) + " has no 64-bit value");
  return value_;
}

std::string Magnitude::to_string() const {
  if (exact_) return std::to_string(value_);
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << "2^" << log2_;
  return os.str();
}

namespace {

// log2(2^a + 2^b)
double log2_sum(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -INFINITY) return a;
  return a + std::log2(1.0 + std::exp2(b - a));
}

}  // namespace

Magnitude operator+(const Magnitude& a, const Magnitude& b) {
  if (a.exact_ && b.exact_ && a.value_ < kExactLimit && b.value_ < kExactLimit) {
    std::uint64_t s = a.value_ + b.value_;
    if (s < kExactLimit) return Magnitude::exact(s);
  }
  return Magnitude::from_log2(log2_sum(a.log2_, b.log2_));
}

Magnitude operator-(const Magnitude& a, const Magnitude& b) {
  if (a.exact_ && b.exact_) {
    if (b.value_ > a.value_) throw std::domain_error("negative magnitude");
    return Magnitude::exact(a.value_ - b.value_);
  }
  if (b.log2_ > a.log2_) throw std::domain_error("negative magnitude");
  if (b.log2_ == -INFINITY) return a;
  double r = std::exp2(b.log2_ - a.log2_);
  return Magnitude::from_log2(a.log2_ + std::log2(1.0 - r));
}

Magnitude operator*(const Magnitude& a, const Magnitude& b) {
  if (a.exact_ && b.exact_) {
    unsigned __int128 p = static_cast<unsigned __int128>(a.value_) * b.value_;
    if (p < kExactLimit) return Magnitude::exact(static_cast<std::uint64_t>(p));
  }
  return Magnitude::from_log2(a.log2_ + b.log2_);
}

bool operator==(const Magnitude& a, const Magnitude& b) {
  if (a.exact_ && b.exact_) return a.value_ == b.value_;
  return a.exact_ == b.exact_ && a.log2_ == b.log2_;
}

std::partial_ordering operator<=>(const Magnitude& a, const Magnitude& b) {
  if (a.exact_ && b.exact_) return a.value_ <=> b.value_;
  return a.log2_ <=> b.log2_;
}

}  // namespace rcover
