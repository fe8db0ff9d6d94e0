#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace rcover {

inline constexpr int kMaxDim = 8;

// x mod 1 in [0,1).
double wrap_unit(double x);

class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::span<const double> coords);
  TorusPoint(std::initializer_list<double> coords);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

// Half-open cube prod [i_c 2^-n, (i_c+1) 2^-n).
class DyadicCube {
 public:
  DyadicCube() = default;
  DyadicCube(int level, std::span<const std::uint64_t> index);
  DyadicCube(int level, std::initializer_list<std::uint64_t> index);

  int level() const { return level_; }
  int dim() const { return dim_; }
  std::uint64_t index(int i) const { return idx_[i]; }
  double side() const;
  double lower(int i) const;

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;

 private:
  int level_ = 0;
  int dim_ = 0;
  std::array<std::uint64_t, kMaxDim> idx_{};
};

class TorusBall {
 public:
  TorusBall(TorusPoint center, double radius);

  const TorusPoint& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  TorusPoint center_;
  double radius_;
};

DyadicCube cube_of_point(const TorusPoint& x, int level);

// Throws std::invalid_argument when child.level() < parent.level().
bool cube_subset(const DyadicCube& child, const DyadicCube& parent);

double torus_distance(const TorusPoint& x, const TorusPoint& y);

bool ball_contains_cube(const TorusBall& b, const DyadicCube& q);
bool ball_intersects_cube(const TorusBall& b, const DyadicCube& q);

}  // namespace rcover
