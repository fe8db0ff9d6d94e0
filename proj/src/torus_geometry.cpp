#include "rcover/torus_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rcover {

namespace {

void check_dim(std::size_t d) {
  if (d < 1 || d > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
}

void check_level(int level) {
  if (level < 0 || level > 62) throw std::invalid_argument("cube level must be in [0, 62]");
}

// Farthest distance from c to the closed interval [a, a+w] on the circle,
// over the representative of the interval nearest to c.
double far_extent(double c, double a, double w) {
  double best = INFINITY;
  for (int shift = -1; shift <= 1; ++shift) {
    double lo = a + shift;
    double hi = lo + w;
    double far = std::max(std::abs(c - lo), std::abs(c - hi));
    best = std::min(best, far);
  }
  return best;
}

// Circle distance from c to the closed interval [a, a+w].
double gap_to(double c, double a, double w) {
  double best = INFINITY;
  for (int shift = -1; shift <= 1; ++shift) {
    double lo = a + shift;
    double hi = lo + w;
    double g = c < lo ? lo - c : (c > hi ? c - hi : 0.0);
    best = std::min(best, g);
  }
  return best;
}

}  // namespace

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

TorusPoint::TorusPoint(std::span<const double> coords) {
  check_dim(coords.size());
  dim_ = static_cast<int>(coords.size());
  for (int i = 0; i < dim_; ++i) c_[i] = wrap_unit(coords[i]);
}

TorusPoint::TorusPoint(std::initializer_list<double> coords)
    : TorusPoint(std::span<const double>(coords.begin(), coords.size())) {}

DyadicCube::DyadicCube(int level, std::span<const std::uint64_t> index) {
  check_dim(index.size());
  check_level(level);
  level_ = level;
  dim_ = static_cast<int>(index.size());
  for (int i = 0; i < dim_; ++i) {
    if (level < 64 && (index[i] >> level) != 0) throw std::out_of_range("cube index outside [0, 2^level)");
    idx_[i] = index[i];
  }
}

DyadicCube::DyadicCube(int level, std::initializer_list<std::uint64_t> index)
    : DyadicCube(level, std::span<const std::uint64_t>(index.begin(), index.size())) {}

double DyadicCube::side() const { return std::ldexp(1.0, -level_); }

double DyadicCube::lower(int i) const { return std::ldexp(static_cast<double>(idx_[i]), -level_); }

TorusBall::TorusBall(TorusPoint center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0) || radius > 0.5) throw std::invalid_argument("ball radius must be in (0, 1/2]");
}

DyadicCube cube_of_point(const TorusPoint& x, int level) {
  check_level(level);
  std::array<std::uint64_t, kMaxDim> idx{};
  std::uint64_t top = (std::uint64_t{1} << level) - 1;
  for (int i = 0; i < x.dim(); ++i) {
    auto k = static_cast<std::uint64_t>(std::floor(std::ldexp(x[i], level)));
    idx[i] = std::min(k, top);
  }
  return DyadicCube(level, std::span<const std::uint64_t>(idx.data(), x.dim()));
}

bool cube_subset(const DyadicCube& child, const DyadicCube& parent) {
  if (child.level() < parent.level()) throw std::invalid_argument("cube_subset: child level below parent level");
  if (child.dim() != parent.dim()) throw std::invalid_argument("cube_subset: dimension mismatch");
  int shift = child.level() - parent.level();
  for (int i = 0; i < child.dim(); ++i)
    if ((child.index(i) >> shift) != parent.index(i)) return false;
  return true;
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("torus_distance: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    double a = std::abs(x[i] - y[i]);
    a = std::min(a, 1.0 - a);
    s += a * a;
  }
  return std::sqrt(s);
}

bool ball_contains_cube(const TorusBall& b, const DyadicCube& q) {
  if (b.center().dim() != q.dim()) throw std::invalid_argument("ball_contains_cube: dimension mismatch");
  double w = q.side();
  double s = 0.0;
  for (int i = 0; i < q.dim(); ++i) {
    double f = far_extent(b.center()[i], q.lower(i), w);
    s += f * f;
  }
  return s <= b.radius() * b.radius();
}

bool ball_intersects_cube(const TorusBall& b, const DyadicCube& q) {
  if (b.center().dim() != q.dim()) throw std::invalid_argument("ball_intersects_cube: dimension mismatch");
  double w = q.side();
  double s = 0.0;
  for (int i = 0; i < q.dim(); ++i) {
    double g = gap_to(b.center()[i], q.lower(i), w);
    s += g * g;
  }
  return s < b.radius() * b.radius();
}

}  // namespace rcover
