#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rcover/torus_geometry.hpp"

namespace rcover {

inline constexpr int kMaxGridBits = 30;

// Dense bitset over the 2^(level*dim) cubes of one dyadic level.
// Linear index: sum_c index[c] << (level * c).
class GridSet {
 public:
  GridSet(int dim, int level);

  static GridSet full(int dim, int level);

  int dim() const { return dim_; }
  int level() const { return level_; }
  std::uint64_t cube_count() const { return std::uint64_t{1} << (dim_ * level_); }

  void insert(const DyadicCube& q) { insert_linear(linear_index_of(q)); }
  bool contains(const DyadicCube& q) const { return contains_linear(linear_index_of(q)); }
  void insert_linear(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool contains_linear(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  std::uint64_t popcount() const;
  bool empty() const { return popcount() == 0; }
  std::vector<std::uint64_t> members() const;

  // Every descendant of every member at the finer level.
  GridSet refined(int level) const;
  bool intersects(const GridSet& other) const;  // same level and dimension
  bool subset_of(const GridSet& other) const;

  std::uint64_t linear_index_of(const DyadicCube& q) const;
  DyadicCube cube_at(std::uint64_t linear) const;

  friend bool operator==(const GridSet&, const GridSet&) = default;

 private:
  int dim_;
  int level_;
  std::vector<std::uint64_t> words_;
};

// Text format:
//   gridset 1
//   dim <d>
//   level <n>
//   runs <r>
//   <first linear index> <run length>   (r lines, increasing)
void write_rle(std::ostream& os, const GridSet& g);
GridSet read_rle(std::istream& is);

}  // namespace rcover
