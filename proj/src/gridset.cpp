#include "rcover/gridset.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rcover {

GridSet::GridSet(int dim, int level) : dim_(dim), level_(level) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dimension out of range");
  if (level < 0 || dim * level > kMaxGridBits)
    throw std::invalid_argument("dense grid needs level * dim <= " + std::to_string(kMaxGridBits));
  words_.assign((cube_count() + 63) / 64, 0);
}

GridSet GridSet::full(int dim, int level) {
  GridSet g(dim, level);
  for (std::uint64_t i = 0; i < g.cube_count(); ++i) g.insert_linear(i);
  return g;
}

std::uint64_t GridSet::popcount() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::vector<std::uint64_t> GridSet::members() const {
  std::vector<std::uint64_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
  return out;
}

std::uint64_t GridSet::linear_index_of(const DyadicCube& q) const {
  if (q.level() != level_ || q.dim() != dim_) throw std::invalid_argument("cube does not belong to this grid");
  std::uint64_t i = 0;
  for (int c = 0; c < dim_; ++c) i |= q.index(c) << (level_ * c);
  return i;
}

DyadicCube GridSet::cube_at(std::uint64_t linear) const {
  std::array<std::uint64_t, kMaxDim> idx{};
  std::uint64_t mask = (std::uint64_t{1} << level_) - 1;
  for (int c = 0; c < dim_; ++c) idx[c] = (linear >> (level_ * c)) & mask;
  return DyadicCube(level_, std::span<const std::uint64_t>(idx.data(), dim_));
}

GridSet GridSet::refined(int level) const {
  if (level < level_) throw std::invalid_argument("refinement must not coarsen");
  if (level == level_) return *this;
  GridSet out(dim_, level);
  int extra = level - level_;
  std::uint64_t per_axis = std::uint64_t{1} << extra;
  std::uint64_t children = std::uint64_t{1} << (extra * dim_);
  for (std::uint64_t m : members()) {
    DyadicCube q = cube_at(m);
    std::array<std::uint64_t, kMaxDim> idx{};
    for (std::uint64_t c = 0; c < children; ++c) {
      std::uint64_t rest = c;
      for (int a = 0; a < dim_; ++a) {
        idx[a] = (q.index(a) << extra) | (rest % per_axis);
        rest /= per_axis;
      }
      out.insert(DyadicCube(level, std::span<const std::uint64_t>(idx.data(), dim_)));
    }
  }
  return out;
}

bool GridSet::intersects(const GridSet& other) const {
  if (other.level_ != level_ || other.dim_ != dim_) throw std::invalid_argument("grid level or dimension mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

bool GridSet::subset_of(const GridSet& other) const {
  if (other.level_ != level_ || other.dim_ != dim_) throw std::invalid_argument("grid level or dimension mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

void write_rle(std::ostream& os, const GridSet& g) {
  auto m = g.members();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;
  for (auto i : m) {
    if (!runs.empty() && runs.back().first + runs.back().second == i)
      ++runs.back().second;
    else
      runs.emplace_back(i, 1);
  }
  os << "gridset 1\n";
  os << "dim " << g.dim() << "\n";
  os << "level " << g.level() << "\n";
  os << "runs " << runs.size() << "\n";
  for (auto [a, n] : runs) os << a << " " << n << "\n";
}

GridSet read_rle(std::istream& is) {
  std::string tag;
  int version = 0, dim = 0, level = 0;
  std::size_t runs = 0;
  auto expect = [&](const char* key) {
    if (!(is >> tag) || tag != key) throw std::runtime_error(std::string("gridset: expected '") + key + "'");
  };
  expect("gridset");
  is >> version;
  if (version != 1) throw std::runtime_error("gridset: unsupported version");
  expect("dim");
  is >> dim;
  expect("level");
  is >> level;
  expect("runs");
  is >> runs;
  if (!is) throw std::runtime_error("gridset: malformed header");
  GridSet g(dim, level);
  std::uint64_t prev_end = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    std::uint64_t a = 0, n = 0;
    if (!(is >> a >> n)) throw std::runtime_error("gridset: truncated run list");
    if (a < prev_end || n == 0 || a + n > g.cube_count()) throw std::runtime_error("gridset: invalid run");
    for (std::uint64_t i = a; i < a + n; ++i) g.insert_linear(i);
    prev_end = a + n;
  }
  return g;
}

}  // namespace rcover
