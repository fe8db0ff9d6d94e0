#pragma once

#include <array>
#include <cstdint>

namespace rcover {

// Philox4x32-10 (Salmon, Moraes, Dror, Shaw 2011). Bijective in the
// counter for each key, so distinct counters never collide.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

// Independent substreams of one seed.
namespace streams {
inline constexpr std::uint64_t centers = 0;
inline constexpr std::uint64_t coincidence = 1;
inline constexpr std::uint64_t cover_arcs = 2;
inline constexpr std::uint64_t block_hits = 3;
inline constexpr std::uint64_t g_jitter = 4;
inline constexpr std::uint64_t g_points = 5;
}  // namespace streams

// Random access generator: (seed, stream, index) -> 128 random bits.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::array<std::uint64_t, 2> block(std::uint64_t stream, std::uint64_t index) const {
    auto w = philox4x32_10(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
         static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    return {(std::uint64_t{w[0]} << 32) | w[1], (std::uint64_t{w[2]} << 32) | w[3]};
  }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const { return block(stream, index)[0]; }

  double uniform(std::uint64_t stream, std::uint64_t index) const;

 private:
  std::uint64_t seed_;
};

// Top 53 bits as a double in [0,1).
inline double unit_double(std::uint64_t w) { return static_cast<double>(w >> 11) * 0x1p-53; }

// The same 53 bits as a 64-bit fixed point fraction, so both views agree exactly.
inline std::uint64_t unit_fixed(std::uint64_t w) { return w & ~std::uint64_t{0x7FF}; }

// Uniform integer in [0, 2^bits).
inline std::uint64_t top_bits(std::uint64_t w, int bits) { return bits == 0 ? 0 : w >> (64 - bits); }

}  // namespace rcover
