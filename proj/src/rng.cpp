#include "rcover/rng.hpp"

namespace rcover {

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const {
  return unit_double(bits(stream, index));
}

}  // namespace rcover
