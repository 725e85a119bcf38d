#include "loschmidt/stochastic.hpp"

#include <cmath>

#include "loschmidt/core.hpp"
#include "loschmidt/error.hpp"

namespace loschmidt {

std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_interval(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

PhaseSet generate_phases(std::uint64_t seed, std::size_t count) {
  if (count == 0) throw InvalidParameter("phase count must be >= 1");
  PhaseSet set{seed, std::vector<double>(count)};
  std::uint64_t state = seed;
  for (auto& phase : set.phases) {
    phase = kTwoPi * unit_interval(splitmix64_next(state));
    // The product can round up to exactly 2 pi.
    if (phase >= kTwoPi) phase = std::nextafter(kTwoPi, 0.0);
  }
  return set;
}

}  // namespace loschmidt
