#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace loschmidt {

/// Random phases alpha_j in [0, 2 pi) together with the seed that made them.
struct PhaseSet {
  std::uint64_t seed = 0;
  std::vector<double> phases;

  bool operator==(const PhaseSet&) const = default;
};

/// One step of the splitmix64 generator: advances
/// the state by the golden-ratio increment and returns the mixed output.
std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

/// Maps a 64-bit word to [0, 1) using its top 53 bits.
double unit_interval(std::uint64_t word) noexcept;

/// Deterministic phases: state starts at `seed`, phase k is
/// 2 pi * unit_interval(splitmix64_next(state)) for k = 0..count-1.
/// This algorithm is part of the output contract; do not change it.
PhaseSet generate_phases(std::uint64_t seed, std::size_t count);

/// Seed namespace offset separating drive phases from perturbation phases.
inline constexpr std::uint64_t kDriveSeedOffset = 0xD1B54A32D192ED03ULL;

/// Seed actually fed to generate_phases for the external density drive.
constexpr std::uint64_t drive_stream_seed(std::uint64_t seed) noexcept {
  return seed + kDriveSeedOffset;
}

}  // namespace loschmidt
