#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loschmidt/core.hpp"
#include "loschmidt/fields.hpp"

namespace loschmidt {

/// Loschmidt echo F = |<psi_0|psi>|^2 with the grid-mean inner product.
double fidelity(const WaveField& unperturbed, const WaveField& perturbed);

/// Parity functional
///   Sigma = | (2/L) int_0^{L/2} psi(x) conj(psi(-x)) dx |^2
/// by the trapezoid rule on the half box; 1 for an even unit-density state.
/// Throws InvalidParameter for odd N.
double symmetry(const WaveField& psi);

struct EnergyComponents {
  double kinetic = 0.0;
  double potential = 0.0;
  double fermi = 0.0;
  double perturbation = 0.0;
  double total = 0.0;
};

/// Energy per particle in units of m V0^2. The kinetic term uses the
/// compact forward difference and the electrostatic term -<Phi (rho -
/// mean rho)>/2, so the sum is the Hamiltonian of the semi-discrete
/// system the propagator integrates.
class EnergyMeter {
 public:
  EnergyMeter(const SimParams& params, const HamiltonianSpec& spec);
  EnergyComponents measure(const WaveField& psi, double t);

 private:
  SimParams params_;
  PotentialAssembler assembler_;
  std::vector<double> scratch_;
};

EnergyComponents energy_components(const WaveField& psi, const HamiltonianSpec& spec,
                                   const SimParams& params, double t);

enum class Window { kNone, kHann };

const char* to_string(Window window) noexcept;

struct Spectrum {
  std::vector<double> omega;  // angular frequency in units of omega_p
  std::vector<double> power;  // one-sided, mean-subtracted
  Window window = Window::kHann;
  double resolution = 0.0;    // bin spacing in omega
};

/// One-sided power spectrum of a uniformly sampled series (>= 256 samples).
Spectrum potential_energy_spectrum(std::span<const double> times,
                                   std::span<const double> values,
                                   Window window = Window::kHann);

/// Location of the strongest bin with omega >= omega_min, refined by a
/// parabola through the log-power of its neighbours.
double peak_frequency(const Spectrum& spectrum, double omega_min = 0.0);

/// Largest single-bin share of the power in (omega_lo, omega_hi].
double max_bin_fraction(const Spectrum& spectrum, double omega_lo, double omega_hi);

struct EchoRecord {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<double> symmetry;
  std::vector<EnergyComponents> energies;
  std::optional<std::string> failure;

  std::size_t size() const noexcept { return times.size(); }
};

struct Crossing {
  double t = 0.0;
  bool downward = true;
};

struct CriticalTimeResult {
  std::optional<double> tau_c;
  double threshold = 0.1;
  bool crossed = false;
  std::vector<Crossing> crossings;  // every threshold crossing, in order
};

/// First time the series falls to `threshold`, linearly interpolated
/// between the bracketing samples.
CriticalTimeResult detect_crossing(std::span<const double> times,
                                   std::span<const double> values, double threshold);

CriticalTimeResult detect_critical_time(const EchoRecord& record, double threshold = 0.1);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double rms_residual = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = slope x + intercept (needs >= 2 points).
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace loschmidt
