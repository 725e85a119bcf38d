#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "loschmidt/core.hpp"
#include "loschmidt/fft.hpp"
#include "loschmidt/stochastic.hpp"

namespace loschmidt {

/// Static random-wave perturbation
///   W(x) = sum_{j=n_min}^{n_max} cos(j x + alpha_j),
/// entering the Hamiltonian as epsilon * W. The unit-amplitude profile is
/// tabulated once on the grid at construction.
class StaticPerturbation {
 public:
  static constexpr int kDefaultMinMode = 1;
  static constexpr int kDefaultMaxMode = 20;

  StaticPerturbation(const Grid& grid, double epsilon, int n_min, int n_max,
                     std::uint64_t seed);
  /// Explicit phases; `phases.phases.size()` must equal n_max - n_min + 1.
  StaticPerturbation(const Grid& grid, double epsilon, int n_min, int n_max,
                     PhaseSet phases);

  const Grid& grid() const noexcept { return grid_; }
  double epsilon() const noexcept { return epsilon_; }
  int n_min() const noexcept { return n_min_; }
  int n_max() const noexcept { return n_max_; }
  std::uint64_t seed() const noexcept { return phases_.seed; }
  const PhaseSet& phases() const noexcept { return phases_; }
  std::span<const double> profile() const noexcept { return profile_; }

  /// Same waves, different amplitude.
  StaticPerturbation with_epsilon(double epsilon) const;

 private:
  Grid grid_;
  double epsilon_;
  int n_min_;
  int n_max_;
  PhaseSet phases_;
  std::vector<double> profile_;
};

enum class DensityKind { kSelfConsistent, kExternal, kMixed };

/// Density feeding Poisson's equation,
///   rho(x, t) = rho_ext(x, t) + beta (|psi|^2 - 1),
///   rho_ext   = 1 + delta sum_{j=1}^{n_modes} j^2 cos(j x - t + alpha'_j).
/// Every constructor lands on this one (beta, delta) form; kind() only
/// remembers how it was asked for. Pure self-consistent runs have delta = 0.
class DensitySource {
 public:
  static constexpr int kDefaultModes = 25;

  static DensitySource self_consistent();
  static DensitySource external(double delta, int n_modes = kDefaultModes,
                                std::uint64_t phase_seed = 1);
  static DensitySource mixed(double beta, double delta,
                             int n_modes = kDefaultModes,
                             std::uint64_t phase_seed = 1);
  /// Explicit drive phases (one per mode); the seed field is informational.
  static DensitySource with_phases(DensityKind kind, double beta, double delta,
                                   PhaseSet phases);

  DensityKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  double delta() const noexcept { return delta_; }
  int n_modes() const noexcept { return n_modes_; }
  const PhaseSet& phases() const noexcept { return phases_; }
  bool has_drive() const noexcept { return delta_ != 0.0; }

  /// True when both sources produce the same rho for the same psi.
  bool same_physics(const DensitySource& other) const noexcept;

 private:
  DensitySource(DensityKind kind, double beta, double delta, PhaseSet phases);

  DensityKind kind_;
  double beta_;
  double delta_;
  int n_modes_;
  PhaseSet phases_;
};

const char* to_string(DensityKind kind) noexcept;

struct HamiltonianSpec {
  DensitySource density = DensitySource::self_consistent();
  std::optional<StaticPerturbation> perturbation;

  HamiltonianSpec without_perturbation() const { return {density, std::nullopt}; }
};

/// Zero-mean periodic solution of d^2 Phi/dx^2 = (rho - mean(rho)) / K0^2,
/// solved mode by mode in the discrete Fourier basis.
class PoissonSolver {
 public:
  PoissonSolver(const Grid& grid, double K0, PoissonSymbol symbol);

  /// Throws BlowUpError on non-finite input.
  void solve(std::span<const double> density, std::span<double> phi);
  std::vector<double> solve(std::span<const double> density);

  const Grid& grid() const noexcept { return grid_; }

 private:
  Grid grid_;
  std::vector<double> gain_;  // -1 / (K0^2 lambda_j N), zero for j = 0
  RealFft fft_;
};

/// Symbol lambda_j of -d^2/dx^2 for mode j under the chosen discretization.
double laplacian_symbol(const Grid& grid, int j, PoissonSymbol symbol) noexcept;

std::vector<double> solve_poisson(std::span<const double> density,
                                  const SimParams& params);

/// Evaluates rho_ext(x, t) by a single inverse real FFT of its n_modes
/// Fourier coefficients.
class ExternalDensity {
 public:
  /// Throws AliasingError if n_modes >= N/2.
  ExternalDensity(const Grid& grid, const DensitySource& source);

  void evaluate(double t, std::span<double> out);

 private:
  Grid grid_;
  double delta_;
  std::vector<double> weight_;  // delta j^2 / 2 * (-1)^j
  std::vector<double> phase_;
  RealFft fft_;
};

std::vector<double> build_external_density(const HamiltonianSpec& spec,
                                           const Grid& grid, double t);

/// Total potential energy felt by psi (units m V0^2):
///   V = -Phi[rho] + c_F |psi|^4 + epsilon W.
/// Keeps the last density and Phi for diagnostics.
class PotentialAssembler {
 public:
  PotentialAssembler(const SimParams& params, const HamiltonianSpec& spec);

  void assemble(std::span<const Complex> psi, double t, std::span<double> v);

  /// rho fed into Poisson at the last assemble() call.
  std::span<const double> source_density() const noexcept { return rho_; }
  std::span<const double> potential() const noexcept { return phi_; }
  double last_max_density() const noexcept { return max_density_; }

  const HamiltonianSpec& spec() const noexcept { return spec_; }

 private:
  Grid grid_;
  HamiltonianSpec spec_;
  double fermi_;
  PoissonSolver poisson_;
  std::optional<ExternalDensity> external_;
  std::vector<double> rho_;
  std::vector<double> phi_;
  double max_density_ = 0.0;
};

std::vector<double> assemble_potential(const HamiltonianSpec& spec,
                                       const WaveField& psi,
                                       const SimParams& params, double t);

}  // namespace loschmidt
