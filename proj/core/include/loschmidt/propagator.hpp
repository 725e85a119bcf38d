#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "loschmidt/core.hpp"
#include "loschmidt/error.hpp"
#include "loschmidt/fft.hpp"
#include "loschmidt/fields.hpp"

namespace loschmidt {

/// Free-flight substep of i h psi_t = -(h^2 K0^2 / 2) D2 psi / dx^2, where
/// D2 is the periodic centered second difference. With mu = h K0^2 dt /
/// (4 dx^2) and sigma_k = 4 mu sin^2(pi k / N) on Fourier mode k:
///   kExponential:   psi_k *= exp(-2 i sigma_k)            (exact in time)
///   kCrankNicolson: (I - i mu D2) psi' = (I + i mu D2) psi, solved as a
///                   cyclic tridiagonal system
///   kCrankNicolsonSpectral: the same system diagonalized by the FFT,
///                   psi_k *= (1 - i sigma_k) / (1 + i sigma_k)
/// All variants are unitary for any dt.
class KineticSolver {
 public:
  KineticSolver(const Grid& grid, const SimParams& params, double dt,
                KineticMethod method);

  void apply(std::span<Complex> psi);

  double mu() const noexcept { return mu_; }
  KineticMethod method() const noexcept { return method_; }

 private:
  void apply_tridiagonal(std::span<Complex> psi);
  void apply_spectral(std::span<Complex> psi);

  Grid grid_;
  double mu_;
  KineticMethod method_;

  // Sherman-Morrison data for the cyclic system.
  Complex off_diag_;
  Complex gamma_;
  std::vector<Complex> c_prime_;
  std::vector<Complex> inv_pivot_;
  std::vector<Complex> correction_;  // solution of T z = u
  Complex correction_norm_;
  std::vector<Complex> work_;

  std::optional<ComplexFft> fft_;
  std::vector<Complex> spectral_gain_;
};

/// Strang split-step integrator bound to one Hamiltonian.
///
/// The potential substep multiplies by exp(-i V dt/2 / h); it leaves |psi|
/// untouched, so the self-consistent field is exactly constant over it.
class Propagator {
 public:
  static constexpr double kBlowUpDensity = 1e6;

  Propagator(const SimParams& params, HamiltonianSpec spec);

  const SimParams& params() const noexcept { return params_; }
  const HamiltonianSpec& spec() const noexcept { return assembler_.spec(); }

  void potential_halfstep(WaveField& psi, double t, double dt_half);
  void kinetic_step(WaveField& psi);
  /// One Strang step from t to t + dt in the configured split order.
  void step(WaveField& psi, double t);

  /// Advances n_steps from step index `first_step` (t = first_step * dt).
  /// Adjacent potential half-steps of the V-T-V order are merged, which is
  /// exact in arithmetic since they share the same density and time.
  /// Throws BlowUpError carrying the failing step index.
  void advance(WaveField& psi, long first_step, long n_steps);

  /// Potential of the last substep (valid after any step call).
  std::span<const double> last_potential() const noexcept { return v_; }

 private:
  void assemble_checked(std::span<const Complex> psi, double t, long step);
  void rotate(std::span<Complex> psi, double tau);

  SimParams params_;
  PotentialAssembler assembler_;
  KineticSolver kinetic_;
  std::optional<KineticSolver> kinetic_half_;
  std::vector<double> v_;
};

WaveField potential_halfstep(const WaveField& psi, const HamiltonianSpec& spec,
                             const SimParams& params, double t, double dt_half);
WaveField kinetic_step(const WaveField& psi, const SimParams& params, double dt);
WaveField step(const WaveField& psi, const HamiltonianSpec& spec,
               const SimParams& params, double t);

using Observer = std::function<void(double t, const WaveField& psi)>;

struct EvolveResult {
  WaveField state;
  double t = 0.0;
  long steps = 0;
  std::optional<BlowUpError> failure;
};

/// Integrates from t = 0 to params.t_end, calling every observer at t = 0,
/// every params.sample_every steps, and at the final step.
EvolveResult evolve(WaveField psi0, const HamiltonianSpec& spec,
                    const SimParams& params, std::span<const Observer> observers);

}  // namespace loschmidt
