#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace loschmidt {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform periodic grid on the dimensionless box [-pi, pi).
///
/// Node i sits at x_i = -pi + i * dx with dx = 2 pi / N. N must be even so
/// that x -> -x maps nodes onto nodes (index i -> (N - i) mod N).
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  explicit Grid(std::size_t n_points);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return dx_; }
  double node(std::size_t i) const noexcept {
    return -kPi + static_cast<double>(i) * dx_;
  }
  std::size_t reflect(std::size_t i) const noexcept { return (n_ - i) % n_; }
  std::vector<double> nodes() const;

  bool operator==(const Grid& other) const noexcept { return n_ == other.n_; }

 private:
  std::size_t n_;
  double dx_;
};

/// Samples of the dimensionless wave function psi = Psi / sqrt(n0).
class WaveField {
 public:
  explicit WaveField(Grid grid);
  WaveField(Grid grid, std::vector<Complex> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }
  Complex& operator[](std::size_t i) noexcept { return values_[i]; }

  /// Grid mean of |psi|^2; equals 1 for a normalized state.
  double mean_density() const noexcept;
  double max_density() const noexcept;
  bool all_finite() const noexcept;

  WaveField conjugated() const;
  /// psi(x) -> psi(-x), exact on the grid.
  WaveField reflected() const;

  bool operator==(const WaveField&) const = default;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

enum class PoissonSymbol {
  kFiniteDifference,  // (2 - 2 cos(j dx)) / dx^2, consistent with the stencil
  kExact,             // j^2
};

enum class KineticMethod {
  kExponential,            // exact exp(i t D2) of the centered difference, by FFT
  kCrankNicolson,          // cyclic tridiagonal solve with Sherman-Morrison
  kCrankNicolsonSpectral,  // same Crank-Nicolson system diagonalized by FFT
};

enum class SplitOrder {
  kPotentialKineticPotential,
  kKineticPotentialKinetic,
};

/// Dimensionless physics and numerics of one run.
///
/// Time is measured in 1/omega_p, position in 1/k0, velocity in V0, energy
/// in m V0^2. The three physical knobs are K0 = k0 V0 / omega_p, the
/// normalized Planck constant h = hbar omega_p / (m V0^2), and v_F / V0.
struct SimParams {
  double K0 = 2.0;
  double h = 0.05;
  double vf_ratio = 0.1;
  double init_amplitude = 1.0;

  std::size_t n_points = 2048;
  double dt = 5e-4;
  double t_end = 200.0;
  std::size_t sample_every = 10;

  PoissonSymbol poisson_symbol = PoissonSymbol::kFiniteDifference;
  KineticMethod kinetic_method = KineticMethod::kExponential;
  SplitOrder split_order = SplitOrder::kPotentialKineticPotential;

  /// Throws InvalidParameter naming the offending field.
  void validate() const;

  double kinetic_coefficient() const noexcept { return 0.5 * h * h * K0 * K0; }
  double poisson_coefficient() const noexcept { return 1.0 / (K0 * K0); }
  double fermi_coefficient() const noexcept { return 0.3 * vf_ratio * vf_ratio; }

  /// Number of time steps needed to reach t_end (rounded to nearest).
  long step_count() const noexcept;
  Grid grid() const { return Grid(n_points); }
};

/// psi_i = exp(i A cos(x_i) / (h K0)): uniform density and velocity
/// -A sin(x), i.e. the cosine velocity kick shifted by a quarter period so
/// that the state is even about x = 0.
WaveField make_initial_state(const SimParams& params, const Grid& grid);

/// (1/N) sum_i conj(a_i) b_i.
Complex inner_product(const WaveField& a, const WaveField& b);

struct MadelungFields {
  std::vector<double> density;
  std::vector<double> velocity;  // in units of V0
};

/// Density |psi|^2 and fluid velocity h K0 d(arg psi)/dx by centered
/// differences of the nearest-branch unwrapped phase. Throws
/// DensityNodeError (carrying the density) if |psi| < 1e-8 anywhere.
MadelungFields madelung_fields(const WaveField& psi, const SimParams& params);

}  // namespace loschmidt
