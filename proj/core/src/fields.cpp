#include "loschmidt/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loschmidt/error.hpp"

namespace loschmidt {
namespace {

void check_mode_range(const Grid& grid, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) {
    throw InvalidParameter("perturbation mode range must satisfy 1 <= n_min <= n_max, got [" +
                           std::to_string(n_min) + ", " + std::to_string(n_max) + "]");
  }
  if (static_cast<std::size_t>(n_max) >= grid.size() / 2) {
    throw AliasingError("perturbation mode " + std::to_string(n_max) +
                        " is not resolved on a grid of " + std::to_string(grid.size()) +
                        " points");
  }
}

}  // namespace

StaticPerturbation::StaticPerturbation(const Grid& grid, double epsilon, int n_min,
                                       int n_max, std::uint64_t seed)
    : StaticPerturbation(grid, epsilon, n_min, n_max,
                         generate_phases(seed, static_cast<std::size_t>(
                                                   std::max(1, n_max - n_min + 1)))) {}

StaticPerturbation::StaticPerturbation(const Grid& grid, double epsilon, int n_min,
                                       int n_max, PhaseSet phases)
    : grid_(grid),
      epsilon_(epsilon),
      n_min_(n_min),
      n_max_(n_max),
      phases_(std::move(phases)),
      profile_(grid.size(), 0.0) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw InvalidParameter("perturbation epsilon must be finite and >= 0");
  }
  check_mode_range(grid, n_min, n_max);
  const auto count = static_cast<std::size_t>(n_max - n_min + 1);
  if (phases_.phases.size() != count) {
    throw DimensionMismatch("perturbation needs " + std::to_string(count) +
                            " phases, got " + std::to_string(phases_.phases.size()));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    double w = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double j = static_cast<double>(n_min + static_cast<int>(k));
      w += std::cos(j * x + phases_.phases[k]);
    }
    profile_[i] = w;
  }
}

StaticPerturbation StaticPerturbation::with_epsilon(double epsilon) const {
  StaticPerturbation copy = *this;
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw InvalidParameter("perturbation epsilon must be finite and >= 0");
  }
  copy.epsilon_ = epsilon;
  return copy;
}

DensitySource::DensitySource(DensityKind kind, double beta, double delta, PhaseSet phases)
    : kind_(kind),
      beta_(beta),
      delta_(delta),
      n_modes_(static_cast<int>(phases.phases.size())),
      phases_(std::move(phases)) {
  if (!std::isfinite(beta) || beta < 0.0 || beta > 1.0) {
    throw InvalidParameter("density beta must lie in [0, 1]");
  }
  if (!std::isfinite(delta) || delta < 0.0) {
    throw InvalidParameter("density delta must be finite and >= 0");
  }
}

DensitySource DensitySource::self_consistent() {
  return DensitySource(DensityKind::kSelfConsistent, 1.0, 0.0, PhaseSet{});
}

DensitySource DensitySource::external(double delta, int n_modes, std::uint64_t phase_seed) {
  if (n_modes < 1) throw InvalidParameter("external density needs n_modes >= 1");
  return DensitySource(DensityKind::kExternal, 0.0, delta,
                       generate_phases(drive_stream_seed(phase_seed),
                                       static_cast<std::size_t>(n_modes)));
}

DensitySource DensitySource::mixed(double beta, double delta, int n_modes,
                                   std::uint64_t phase_seed) {
  if (n_modes < 1) throw InvalidParameter("mixed density needs n_modes >= 1");
  return DensitySource(DensityKind::kMixed, beta, delta,
                       generate_phases(drive_stream_seed(phase_seed),
                                       static_cast<std::size_t>(n_modes)));
}

DensitySource DensitySource::with_phases(DensityKind kind, double beta, double delta,
                                         PhaseSet phases) {
  return DensitySource(kind, beta, delta, std::move(phases));
}

bool DensitySource::same_physics(const DensitySource& other) const noexcept {
  if (beta_ != other.beta_ || delta_ != other.delta_) return false;
  if (!has_drive()) return true;
  return phases_.phases == other.phases_.phases;
}

const char* to_string(DensityKind kind) noexcept {
  switch (kind) {
    case DensityKind::kSelfConsistent: return "self-consistent";
    case DensityKind::kExternal: return "external";
    case DensityKind::kMixed: return "mixed";
  }
  return "unknown";
}

double laplacian_symbol(const Grid& grid, int j, PoissonSymbol symbol) noexcept {
  const double k = static_cast<double>(j);
  if (symbol == PoissonSymbol::kExact) return k * k;
  const double dx = grid.spacing();
  const double s = std::sin(0.5 * k * dx);
  return 4.0 * s * s / (dx * dx);
}

PoissonSolver::PoissonSolver(const Grid& grid, double K0, PoissonSymbol symbol)
    : grid_(grid), gain_(grid.size() / 2 + 1, 0.0), fft_(grid.size()) {
  if (!(K0 > 0.0)) throw InvalidParameter("K0 must be > 0");
  const double n = static_cast<double>(grid.size());
  for (std::size_t j = 1; j < gain_.size(); ++j) {
    gain_[j] = -1.0 / (K0 * K0 * laplacian_symbol(grid, static_cast<int>(j), symbol) * n);
  }
}

void PoissonSolver::solve(std::span<const double> density, std::span<double> phi) {
  const std::size_t n = grid_.size();
  if (density.size() != n || phi.size() != n) {
    throw DimensionMismatch("Poisson input/output length does not match the grid");
  }
  auto real = fft_.real();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(density[i])) throw BlowUpError(-1, density[i]);
    real[i] = density[i];
  }
  fft_.forward();
  auto spec = fft_.spectrum();
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= gain_[j];
  fft_.backward();
  std::copy(real.begin(), real.end(), phi.begin());
}

std::vector<double> PoissonSolver::solve(std::span<const double> density) {
  std::vector<double> phi(grid_.size());
  solve(density, phi);
  return phi;
}

std::vector<double> solve_poisson(std::span<const double> density, const SimParams& params) {
  if (density.size() % 2 != 0) throw InvalidParameter("Poisson grid size must be even");
  PoissonSolver solver(Grid(density.size()), params.K0, params.poisson_symbol);
  return solver.solve(density);
}

ExternalDensity::ExternalDensity(const Grid& grid, const DensitySource& source)
    : grid_(grid),
      delta_(source.delta()),
      weight_(static_cast<std::size_t>(source.n_modes()) + 1, 0.0),
      phase_(static_cast<std::size_t>(source.n_modes()) + 1, 0.0),
      fft_(grid.size()) {
  if (static_cast<std::size_t>(source.n_modes()) >= grid.size() / 2) {
    throw AliasingError("external density mode " + std::to_string(source.n_modes()) +
                        " is not resolved on a grid of " + std::to_string(grid.size()) +
                        " points");
  }
  // Node x_i = -pi + i dx contributes exp(i j x_i) = (-1)^j exp(2 pi i j i / N).
  for (int j = 1; j <= source.n_modes(); ++j) {
    const double jj = static_cast<double>(j);
    weight_[j] = 0.5 * delta_ * jj * jj * ((j % 2 == 0) ? 1.0 : -1.0);
    phase_[j] = source.phases().phases[static_cast<std::size_t>(j - 1)];
  }
}

void ExternalDensity::evaluate(double t, std::span<double> out) {
  const std::size_t n = grid_.size();
  if (out.size() != n) throw DimensionMismatch("external density output length");
  if (delta_ == 0.0) {
    std::fill(out.begin(), out.end(), 1.0);
    return;
  }
  auto spec = fft_.spectrum();
  std::fill(spec.begin(), spec.end(), Complex{0.0, 0.0});
  for (std::size_t j = 1; j < weight_.size(); ++j) {
    spec[j] = std::polar(weight_[j], phase_[j] - t);
  }
  fft_.backward();
  auto real = fft_.real();
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 + real[i];
}

std::vector<double> build_external_density(const HamiltonianSpec& spec, const Grid& grid,
                                           double t) {
  ExternalDensity drive(grid, spec.density);
  std::vector<double> rho(grid.size());
  drive.evaluate(t, rho);
  return rho;
}

PotentialAssembler::PotentialAssembler(const SimParams& params, const HamiltonianSpec& spec)
    : grid_(params.n_points),
      spec_(spec),
      fermi_(params.fermi_coefficient()),
      poisson_(grid_, params.K0, params.poisson_symbol),
      rho_(grid_.size()),
      phi_(grid_.size()) {
  if (spec_.density.has_drive()) external_.emplace(grid_, spec_.density);
  if (spec_.perturbation && !(spec_.perturbation->grid() == grid_)) {
    throw DimensionMismatch("perturbation profile was built for a different grid");
  }
}

void PotentialAssembler::assemble(std::span<const Complex> psi, double t, std::span<double> v) {
  const std::size_t n = grid_.size();
  if (psi.size() != n || v.size() != n) {
    throw DimensionMismatch("potential assembly length does not match the grid");
  }
  // v doubles as scratch for |psi|^2 until Phi is known.
  double max_density = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::norm(psi[i]);
    v[i] = d;
    max_density = (d > max_density || std::isnan(d)) ? d : max_density;
  }
  max_density_ = max_density;

  const double beta = spec_.density.beta();
  if (external_) {
    external_->evaluate(t, rho_);
    for (std::size_t i = 0; i < n; ++i) rho_[i] += beta * (v[i] - 1.0);
  } else {
    for (std::size_t i = 0; i < n; ++i) rho_[i] = 1.0 + beta * (v[i] - 1.0);
  }
  poisson_.solve(rho_, phi_);

  if (spec_.perturbation) {
    const double eps = spec_.perturbation->epsilon();
    const auto w = spec_.perturbation->profile();
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = -phi_[i] + fermi_ * v[i] * v[i] + eps * w[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) v[i] = -phi_[i] + fermi_ * v[i] * v[i];
  }
}

std::vector<double> assemble_potential(const HamiltonianSpec& spec, const WaveField& psi,
                                       const SimParams& params, double t) {
  if (psi.size() != params.n_points) {
    throw DimensionMismatch("wave field does not match params.n_points");
  }
  PotentialAssembler assembler(params, spec);
  std::vector<double> v(psi.size());
  assembler.assemble(psi.values(), t, v);
  return v;
}

}  // namespace loschmidt
