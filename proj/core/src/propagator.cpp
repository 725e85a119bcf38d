#include "loschmidt/propagator.hpp"

#include <cmath>
#include <string>

namespace loschmidt {

KineticSolver::KineticSolver(const Grid& grid, const SimParams& params, double dt,
                             KineticMethod method)
    : grid_(grid), mu_(0.0), method_(method) {
  if (!(dt > 0.0)) throw InvalidParameter("kinetic step needs dt > 0");
  const double dx = grid.spacing();
  mu_ = params.h * params.K0 * params.K0 * dt / (4.0 * dx * dx);
  const std::size_t n = grid.size();

  if (method_ != KineticMethod::kCrankNicolson) {
    fft_.emplace(n);
    spectral_gain_.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = std::sin(kPi * static_cast<double>(k) / static_cast<double>(n));
      const double sigma = mu_ * 4.0 * s * s;
      spectral_gain_[k] = method_ == KineticMethod::kExponential
                              ? std::polar(inv_n, -2.0 * sigma)
                              : Complex(1.0, -sigma) / Complex(1.0, sigma) * inv_n;
    }
    return;
  }

  // Left-hand matrix: diagonal 1 + 2 i mu, off-diagonals (and corners) -i mu.
  const Complex diag{1.0, 2.0 * mu_};
  off_diag_ = Complex{0.0, -mu_};
  gamma_ = -diag;
  std::vector<Complex> pivot_diag(n, diag);
  pivot_diag.front() = diag - gamma_;
  pivot_diag.back() = diag - off_diag_ * off_diag_ / gamma_;

  c_prime_.resize(n);
  inv_pivot_.resize(n);
  inv_pivot_[0] = 1.0 / pivot_diag[0];
  c_prime_[0] = off_diag_ * inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    inv_pivot_[i] = 1.0 / (pivot_diag[i] - off_diag_ * c_prime_[i - 1]);
    c_prime_[i] = off_diag_ * inv_pivot_[i];
  }

  work_.resize(n);
  correction_.assign(n, Complex{0.0, 0.0});
  correction_.front() = gamma_;
  correction_.back() = off_diag_;
  // Thomas solve of T z = u in place.
  correction_[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) {
    correction_[i] = (correction_[i] - off_diag_ * correction_[i - 1]) * inv_pivot_[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) correction_[i] -= c_prime_[i] * correction_[i + 1];
  correction_norm_ =
      1.0 + correction_.front() + off_diag_ * correction_.back() / gamma_;
  if (std::abs(correction_norm_) == 0.0) {
    throw Error("singular Crank-Nicolson system");  // unreachable for real mu
  }
}

void KineticSolver::apply(std::span<Complex> psi) {
  if (psi.size() != grid_.size()) throw DimensionMismatch("kinetic step length");
  if (method_ == KineticMethod::kCrankNicolson) {
    apply_tridiagonal(psi);
  } else {
    apply_spectral(psi);
  }
}

void KineticSolver::apply_tridiagonal(std::span<Complex> psi) {
  const std::size_t n = psi.size();
  const Complex i_mu{0.0, mu_};
  auto& y = work_;

  // Right-hand side (I + i mu D2) psi fused with the forward sweep.
  y[0] = (psi[0] + i_mu * (psi[1] - 2.0 * psi[0] + psi[n - 1])) * inv_pivot_[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Complex r = psi[i] + i_mu * (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]);
    y[i] = (r - off_diag_ * y[i - 1]) * inv_pivot_[i];
  }
  {
    const Complex r = psi[n - 1] + i_mu * (psi[0] - 2.0 * psi[n - 1] + psi[n - 2]);
    y[n - 1] = (r - off_diag_ * y[n - 2]) * inv_pivot_[n - 1];
  }
  for (std::size_t i = n - 1; i-- > 0;) y[i] -= c_prime_[i] * y[i + 1];

  const Complex factor = (y.front() + off_diag_ * y.back() / gamma_) / correction_norm_;
  for (std::size_t i = 0; i < n; ++i) psi[i] = y[i] - factor * correction_[i];
}

void KineticSolver::apply_spectral(std::span<Complex> psi) {
  auto data = fft_->data();
  std::copy(psi.begin(), psi.end(), data.begin());
  fft_->forward();
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= spectral_gain_[k];
  fft_->backward();
  std::copy(data.begin(), data.end(), psi.begin());
}

Propagator::Propagator(const SimParams& params, HamiltonianSpec spec)
    : params_(params),
      assembler_((params.validate(), params), spec),
      kinetic_(Grid(params.n_points), params, params.dt, params.kinetic_method),
      v_(params.n_points) {
  if (params_.split_order == SplitOrder::kKineticPotentialKinetic) {
    kinetic_half_.emplace(Grid(params.n_points), params, 0.5 * params.dt,
                          params.kinetic_method);
  }
}

void Propagator::assemble_checked(std::span<const Complex> psi, double t, long step) {
  try {
    assembler_.assemble(psi, t, v_);
  } catch (const BlowUpError& e) {
    throw BlowUpError(step, e.max_density());
  }
  const double m = assembler_.last_max_density();
  if (!(m <= kBlowUpDensity)) throw BlowUpError(step, m);
}

void Propagator::rotate(std::span<Complex> psi, double tau) {
  const double scale = -tau / params_.h;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double angle = scale * v_[i];
    psi[i] *= Complex(std::cos(angle), std::sin(angle));
  }
}

void Propagator::potential_halfstep(WaveField& psi, double t, double dt_half) {
  if (!(dt_half > 0.0)) throw InvalidParameter("potential half-step needs dt_half > 0");
  assemble_checked(psi.values(), t, -1);
  rotate(psi.values(), dt_half);
}

void Propagator::kinetic_step(WaveField& psi) { kinetic_.apply(psi.values()); }

void Propagator::step(WaveField& psi, double t) {
  const double dt = params_.dt;
  if (params_.split_order == SplitOrder::kKineticPotentialKinetic) {
    kinetic_half_->apply(psi.values());
    assemble_checked(psi.values(), t + 0.5 * dt, -1);
    rotate(psi.values(), dt);
    kinetic_half_->apply(psi.values());
    return;
  }
  potential_halfstep(psi, t, 0.5 * dt);
  kinetic_.apply(psi.values());
  potential_halfstep(psi, t + dt, 0.5 * dt);
}

void Propagator::advance(WaveField& psi, long first_step, long n_steps) {
  if (n_steps <= 0) return;
  const double dt = params_.dt;
  auto values = psi.values();

  if (params_.split_order == SplitOrder::kKineticPotentialKinetic) {
    for (long k = 0; k < n_steps; ++k) {
      const long s = first_step + k;
      kinetic_half_->apply(values);
      assemble_checked(values, (static_cast<double>(s) + 0.5) * dt, s);
      rotate(values, dt);
      kinetic_half_->apply(values);
    }
    return;
  }

  assemble_checked(values, static_cast<double>(first_step) * dt, first_step);
  rotate(values, 0.5 * dt);
  for (long k = 0; k < n_steps; ++k) {
    const long s = first_step + k + 1;
    kinetic_.apply(values);
    assemble_checked(values, static_cast<double>(s) * dt, s);
    rotate(values, k + 1 == n_steps ? 0.5 * dt : dt);
  }
}

WaveField potential_halfstep(const WaveField& psi, const HamiltonianSpec& spec,
                             const SimParams& params, double t, double dt_half) {
  Propagator prop(params, spec);
  WaveField out = psi;
  prop.potential_halfstep(out, t, dt_half);
  return out;
}

WaveField kinetic_step(const WaveField& psi, const SimParams& params, double dt) {
  KineticSolver solver(psi.grid(), params, dt, params.kinetic_method);
  WaveField out = psi;
  solver.apply(out.values());
  return out;
}

WaveField step(const WaveField& psi, const HamiltonianSpec& spec, const SimParams& params,
               double t) {
  Propagator prop(params, spec);
  WaveField out = psi;
  prop.step(out, t);
  return out;
}

EvolveResult evolve(WaveField psi0, const HamiltonianSpec& spec, const SimParams& params,
                    std::span<const Observer> observers) {
  Propagator prop(params, spec);
  EvolveResult result{std::move(psi0), 0.0, 0, std::nullopt};
  auto notify = [&](double t) {
    for (const auto& obs : observers) obs(t, result.state);
  };
  notify(0.0);
  const long total = params.step_count();
  const long chunk = static_cast<long>(params.sample_every);
  while (result.steps < total) {
    const long n = std::min(chunk, total - result.steps);
    try {
      prop.advance(result.state, result.steps, n);
    } catch (const BlowUpError& e) {
      result.failure = e;
      return result;
    }
    result.steps += n;
    result.t = static_cast<double>(result.steps) * params.dt;
    notify(result.t);
  }
  return result;
}

}  // namespace loschmidt
