#include "loschmidt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "loschmidt/error.hpp"
#include "loschmidt/fft.hpp"

namespace loschmidt {

double fidelity(const WaveField& unperturbed, const WaveField& perturbed) {
  return std::norm(inner_product(unperturbed, perturbed));
}

double symmetry(const WaveField& psi) {
  const std::size_t n = psi.size();
  if (n % 2 != 0) throw InvalidParameter("symmetry needs an even grid");
  const Grid& grid = psi.grid();
  const std::size_t half = n / 2;
  // Nodes half (x = 0) and 0 (x = -pi, the image of +pi) close the half box.
  Complex sum = 0.5 * (psi[half] * std::conj(psi[half]) + psi[0] * std::conj(psi[0]));
  for (std::size_t i = half + 1; i < n; ++i) {
    sum += psi[i] * std::conj(psi[grid.reflect(i)]);
  }
  return std::norm(sum / static_cast<double>(half));
}

EnergyMeter::EnergyMeter(const SimParams& params, const HamiltonianSpec& spec)
    : params_(params), assembler_(params, spec), scratch_(params.n_points) {}

EnergyComponents EnergyMeter::measure(const WaveField& psi, double t) {
  const std::size_t n = psi.size();
  if (n != params_.n_points) throw DimensionMismatch("energy: grid does not match params");
  assembler_.assemble(psi.values(), t, scratch_);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double dx = psi.grid().spacing();

  double grad = 0.0;
  double sixth = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    grad += std::norm(psi[(i + 1) % n] - psi[i]);
    const double d = std::norm(psi[i]);
    sixth += d * d * d;
  }

  const auto rho = assembler_.source_density();
  const auto phi = assembler_.potential();
  const double rho_mean = std::accumulate(rho.begin(), rho.end(), 0.0) * inv_n;
  double field = 0.0;
  for (std::size_t i = 0; i < n; ++i) field += phi[i] * (rho[i] - rho_mean);

  EnergyComponents e;
  e.kinetic = params_.kinetic_coefficient() * grad * inv_n / (dx * dx);
  e.potential = -0.5 * field * inv_n;
  e.fermi = params_.fermi_coefficient() / 3.0 * sixth * inv_n;
  if (const auto& pert = assembler_.spec().perturbation) {
    const auto w = pert->profile();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::norm(psi[i]);
    e.perturbation = pert->epsilon() * acc * inv_n;
  }
  e.total = e.kinetic + e.potential + e.fermi + e.perturbation;
  return e;
}

EnergyComponents energy_components(const WaveField& psi, const HamiltonianSpec& spec,
                                   const SimParams& params, double t) {
  EnergyMeter meter(params, spec);
  return meter.measure(psi, t);
}

const char* to_string(Window window) noexcept {
  return window == Window::kHann ? "hann" : "none";
}

Spectrum potential_energy_spectrum(std::span<const double> times,
                                   std::span<const double> values, Window window) {
  constexpr std::size_t kMinSamples = 256;
  const std::size_t m = values.size();
  if (times.size() != m) throw DimensionMismatch("spectrum: times and values differ in length");
  if (m < kMinSamples) {
    throw InvalidParameter("spectrum needs at least 256 samples, got " + std::to_string(m));
  }
  const double step = (times[m - 1] - times[0]) / static_cast<double>(m - 1);
  if (!(step > 0.0)) throw InvalidParameter("spectrum: times must increase");
  for (std::size_t k = 1; k < m; ++k) {
    if (std::abs(times[k] - times[k - 1] - step) > 1e-6 * step) {
      throw InvalidParameter("spectrum: sampling is not uniform");
    }
  }

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(m);
  RealFft fft(m);
  auto buf = fft.real();
  double window_energy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double w = 1.0;
    if (window == Window::kHann) {
      const double s = std::sin(kPi * static_cast<double>(k) / static_cast<double>(m));
      w = s * s;
    }
    window_energy += w * w;
    buf[k] = w * (values[k] - mean);
  }
  fft.forward();
  const auto coeffs = fft.spectrum();

  Spectrum out;
  out.window = window;
  out.resolution = kTwoPi / (static_cast<double>(m) * step);
  out.omega.resize(coeffs.size());
  out.power.resize(coeffs.size());
  const double norm = 1.0 / (window_energy * static_cast<double>(m));
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const bool edge = (k == 0) || (m % 2 == 0 && k == m / 2);
    out.omega[k] = static_cast<double>(k) * out.resolution;
    out.power[k] = (edge ? 1.0 : 2.0) * std::norm(coeffs[k]) * norm;
  }
  return out;
}

double peak_frequency(const Spectrum& spectrum, double omega_min) {
  const auto& p = spectrum.power;
  std::size_t best = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (spectrum.omega[k] < omega_min) continue;
    if (best == 0 || p[k] > p[best]) best = k;
  }
  if (best == 0) throw InvalidParameter("spectrum has no bins above omega_min");
  if (best + 1 >= p.size() || p[best - 1] <= 0.0 || p[best + 1] <= 0.0) {
    return spectrum.omega[best];
  }
  const double a = std::log(p[best - 1]);
  const double b = std::log(p[best]);
  const double c = std::log(p[best + 1]);
  const double curvature = a - 2.0 * b + c;
  const double offset = curvature < 0.0 ? 0.5 * (a - c) / curvature : 0.0;
  return spectrum.omega[best] + offset * spectrum.resolution;
}

double max_bin_fraction(const Spectrum& spectrum, double omega_lo, double omega_hi) {
  double total = 0.0;
  double peak = 0.0;
  for (std::size_t k = 0; k < spectrum.power.size(); ++k) {
    const double w = spectrum.omega[k];
    if (w <= omega_lo || w > omega_hi) continue;
    total += spectrum.power[k];
    peak = std::max(peak, spectrum.power[k]);
  }
  return total > 0.0 ? peak / total : 0.0;
}

CriticalTimeResult detect_crossing(std::span<const double> times,
                                   std::span<const double> values, double threshold) {
  if (times.size() != values.size()) throw DimensionMismatch("crossing: length mismatch");
  CriticalTimeResult result;
  result.threshold = threshold;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const bool below = values[k] <= threshold;
    if (k == 0) {
      if (below) {
        result.crossings.push_back({times[0], true});
      }
      continue;
    }
    const bool was_below = values[k - 1] <= threshold;
    if (below == was_below) continue;
    const double span = values[k - 1] - values[k];
    const double frac = span != 0.0 ? (values[k - 1] - threshold) / span : 1.0;
    result.crossings.push_back({times[k - 1] + frac * (times[k] - times[k - 1]), below});
  }
  for (const auto& c : result.crossings) {
    if (c.downward) {
      result.crossed = true;
      result.tau_c = c.t;
      break;
    }
  }
  return result;
}

CriticalTimeResult detect_critical_time(const EchoRecord& record, double threshold) {
  return detect_crossing(record.times, record.fidelity, threshold);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("fit: length mismatch");
  if (x.size() < 2) throw InvalidParameter("fit needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidParameter("fit: all abscissae coincide");
  LinearFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.rms_residual = std::sqrt(ss_res / n);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace loschmidt
