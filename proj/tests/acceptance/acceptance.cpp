// Acceptance suite. Prints one PASS/FAIL line per criterion, plus indented
// "info" lines with the measured numbers. Usage:
//   acceptance [criterion ...] [--workers N] [--out DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "loschmidt/config.hpp"
#include "loschmidt/diagnostics.hpp"
#include "loschmidt/fields.hpp"
#include "loschmidt/output.hpp"
#include "loschmidt/propagator.hpp"
#include "loschmidt/scenarios.hpp"
#include "oracles.hpp"

using namespace loschmidt;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> info;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
  void note(const std::string& line) { info.push_back(line); }
};

struct Context {
  std::size_t workers = 1;
  fs::path out;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : "none"; }

double mean_density(const WaveField& psi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) acc += std::norm(psi[i]);
  return acc / static_cast<double>(psi.size());
}

std::optional<double> first_below(const std::vector<double>& t, const std::vector<double>& f,
                                  double level) {
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (f[k] < level) return t[k];
  }
  return std::nullopt;
}

RunConfig artifact_config(Scenario scenario, const SimParams& physics) {
  RunConfig config;
  config.scenario = scenario;
  config.physics = physics;
  return config;
}

// ---------------------------------------------------------------------------

struct RandomCase {
  SimParams params;
  HamiltonianSpec spec;
  std::string label;
};

std::vector<RandomCase> random_cases(std::size_t n, std::size_t points) {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const KineticMethod methods[] = {KineticMethod::kExponential, KineticMethod::kCrankNicolson,
                                   KineticMethod::kCrankNicolsonSpectral};
  const char* method_names[] = {"exponential", "cn-tridiagonal", "cn-spectral"};
  std::vector<RandomCase> cases;
  for (std::size_t c = 0; c < n; ++c) {
    RandomCase rc;
    SimParams& p = rc.params;
    p.n_points = points;
    p.K0 = 1.5 + u(gen);
    p.h = 0.04 + 0.06 * u(gen);
    p.init_amplitude = 0.5 + 0.5 * u(gen);
    p.vf_ratio = 0.15 * u(gen);
    p.kinetic_method = methods[c % 3];
    const double eps = c % 2 == 0 ? 1e-2 * u(gen) : 0.0;
    if (eps > 0.0) rc.spec.perturbation.emplace(p.grid(), eps, 1, 20, 100 + c);
    std::ostringstream s;
    s << "K0=" << num(p.K0) << " h=" << num(p.h) << " A=" << num(p.init_amplitude)
      << " vf=" << num(p.vf_ratio) << " eps=" << num(eps) << " kinetic=" << method_names[c % 3];
    rc.label = s.str();
    cases.push_back(std::move(rc));
  }
  return cases;
}

double max_energy_drift(RandomCase rc, double dt, double t_end) {
  SimParams p = rc.params;
  p.dt = dt;
  p.t_end = t_end;
  p.sample_every = static_cast<std::size_t>(std::lround(0.5 / dt));
  EnergyMeter meter(p, rc.spec);
  const WaveField psi0 = make_initial_state(p, p.grid());
  const double e0 = meter.measure(psi0, 0.0).total;
  double worst = 0.0;
  const Observer obs = [&](double t, const WaveField& psi) {
    worst = std::max(worst, std::abs(meter.measure(psi, t).total - e0));
  };
  const auto result = evolve(psi0, rc.spec, p, std::span(&obs, 1));
  if (result.failure) return std::nan("");
  return worst / std::abs(e0);
}

Verdict conservation(const Context&) {
  Verdict v;
  const long steps = 100000;
  for (const auto& rc : random_cases(5, 256)) {
    SimParams p = rc.params;
    p.dt = 1e-3;
    p.t_end = steps * p.dt;
    p.sample_every = 1000;
    double worst = 0.0;
    long samples = 0;
    const Observer obs = [&](double, const WaveField& psi) {
      worst = std::max(worst, std::abs(mean_density(psi) - 1.0));
      ++samples;
    };
    const auto result = evolve(make_initial_state(p, p.grid()), rc.spec, p, std::span(&obs, 1));
    v.require(!result.failure && result.steps == steps, "mass run incomplete for " + rc.label);
    v.require(worst <= 1e-9, "mass drift " + num(worst) + " for " + rc.label);
    v.note("mass " + rc.label + ": steps " + std::to_string(result.steps) + ", max |M-1| " +
           num(worst));
  }
  for (const auto& rc : random_cases(5, 2048)) {
    const double coarse = max_energy_drift(rc, 0.01, 10.0);
    const double fine = max_energy_drift(rc, 0.005, 10.0);
    const double order = std::log2(coarse / fine);
    v.require(std::abs(order - 2.0) <= 0.2, "energy order " + num(order) + " for " + rc.label);
    v.note("energy " + rc.label + ": drift " + num(coarse) + " -> " + num(fine) + ", order " +
           num(order));
  }
  return v;
}

// ---------------------------------------------------------------------------

std::vector<oracle::Complex> dense_complex_solve(std::vector<std::vector<oracle::Complex>> a,
                                                 std::vector<oracle::Complex> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const auto f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<oracle::Complex> x(n);
  for (std::size_t r = n; r-- > 0;) {
    auto acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

Verdict poisson_oracle(const Context&) {
  Verdict v;
  const std::size_t n = 16;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_poisson = 0.0;
  double worst_cn = 0.0;
  for (unsigned trial = 0; trial < 20; ++trial) {
    SimParams p;
    p.n_points = n;
    p.K0 = 0.5 + 3.0 * u(gen);
    p.h = 0.01 + 0.2 * u(gen);
    p.dt = 1e-3 + 0.1 * u(gen);
    const auto field = oracle::random_unit_field(n, 1000 + trial);

    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(field[i]);
    const auto phi = solve_poisson(rho, p);
    worst_poisson = std::max(worst_poisson,
                             oracle::max_abs_diff(phi, oracle::dense_periodic_poisson(rho, p.K0)));

    // (I - i mu D2) psi' = (I + i mu D2) psi with D2 the periodic second difference.
    const Grid g = p.grid();
    KineticSolver cn(g, p, p.dt, KineticMethod::kCrankNicolson);
    const double mu = p.h * p.K0 * p.K0 * p.dt / (4.0 * g.spacing() * g.spacing());
    const oracle::Complex imu(0.0, mu);
    std::vector<std::vector<oracle::Complex>> a(n, std::vector<oracle::Complex>(n));
    std::vector<oracle::Complex> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t l = (i + n - 1) % n, r = (i + 1) % n;
      a[i][i] = 1.0 + 2.0 * imu;
      a[i][l] = -imu;
      a[i][r] = -imu;
      b[i] = field[i] + imu * (field[l] - 2.0 * field[i] + field[r]);
    }
    const auto expected = dense_complex_solve(a, b);
    std::vector<Complex> psi(field.begin(), field.end());
    cn.apply(psi);
    worst_cn = std::max(worst_cn, oracle::max_abs_diff_c(psi, expected));
  }
  v.require(worst_poisson <= 1e-12, "Poisson deviation " + num(worst_poisson));
  v.require(worst_cn <= 1e-12, "cyclic tridiagonal deviation " + num(worst_cn));
  v.note("20 random cases on N=16: Poisson max deviation " + num(worst_poisson) +
         ", Crank-Nicolson max deviation " + num(worst_cn));
  return v;
}

// ---------------------------------------------------------------------------

Verdict linear_dispersion(const Context& ctx) {
  Verdict v;
  SimParams p;
  p.init_amplitude = 0.01;
  p.K0 = 2.0;
  p.h = 0.05;
  p.vf_ratio = 0.1;
  p.n_points = 256;
  p.dt = 0.01;
  p.t_end = 200.0 * kPi;
  p.sample_every = 10;
  const SpectrumRun run = run_spectrum(p);
  v.require(!run.failure, "run failed");
  if (run.failure) return v;

  // Linearized fluid: rho = 1 + a cos(x) oscillates at
  // omega_1^2 = 1 + 3 vf^2 K0^2 / 5 + (h K0^2 / 2)^2; E_pot ~ a^2 at twice that.
  const double vf = p.vf_ratio, k2 = p.K0 * p.K0;
  const double omega1 = std::sqrt(1.0 + 0.6 * vf * vf * k2 + std::pow(0.5 * p.h * k2, 2));
  const double expected = 2.0 * omega1;
  const double measured = peak_frequency(run.spectrum, 0.5);
  const double rel = std::abs(measured / expected - 1.0);
  v.require(rel <= 0.01, "relative deviation " + num(rel));
  v.note("measured " + num(measured) + ", expected 2*omega_1 = " + num(expected) +
         ", relative deviation " + num(rel) + ", bin width " + num(run.spectrum.resolution));
  write_spectrum(artifact_config(Scenario::kSpectrum, p), run, ctx.out / "dispersion");
  return v;
}

// ---------------------------------------------------------------------------

struct EchoTiming {
  EchoRecord record;
  std::optional<double> tau_c, tau_sigma, t90, t99;
};

EchoTiming critical_echo(const SimParams& p, double eps) {
  const HamiltonianSpec h0;
  HamiltonianSpec h1;
  h1.perturbation.emplace(p.grid(), eps, StaticPerturbation::kDefaultMinMode,
                          StaticPerturbation::kDefaultMaxMode, 1);
  EchoOptions options;
  options.record_energies = false;
  options.stop_fidelity = 0.1;
  options.stop_symmetry = 0.1;
  TwinRun twin(p, h0, h1, options);
  twin.advance_to(p.t_end);
  if (!twin.stopped() && !twin.failed()) twin.advance_to(2.0 * p.t_end);
  EchoTiming out;
  out.record = twin.record();
  const auto& r = out.record;
  out.tau_c = detect_crossing(r.times, r.fidelity, 0.1).tau_c;
  out.tau_sigma = detect_crossing(r.times, r.symmetry, 0.1).tau_c;
  out.t90 = detect_crossing(r.times, r.fidelity, 0.9).tau_c;
  out.t99 = first_below(r.times, r.fidelity, 0.99);
  return out;
}

Verdict abrupt_decay(const Context& ctx) {
  Verdict v;
  SimParams p;  // K0 = 2, h = 0.05, N = 2048, dt = 5e-4
  const EchoTiming a = critical_echo(p, 1e-9);
  v.require(!a.record.failure, "run failed");
  v.require(a.tau_c.has_value(), "F never reached 0.1");
  if (!a.tau_c) return v;
  const double tau = *a.tau_c;

  double min_quiescent = 1.0;
  for (std::size_t k = 0; k < a.record.size() && a.record.times[k] <= 0.5 * tau; ++k) {
    min_quiescent = std::min(min_quiescent, a.record.fidelity[k]);
  }
  v.require(min_quiescent > 0.99, "F fell to " + num(min_quiescent) + " before tau_c/2");
  const double fall = tau - a.t90.value_or(0.0);
  v.require(fall <= 10.0, "0.9 -> 0.1 took " + num(fall));
  v.require(a.tau_sigma && std::abs(*a.tau_sigma - tau) <= 5.0,
            "Sigma crossing at " + opt(a.tau_sigma) + " vs tau_c " + num(tau));

  SimParams half = p;
  half.dt = 0.5 * p.dt;
  half.sample_every = 2 * p.sample_every;
  const EchoTiming b = critical_echo(half, 1e-9);
  v.require(b.tau_c.has_value(), "F never reached 0.1 at dt/2");
  if (b.tau_c) {
    const double shift = std::abs(*b.tau_c - tau) / tau;
    v.require(shift < 0.02, "dt-halving shift " + num(shift));
    v.note("tau_c at dt " + num(p.dt) + ": " + num(tau) + ", at dt " + num(half.dt) + ": " +
           num(*b.tau_c) + ", relative shift " + num(shift));
  }
  v.note("min F on [0, tau_c/2] " + num(min_quiescent) + ", first F<0.99 at " + opt(a.t99) +
         ", F=0.9 at " + opt(a.t90) + ", fall time " + num(fall) + ", Sigma crossing " +
         opt(a.tau_sigma));
  RunConfig config = artifact_config(Scenario::kEcho, p);
  config.record_energies = false;
  write_echo(config, a.record, ctx.out / "abrupt");
  return v;
}

// ---------------------------------------------------------------------------

Verdict critical_time_scaling(const Context& ctx) {
  Verdict v;
  SimParams base;
  std::vector<double> eps;
  for (int k = -9; k <= -3; ++k) eps.push_back(std::pow(10.0, k));
  TauScanOptions options;
  options.workers = ctx.workers;

  const std::vector<double> hs{0.05, 0.025, 0.0125};
  const ScanResult scan = scan_tau_c(base, eps, hs, {1}, options);
  for (const auto& series : scan.series) {
    std::ostringstream line;
    line << series.label << ": tau_c";
    for (const auto& pt : series.points) line << ' ' << opt(pt.critical.tau_c);
    if (series.fit) {
      line << "; t0 " << num(series.fit->slope) << ", R^2 " << num(series.fit->r_squared);
    }
    bool monotone = true;
    for (std::size_t k = 1; k < series.points.size(); ++k) {
      const auto& prev = series.points[k - 1].critical.tau_c;
      const auto& cur = series.points[k].critical.tau_c;
      if (prev && cur && *cur > *prev) monotone = false;
    }
    line << (monotone ? "; nonincreasing in eps" : "; NOT monotone in eps");
    v.note(line.str());
    if (series.h == 0.05) {
      v.require(series.fit.has_value(), "no fit for h=0.05");
      if (series.fit) {
        v.require(series.fit->slope >= 3.3 && series.fit->slope <= 5.3,
                  "t0 " + num(series.fit->slope));
        v.require(series.fit->r_squared >= 0.9, "R^2 " + num(series.fit->r_squared));
      }
    }
  }
  v.require(!scan.any_failure(), "a scan run failed");
  RunConfig config = artifact_config(Scenario::kTauScan, base);
  config.tau_epsilons = eps;
  config.tau_h_values = hs;
  write_scan(config, scan, ctx.out / "tauc");

  const ScanResult seeds = scan_tau_c(base, eps, {0.05}, {1, 2}, options);
  std::vector<double> t0;
  for (const auto& s : seeds.series) {
    if (s.fit && s.label.find("mean") == std::string::npos) t0.push_back(s.fit->slope);
  }
  if (t0.size() == 2) {
    v.note("seed spread at h=0.05: t0 " + num(t0[0]) + " vs " + num(t0[1]) + ", relative " +
           num(std::abs(t0[0] - t0[1]) / std::min(t0[0], t0[1])));
  }
  return v;
}

// ---------------------------------------------------------------------------

SimParams driven_base() {
  SimParams p;
  p.h = 0.025;
  p.t_end = 1200.0;
  return p;
}

Verdict golden_rule(const Context& ctx) {
  Verdict v;
  const SimParams base = driven_base();
  FgrOptions options;
  options.workers = ctx.workers;
  const std::vector<double> eps{5e-4, 1e-3, 2e-3};
  const ScanResult scan = scan_fgr(base, 0.5, eps, 1, options);
  v.require(!scan.any_failure(), "a run failed");
  const auto& fgr = *scan.fgr;
  const auto& points = scan.series.front().points;

  for (std::size_t k = 0; k < fgr.rate_ratios.size(); ++k) {
    const double r = fgr.rate_ratios[k];
    v.require(std::abs(r - 4.0) <= 2.0, "rate ratio " + num(r));
  }
  v.require(fgr.collapse_spread && *fgr.collapse_spread <= 0.3,
            "collapse spread " + opt(fgr.collapse_spread));
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& rate = points[k].rate.rate;
    const auto& onset = fgr.onset_times[k];
    v.require(rate && onset, "missing rate or onset for eps " + num(eps[k]));
    if (!rate || !onset) continue;
    const double window = 0.05 / *rate;
    v.require(*onset <= window, "onset " + num(*onset) + " > " + num(window) + " for eps " + num(eps[k]));
    v.note("eps " + num(eps[k]) + ": Gamma " + num(*rate) + " (R^2 " + num(points[k].rate.r_squared) +
           "), Gamma/eps^2 " + num(fgr.scaled_rates[k]) + ", first F<0.99 at " + num(*onset) +
           " vs 5% of 1/Gamma " + num(window) + ", tau_c " + opt(points[k].critical.tau_c));
  }
  std::ostringstream ratios;
  ratios << "rate ratios";
  for (double r : fgr.rate_ratios) ratios << ' ' << num(r);
  ratios << ", collapse spread " << opt(fgr.collapse_spread);
  v.note(ratios.str());

  RunConfig config = artifact_config(Scenario::kFgrScan, base);
  config.fgr_epsilons = eps;
  write_scan(config, scan, ctx.out / "fgr");
  return v;
}

// ---------------------------------------------------------------------------

Verdict mixing(const Context& ctx) {
  Verdict v;
  const SimParams base = driven_base();
  BetaOptions options;
  options.workers = ctx.workers;
  options.keep_curves = false;
  const std::vector<double> betas{0.0, 0.01, 0.03, 0.1, 0.3};
  const ScanResult scan = scan_beta(base, 0.5, 1e-3, betas, 1, options);
  v.require(!scan.any_failure(), "a run failed");
  const auto& points = scan.series.front().points;
  const auto ref = points.front().short_rate;
  v.require(ref.has_value(), "no short-time rate for beta=0");
  std::optional<double> previous;
  for (const auto& pt : points) {
    const auto& tau = pt.critical.tau_c;
    if (ref && pt.short_rate) {
      const double rel = std::abs(*pt.short_rate / *ref - 1.0);
      v.require(rel <= 0.3, "beta " + num(pt.param) + " short rate off by " + num(rel));
    } else {
      v.require(false, "no short-time rate for beta " + num(pt.param));
    }
    v.require(tau.has_value(), "beta " + num(pt.param) + " never reached F=0.1");
    if (previous && tau) {
      v.require(*tau < *previous, "tau(F=0.1) not decreasing at beta " + num(pt.param));
    }
    previous = tau;
    v.note("beta " + num(pt.param) + ": short rate " + opt(pt.short_rate) + ", tau(F=0.1) " + opt(tau) +
           ", departure " + opt(pt.departure_time));
  }
  v.note("short-time window ends at " + opt(scan.reference_horizon));
  RunConfig config = artifact_config(Scenario::kBetaScan, base);
  write_scan(config, scan, ctx.out / "beta");
  return v;
}

// ---------------------------------------------------------------------------

Verdict broad_spectrum(const Context& ctx) {
  Verdict v;
  SimParams p;  // K0 = 2, h = 0.05, A = 1, N = 2048, T = 200
  const SpectrumRun run = run_spectrum(p);
  v.require(!run.failure, "run failed");
  if (run.failure) return v;
  const double fraction = max_bin_fraction(run.spectrum, 0.0, 3.0);
  v.require(fraction <= 0.2, "largest bin holds " + num(fraction));
  double band = 0.0, total = 0.0;
  for (std::size_t k = 0; k < run.spectrum.omega.size(); ++k) {
    total += run.spectrum.power[k];
    if (run.spectrum.omega[k] > 0.0 && run.spectrum.omega[k] <= 3.0) band += run.spectrum.power[k];
  }
  v.note("largest bin share of (0,3] power " + num(fraction) + ", band share of total " +
         num(band / total) + ", peak at " + num(peak_frequency(run.spectrum, 0.0)));
  write_spectrum(artifact_config(Scenario::kSpectrum, p), run, ctx.out / "spectrum");
  return v;
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

WaveField evolve_state(const SimParams& p, const HamiltonianSpec& spec, WaveField psi) {
  auto result = evolve(std::move(psi), spec, p, {});
  if (result.failure) throw *result.failure;
  return result.state;
}

Verdict determinism_and_echo(const Context& ctx) {
  Verdict v;
  const auto values = parse_key_values(
      "numerics.n_points = 512\nnumerics.t_end = 20\nnumerics.dt = 1e-3\n"
      "perturbation.epsilon = 1e-6\ntauc.epsilons = 1e-4, 1e-3, 1e-2\n");
  for (const std::string scenario : {"echo", "tauc-scan"}) {
    auto kv = values;
    kv["scenario"] = scenario;
    kv["output.dir"] = (ctx.out / "determinism" / scenario).generic_string();
    const RunConfig config = build_config(kv);
    const auto first = execute(config);
    std::vector<std::string> before;
    for (const auto& path : first.files.paths) before.push_back(slurp(path));
    const auto second = execute(config);
    bool same = first.files.paths == second.files.paths;
    for (std::size_t k = 0; same && k < second.files.paths.size(); ++k) {
      same = slurp(second.files.paths[k]) == before[k];
    }
    v.require(same, scenario + " outputs differ between identical runs");
    v.note(scenario + ": " + std::to_string(first.files.paths.size()) + " files byte-identical on rerun: " +
           (same ? "yes" : "no"));
  }

  SimParams p;
  p.n_points = 512;
  p.t_end = 5.0;
  HamiltonianSpec spec;
  spec.perturbation.emplace(p.grid(), 1e-3, 1, 20, 1);
  const WaveField psi0 = make_initial_state(p, p.grid());

  std::vector<double> steps, swapped, global;
  for (double dt : {0.01, 0.005, 0.0025}) {
    p.dt = dt;
    p.split_order = SplitOrder::kPotentialKineticPotential;
    const WaveField forward = evolve_state(p, spec, psi0);
    const double same = oracle::rms_diff(evolve_state(p, spec, forward.conjugated()).conjugated(), psi0);
    SimParams half = p;
    half.dt = 0.5 * dt;
    const double error = oracle::rms_diff(forward, evolve_state(half, spec, psi0));
    SimParams back = p;
    back.split_order = SplitOrder::kKineticPotentialKinetic;
    const double other =
        oracle::rms_diff(evolve_state(back, spec, forward.conjugated()).conjugated(), psi0);
    v.require(same <= error, "same-scheme echo " + num(same) + " exceeds global error " + num(error));
    v.note("dt " + num(dt) + ": echo error " + num(same) + ", swapped-return echo error " + num(other) +
           ", forward error vs dt/2 " + num(error));
    steps.push_back(dt);
    swapped.push_back(other);
    global.push_back(error);
  }
  const double order = oracle::loglog_slope(steps, swapped);
  v.require(std::abs(order - 2.0) <= 0.2, "swapped-return echo order " + num(order));
  v.note("swapped-return echo order " + num(order) + ", forward error order " +
         num(oracle::loglog_slope(steps, global)));
  return v;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict(const Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "conservation", conservation},
      {2, "Poisson and tridiagonal oracle", poisson_oracle},
      {3, "linear dispersion", linear_dispersion},
      {4, "abrupt fidelity decay", abrupt_decay},
      {5, "critical-time scaling", critical_time_scaling},
      {6, "golden-rule decay", golden_rule},
      {7, "density mixing", mixing},
      {8, "broad spectrum", broad_spectrum},
      {9, "determinism and echo", determinism_and_echo},
  };

  Context ctx;
  ctx.workers = std::max(1u, std::thread::hardware_concurrency());
  ctx.out = "acceptance_artifacts";
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--workers" && i + 1 < argc) {
      ctx.workers = std::stoul(argv[++i]);
    } else if (arg == "--out" && i + 1 < argc) {
      ctx.out = argv[++i];
    } else {
      try {
        selected.insert(std::stoi(arg));
      } catch (const std::exception&) {
        std::cerr << "usage: acceptance [criterion ...] [--workers N] [--out DIR]\n";
        return 2;
      }
    }
  }

  int failed = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = c.run(ctx);
    } catch (const std::exception& e) {
      verdict.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (verdict.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ")";
    if (!verdict.pass) {
      std::cout << ":";
      for (const auto& f : verdict.failures) std::cout << ' ' << f << ';';
    }
    std::cout << " [" << num(seconds) << " s]\n";
    for (const auto& line : verdict.info) std::cout << "    info: " << line << '\n';
    std::cout.flush();
    if (!verdict.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
