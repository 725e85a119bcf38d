#include "loschmidt/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "loschmidt/error.hpp"

namespace loschmidt {

const char* to_string(SymmetrySource source) noexcept {
  return source == SymmetrySource::kPerturbed ? "perturbed" : "unperturbed";
}

namespace {

const SimParams& checked(const SimParams& params) {
  params.validate();
  return params;
}

}  // namespace

TwinRun::TwinRun(const SimParams& params, const HamiltonianSpec& unperturbed,
                 const HamiltonianSpec& perturbed, EchoOptions options)
    : params_(checked(params)),
      options_(options),
      prop0_(params, unperturbed),
      prop1_(params, perturbed),
      psi0_(make_initial_state(params, params.grid())),
      psi1_(psi0_) {
  if (!unperturbed.density.same_physics(perturbed.density)) {
    throw InvalidExperiment(
        "twin run needs the same density source in both Hamiltonians (got " +
        std::string(to_string(unperturbed.density.kind())) + " and " +
        to_string(perturbed.density.kind()) + ")");
  }
  if (options_.record_energies) meter_.emplace(params, perturbed);
  sample();
}

double TwinRun::time() const noexcept { return static_cast<double>(steps_) * params_.dt; }

void TwinRun::sample() {
  const double t = time();
  const double f = fidelity(psi0_, psi1_);
  const double s = symmetry(options_.symmetry_source == SymmetrySource::kPerturbed ? psi1_
                                                                                  : psi0_);
  record_.times.push_back(t);
  record_.fidelity.push_back(f);
  record_.symmetry.push_back(s);
  if (meter_) {
    try {
      record_.energies.push_back(meter_->measure(psi1_, t));
    } catch (const BlowUpError& e) {
      record_.energies.push_back({});
      record_.failure = BlowUpError(steps_, e.max_density()).what();
      failed_step_ = steps_;
    }
  }
  if (options_.stop_fidelity && f <= *options_.stop_fidelity) fidelity_reached_ = true;
  if (options_.stop_symmetry && s <= *options_.stop_symmetry) symmetry_reached_ = true;
}

bool TwinRun::thresholds_met() const noexcept {
  if (!options_.stop_fidelity && !options_.stop_symmetry) return false;
  return (!options_.stop_fidelity || fidelity_reached_) &&
         (!options_.stop_symmetry || symmetry_reached_);
}

bool TwinRun::stopped() const noexcept { return failed() || thresholds_met(); }

bool TwinRun::advance_to(double t_limit) {
  if (failed()) return false;
  const long target = std::lround(t_limit / params_.dt);
  const long chunk = static_cast<long>(params_.sample_every);
  while (steps_ < target && !thresholds_met()) {
    const long n = std::min(chunk, target - steps_);
    try {
      prop0_.advance(psi0_, steps_, n);
      prop1_.advance(psi1_, steps_, n);
    } catch (const BlowUpError& e) {
      record_.failure = e.what();
      failed_step_ = e.step();
      return false;
    }
    steps_ += n;
    sample();
  }
  return true;
}

EchoRecord run_echo(const SimParams& params, const HamiltonianSpec& unperturbed,
                    const HamiltonianSpec& perturbed, const EchoOptions& options) {
  TwinRun twin(params, unperturbed, perturbed, options);
  twin.advance_to(params.t_end);
  return twin.take_record();
}

RateFit fit_decay_rate(std::span<const double> times, std::span<const double> fidelity,
                       double ceiling, double floor) {
  if (times.size() != fidelity.size()) throw DimensionMismatch("rate fit: length mismatch");
  if (!(floor > 0.0 && floor < ceiling)) {
    throw InvalidParameter("rate fit needs 0 < floor < ceiling");
  }
  RateFit fit;
  std::vector<double> x;
  std::vector<double> y;
  bool entered = false;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double f = fidelity[k];
    if (!entered && f > ceiling) continue;
    entered = true;
    if (f < floor) {
      fit.low_confidence = false;
      break;
    }
    if (f <= ceiling) {
      x.push_back(times[k]);
      y.push_back(std::log(f));
    }
  }
  fit.n = x.size();
  if (x.size() < 3) {
    fit.low_confidence = true;
    return fit;
  }
  const LinearFit line = fit_line(x, y);
  fit.rate = -line.slope;
  fit.r_squared = line.r_squared;
  fit.t_begin = x.front();
  fit.t_end = x.back();
  return fit;
}

std::optional<double> initial_decay_rate(std::span<const double> times,
                                         std::span<const double> fidelity, double t_stop) {
  if (times.size() != fidelity.size()) throw DimensionMismatch("rate fit: length mismatch");
  double stt = 0.0;
  double stl = 0.0;
  for (std::size_t k = 0; k < times.size() && times[k] <= t_stop; ++k) {
    if (!(fidelity[k] > 0.0)) break;
    stt += times[k] * times[k];
    stl += times[k] * std::log(fidelity[k]);
  }
  if (stt == 0.0) return std::nullopt;
  return -stl / stt;
}

bool ScanResult::any_failure() const noexcept {
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      if (p.failure) return true;
    }
  }
  return false;
}

void run_parallel(std::size_t n_jobs, std::size_t workers,
                  const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(n_jobs);
  const std::size_t n_threads = std::min(std::max<std::size_t>(workers, 1), n_jobs);
  if (n_threads <= 1) {
    for (std::size_t k = 0; k < n_jobs; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n_jobs; k = next++) {
      try {
        job(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  pool.clear();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

ScanPoint finish_point(double param, TwinRun& twin, double threshold, bool keep_record) {
  ScanPoint point;
  point.param = param;
  const EchoRecord& rec = twin.record();
  point.critical = detect_critical_time(rec, threshold);
  const auto sym = detect_crossing(rec.times, rec.symmetry, threshold);
  point.symmetry_tau = sym.tau_c;
  point.horizon = twin.time();
  point.failure = rec.failure;
  if (keep_record) point.record = twin.take_record();
  return point;
}

std::optional<LinearFit> fit_tau_c(const std::vector<ScanPoint>& points) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : points) {
    if (p.critical.crossed && p.param > 0.0) {
      x.push_back(-std::log(p.param));
      y.push_back(*p.critical.tau_c);
    }
  }
  if (x.size() < 3) return std::nullopt;
  return fit_line(x, y);
}

std::string format_h(double h) {
  std::string s = std::to_string(h);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

ScanResult scan_tau_c(const SimParams& base, const std::vector<double>& epsilons,
                      const std::vector<double>& h_values,
                      const std::vector<std::uint64_t>& seeds, const TauScanOptions& options) {
  if (epsilons.empty() || h_values.empty() || seeds.empty()) {
    throw InvalidParameter("tau_c scan needs at least one epsilon, h and seed");
  }
  for (double e : epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InvalidParameter("tau_c scan: epsilon must be > 0");
  }
  base.validate();
  const Grid grid = base.grid();

  const std::size_t n_eps = epsilons.size();
  const std::size_t n_seed = seeds.size();
  const std::size_t n_jobs = h_values.size() * n_seed * n_eps;
  std::vector<ScanPoint> points(n_jobs);

  run_parallel(n_jobs, options.workers, [&](std::size_t job) {
    const std::size_t ih = job / (n_seed * n_eps);
    const std::size_t is = (job / n_eps) % n_seed;
    const std::size_t ie = job % n_eps;
    SimParams params = base;
    params.h = h_values[ih];
    const HamiltonianSpec h0{DensitySource::self_consistent(), std::nullopt};
    HamiltonianSpec h1 = h0;
    h1.perturbation.emplace(grid, epsilons[ie], options.n_min, options.n_max, seeds[is]);
    EchoOptions echo;
    echo.record_energies = false;
    echo.stop_fidelity = options.threshold;
    if (options.track_symmetry) echo.stop_symmetry = options.threshold;
    TwinRun twin(params, h0, h1, echo);
    twin.advance_to(base.t_end);
    bool extended = false;
    if (!twin.stopped()) {
      extended = true;
      twin.advance_to(2.0 * base.t_end);
    }
    points[job] = finish_point(epsilons[ie], twin, options.threshold, false);
    points[job].extended = extended;
  });

  ScanResult result;
  result.kind = "tauc-scan";
  result.axis = "epsilon";
  result.threshold = options.threshold;
  for (std::size_t ih = 0; ih < h_values.size(); ++ih) {
    for (std::size_t is = 0; is < n_seed; ++is) {
      ScanSeries series;
      series.h = h_values[ih];
      series.seed = seeds[is];
      series.label = "h" + format_h(series.h) + "_seed" + std::to_string(series.seed);
      const auto first = points.begin() + static_cast<std::ptrdiff_t>((ih * n_seed + is) * n_eps);
      series.points.assign(first, first + static_cast<std::ptrdiff_t>(n_eps));
      series.fit = fit_tau_c(series.points);
      result.series.push_back(std::move(series));
    }
    if (n_seed < 2) continue;
    ScanSeries mean;
    mean.h = h_values[ih];
    mean.label = "h" + format_h(mean.h) + "_mean";
    for (std::size_t ie = 0; ie < n_eps; ++ie) {
      ScanPoint avg;
      avg.param = epsilons[ie];
      avg.critical.threshold = options.threshold;
      double sum = 0.0;
      bool all = true;
      for (std::size_t is = 0; is < n_seed; ++is) {
        const auto& p = points[(ih * n_seed + is) * n_eps + ie];
        avg.horizon = std::max(avg.horizon, p.horizon);
        avg.extended = avg.extended || p.extended;
        if (p.failure && !avg.failure) avg.failure = p.failure;
        if (!p.critical.crossed) {
          all = false;
        } else {
          sum += *p.critical.tau_c;
        }
      }
      if (all) {
        avg.critical.crossed = true;
        avg.critical.tau_c = sum / static_cast<double>(n_seed);
      }
      mean.points.push_back(std::move(avg));
    }
    mean.fit = fit_tau_c(mean.points);
    result.series.push_back(std::move(mean));
  }
  return result;
}

namespace {

std::optional<double> first_below(const EchoRecord& rec, double level) {
  return detect_crossing(rec.times, rec.fidelity, level).tau_c;
}

bool total_energy_varies(const EchoRecord& rec) {
  if (rec.energies.size() < 2) return false;
  const double e0 = rec.energies.front().total;
  double worst = 0.0;
  for (const auto& e : rec.energies) worst = std::max(worst, std::abs(e.total - e0));
  return worst > 1e-6 * std::max(1.0, std::abs(e0));
}

}  // namespace

ScanResult scan_fgr(const SimParams& base, double delta, const std::vector<double>& epsilons,
                    std::uint64_t seed, const FgrOptions& options) {
  if (epsilons.empty()) throw InvalidParameter("FGR scan needs at least one epsilon");
  if (!(delta > 0.0)) throw InvalidParameter("FGR scan needs delta > 0");
  SimParams params = base;
  if (options.zero_fermi) params.vf_ratio = 0.0;
  params.validate();
  const Grid grid = params.grid();
  const DensitySource drive = DensitySource::external(delta, options.n_modes, seed);

  std::vector<ScanPoint> points(epsilons.size());
  run_parallel(epsilons.size(), options.workers, [&](std::size_t k) {
    const HamiltonianSpec h0{drive, std::nullopt};
    HamiltonianSpec h1 = h0;
    h1.perturbation.emplace(grid, epsilons[k], options.n_min, options.n_max, seed);
    EchoOptions echo;
    echo.stop_fidelity = options.threshold;
    TwinRun twin(params, h0, h1, echo);
    twin.advance_to(params.t_end);
    points[k] = finish_point(epsilons[k], twin, options.threshold, true);
    const auto& rec = points[k].record;
    points[k].rate = fit_decay_rate(rec.times, rec.fidelity, options.fit_ceiling,
                                    options.fit_floor);
  });

  FgrSummary summary;
  summary.collapse_levels = options.collapse_levels;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    const double eps2 = epsilons[k] * epsilons[k];
    summary.scaled_rates.push_back(p.rate.rate ? *p.rate.rate / eps2
                                               : std::numeric_limits<double>::quiet_NaN());
    if (k > 0 && p.rate.rate && points[k - 1].rate.rate) {
      summary.rate_ratios.push_back(*p.rate.rate / *points[k - 1].rate.rate);
    } else if (k > 0) {
      summary.rate_ratios.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    summary.onset_times.push_back(first_below(p.record, 0.99));
    summary.energy_varies.push_back(total_energy_varies(p.record));
  }
  bool complete = true;
  double spread = 0.0;
  for (double level : options.collapse_levels) {
    std::vector<std::optional<double>> row;
    double sum = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      auto t = first_below(points[k].record, level);
      if (t) {
        *t *= epsilons[k] * epsilons[k];
        sum += *t;
      } else {
        complete = false;
      }
      row.push_back(t);
    }
    if (complete) {
      const double mean = sum / static_cast<double>(points.size());
      for (const auto& t : row) spread = std::max(spread, std::abs(*t / mean - 1.0));
    }
    summary.collapse_times.push_back(std::move(row));
  }
  if (complete) summary.collapse_spread = spread;

  if (!options.keep_curves) {
    for (auto& p : points) p.record = EchoRecord{};
  }

  ScanResult result;
  result.kind = "fgr-scan";
  result.axis = "epsilon";
  result.threshold = options.threshold;
  ScanSeries series;
  series.label = "fgr";
  series.h = params.h;
  series.seed = seed;
  series.points = std::move(points);
  result.series.push_back(std::move(series));
  result.fgr = std::move(summary);
  return result;
}

ScanResult scan_beta(const SimParams& base, double delta, double epsilon,
                     const std::vector<double>& betas, std::uint64_t seed,
                     const BetaOptions& options) {
  if (betas.empty()) throw InvalidParameter("beta scan needs at least one beta");
  if (!(epsilon > 0.0)) throw InvalidParameter("beta scan needs epsilon > 0");
  SimParams params = base;
  if (options.zero_fermi) params.vf_ratio = 0.0;
  params.validate();
  const Grid grid = params.grid();

  std::vector<double> axis = betas;
  const auto zero = std::find(betas.begin(), betas.end(), 0.0);
  const bool own_reference = zero == betas.end();
  if (own_reference) axis.push_back(0.0);
  const std::size_t ref_index =
      own_reference ? betas.size() : static_cast<std::size_t>(zero - betas.begin());

  std::vector<ScanPoint> points(axis.size());
  run_parallel(axis.size(), options.workers, [&](std::size_t k) {
    const HamiltonianSpec h0{DensitySource::mixed(axis[k], delta, options.n_modes, seed),
                             std::nullopt};
    HamiltonianSpec h1 = h0;
    h1.perturbation.emplace(grid, epsilon, options.n_min, options.n_max, seed);
    EchoOptions echo;
    echo.record_energies = options.keep_curves;
    echo.stop_fidelity = options.threshold;
    TwinRun twin(params, h0, h1, echo);
    twin.advance_to(params.t_end);
    points[k] = finish_point(axis[k], twin, options.threshold, true);
    const auto& rec = points[k].record;
    points[k].rate = fit_decay_rate(rec.times, rec.fidelity);
  });

  ScanResult result;
  result.kind = "beta-scan";
  result.axis = "beta";
  result.threshold = options.threshold;

  const EchoRecord& ref = points[ref_index].record;
  const auto t_short = first_below(ref, options.short_time_level);
  result.reference_horizon = t_short;
  for (auto& p : points) {
    if (t_short) p.short_rate = initial_decay_rate(p.record.times, p.record.fidelity, *t_short);
    const std::size_t n = std::min(p.record.size(), ref.size());
    for (std::size_t k = 0; k < n; ++k) {
      const double f = p.record.fidelity[k];
      if (f > options.departure_ceiling) continue;
      const double loss = -std::log(f);
      const double ref_loss = -std::log(ref.fidelity[k]);
      if (loss > options.departure_factor * ref_loss) {
        p.departure_time = p.record.times[k];
        break;
      }
    }
  }
  ScanPoint reference;
  if (own_reference) {
    reference = std::move(points.back());
    points.pop_back();
  }
  if (!options.keep_curves) {
    for (auto& p : points) p.record = EchoRecord{};
    reference.record = EchoRecord{};
  }

  ScanSeries series;
  series.label = "beta";
  series.h = params.h;
  series.seed = seed;
  series.points = std::move(points);
  result.series.push_back(std::move(series));
  if (own_reference) {
    ScanSeries ref_series;
    ref_series.label = "reference";
    ref_series.h = params.h;
    ref_series.seed = seed;
    ref_series.points.push_back(std::move(reference));
    result.series.push_back(std::move(ref_series));
  }
  return result;
}

SpectrumRun run_spectrum(const SimParams& params, Window window) {
  params.validate();
  const HamiltonianSpec spec{DensitySource::self_consistent(), std::nullopt};
  SpectrumRun run;
  EnergyMeter meter(params, spec);
  const Observer record = [&](double t, const WaveField& psi) {
    run.times.push_back(t);
    run.potential.push_back(meter.measure(psi, t).potential);
  };
  const EvolveResult result =
      evolve(make_initial_state(params, params.grid()), spec, params, std::span(&record, 1));
  if (result.failure) {
    run.failure = result.failure->what();
    run.failed_step = result.failure->step();
  }
  // A trailing partial sample interval would break uniform sampling.
  const std::size_t m = run.times.size();
  if (m >= 3) {
    const double first = run.times[1] - run.times[0];
    const double last = run.times[m - 1] - run.times[m - 2];
    if (std::abs(last - first) > 1e-9 * first) {
      run.times.pop_back();
      run.potential.pop_back();
    }
  }
  run.spectrum.window = window;
  if (run.times.size() >= 256) {
    run.spectrum = potential_energy_spectrum(run.times, run.potential, window);
  }
  return run;
}

}  // namespace loschmidt
