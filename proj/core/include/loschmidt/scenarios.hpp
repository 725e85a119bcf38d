#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loschmidt/core.hpp"
#include "loschmidt/diagnostics.hpp"
#include "loschmidt/fields.hpp"
#include "loschmidt/propagator.hpp"

namespace loschmidt {

enum class SymmetrySource { kPerturbed, kUnperturbed };

const char* to_string(SymmetrySource source) noexcept;

struct EchoOptions {
  bool record_energies = true;
  SymmetrySource symmetry_source = SymmetrySource::kPerturbed;
  /// Stop once F has fallen to this value (checked at sample times).
  std::optional<double> stop_fidelity;
  /// Stop once Sigma has fallen to this value. With both thresholds set the
  /// run continues until each has been reached.
  std::optional<double> stop_symmetry;
};

/// Two trajectories from the same initial state under H0 and H0 + dH,
/// advanced in lockstep so their sample times coincide exactly.
class TwinRun {
 public:
  /// Throws InvalidExperiment unless both specs share the density source.
  TwinRun(const SimParams& params, const HamiltonianSpec& unperturbed,
          const HamiltonianSpec& perturbed, EchoOptions options = {});

  /// Integrates until time `t_limit` (rounded to whole samples) or until the
  /// stop thresholds are met. Can be called again with a later limit.
  /// Returns false if the run stopped on a blow-up.
  bool advance_to(double t_limit);

  bool stopped() const noexcept;
  bool failed() const noexcept { return record_.failure.has_value(); }
  std::optional<long> failed_step() const noexcept { return failed_step_; }
  double time() const noexcept;

  const EchoRecord& record() const noexcept { return record_; }
  EchoRecord take_record() { return std::move(record_); }
  const WaveField& unperturbed_state() const noexcept { return psi0_; }
  const WaveField& perturbed_state() const noexcept { return psi1_; }

 private:
  void sample();
  bool thresholds_met() const noexcept;

  SimParams params_;
  EchoOptions options_;
  Propagator prop0_;
  Propagator prop1_;
  std::optional<EnergyMeter> meter_;
  WaveField psi0_;
  WaveField psi1_;
  long steps_ = 0;
  bool fidelity_reached_ = false;
  bool symmetry_reached_ = false;
  std::optional<long> failed_step_;
  EchoRecord record_;
};

/// Twin run from t = 0 to params.t_end (or the options' stop thresholds).
EchoRecord run_echo(const SimParams& params, const HamiltonianSpec& unperturbed,
                    const HamiltonianSpec& perturbed, const EchoOptions& options = {});

/// Decay rate of an exponential F = exp(-rate t) fitted to ln F over the
/// first descent through [floor, ceiling].
struct RateFit {
  std::optional<double> rate;
  double r_squared = 0.0;
  std::size_t n = 0;
  double t_begin = 0.0;
  double t_end = 0.0;
  bool low_confidence = true;
};

RateFit fit_decay_rate(std::span<const double> times, std::span<const double> fidelity,
                       double ceiling = 0.9, double floor = 0.2);

/// Rate fitted to ln F over [0, t_stop] with the intercept pinned at F(0) = 1.
std::optional<double> initial_decay_rate(std::span<const double> times,
                                         std::span<const double> fidelity, double t_stop);

struct ScanPoint {
  double param = 0.0;
  CriticalTimeResult critical;
  std::optional<double> symmetry_tau;  // Sigma crossing of the same threshold
  RateFit rate;
  std::optional<double> short_rate;
  std::optional<double> departure_time;
  double horizon = 0.0;      // last simulated time
  bool extended = false;     // horizon was doubled to find the crossing
  std::optional<std::string> failure;
  EchoRecord record;         // empty unless the scan keeps curves
};

struct ScanSeries {
  std::string label;
  double h = 0.0;
  std::uint64_t seed = 0;
  std::vector<ScanPoint> points;
  std::optional<LinearFit> fit;  // tau_c against -ln(param), needs >= 3 crossings
};

struct FgrSummary {
  std::vector<double> rate_ratios;      // rate(eps_{k+1}) / rate(eps_k)
  std::vector<double> scaled_rates;     // rate / eps^2
  std::vector<double> collapse_levels;  // fidelity levels compared under eps^2 t
  // [level][eps]: eps^2 t at the first crossing of F = level
  std::vector<std::vector<std::optional<double>>> collapse_times;
  std::optional<double> collapse_spread;  // max relative deviation from the level mean
  std::vector<std::optional<double>> onset_times;  // first time F < 0.99
  std::vector<bool> energy_varies;
};

struct ScanResult {
  std::string kind;
  std::string axis;
  double threshold = 0.1;
  std::vector<ScanSeries> series;
  std::optional<FgrSummary> fgr;
  std::optional<double> reference_horizon;  // beta scan: time the beta=0 curve hits F=0.8

  bool any_failure() const noexcept;
};

/// Runs independent jobs on up to `workers` threads. Each job writes only its
/// own result slot, so output order never depends on completion order.
void run_parallel(std::size_t n_jobs, std::size_t workers,
                  const std::function<void(std::size_t)>& job);

struct TauScanOptions {
  double threshold = 0.1;
  std::size_t workers = 1;
  int n_min = StaticPerturbation::kDefaultMinMode;
  int n_max = StaticPerturbation::kDefaultMaxMode;
  bool track_symmetry = false;
};

/// Critical time against perturbation strength for a self-consistent H0.
/// One series per (h, seed); with several seeds a seed-averaged series per h
/// is appended (label "mean"). Uncrossed runs are continued once to twice
/// base.t_end before being recorded as uncrossed.
ScanResult scan_tau_c(const SimParams& base, const std::vector<double>& epsilons,
                      const std::vector<double>& h_values,
                      const std::vector<std::uint64_t>& seeds,
                      const TauScanOptions& options = {});

struct FgrOptions {
  double threshold = 0.1;
  std::size_t workers = 1;
  int n_modes = DensitySource::kDefaultModes;
  int n_min = StaticPerturbation::kDefaultMinMode;
  int n_max = StaticPerturbation::kDefaultMaxMode;
  bool zero_fermi = true;
  double fit_ceiling = 0.9;
  double fit_floor = 0.2;
  std::vector<double> collapse_levels = {0.8, 0.5, 0.3};
  bool keep_curves = false;
};

/// Fidelity decay under an external traveling-wave density (beta = 0).
/// Runs to base.t_end or until F reaches the threshold.
ScanResult scan_fgr(const SimParams& base, double delta, const std::vector<double>& epsilons,
                    std::uint64_t seed, const FgrOptions& options = {});

struct BetaOptions {
  double threshold = 0.1;
  std::size_t workers = 1;
  int n_modes = DensitySource::kDefaultModes;
  int n_min = StaticPerturbation::kDefaultMinMode;
  int n_max = StaticPerturbation::kDefaultMaxMode;
  bool zero_fermi = true;
  double short_time_level = 0.8;  // short-time window ends where beta = 0 reaches it
  double departure_factor = 10.0;
  double departure_ceiling = 0.99;
  bool keep_curves = true;
};

/// Mixed density rho_ext + beta (|psi|^2 - 1) for each beta. A beta = 0
/// reference is run when the list lacks one; it is reported as its own
/// series labelled "reference".
ScanResult scan_beta(const SimParams& base, double delta, double epsilon,
                     const std::vector<double>& betas, std::uint64_t seed,
                     const BetaOptions& options = {});

struct SpectrumRun {
  std::vector<double> times;
  std::vector<double> potential;
  Spectrum spectrum;
  std::optional<std::string> failure;
  std::optional<long> failed_step;
};

/// Unperturbed self-consistent evolution to params.t_end, spectrum of E_pot.
SpectrumRun run_spectrum(const SimParams& params, Window window = Window::kHann);

}  // namespace loschmidt
