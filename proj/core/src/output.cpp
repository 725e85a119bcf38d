#include "loschmidt/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loschmidt/stochastic.hpp"
#include "loschmidt/version.hpp"

namespace loschmidt {

namespace {

using Json = nlohmann::ordered_json;

std::string to_chars_string(double value, std::optional<int> precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = precision
                       ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general,
                                       *precision)
                       : std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void append_field(std::string& line, std::optional<double> value) {
  line += ',';
  if (value && std::isfinite(*value)) line += format_number(*value);
}

Json optional_number(std::optional<double> value) {
  if (value && std::isfinite(*value)) return *value;
  return nullptr;
}

Json crossings_json(const CriticalTimeResult& result) {
  Json list = Json::array();
  for (const auto& c : result.crossings) {
    list.push_back({{"t", c.t}, {"direction", c.downward ? "down" : "up"}});
  }
  return list;
}

Json critical_json(const CriticalTimeResult& result) {
  return {{"threshold", result.threshold},
          {"crossed", result.crossed},
          {"tau_c", optional_number(result.tau_c)},
          {"crossings", crossings_json(result)}};
}

Json fit_json(const std::optional<LinearFit>& fit) {
  if (!fit) return nullptr;
  return {{"slope", fit->slope},
          {"intercept", fit->intercept},
          {"r_squared", fit->r_squared},
          {"rms_residual", fit->rms_residual},
          {"points", fit->n}};
}

Json base_metadata(const RunConfig& config) {
  const Grid grid = config.physics.grid();
  Json meta;
  meta["tool"] = "loschmidt";
  meta["version"] = kVersion;
  meta["platform"] = platform_description();
  meta["scenario"] = config.scenario ? to_string(*config.scenario) : "";
  Json effective = Json::object();
  for (const auto& [key, value] : config.effective()) effective[key] = value;
  meta["effective_config"] = std::move(effective);
  meta["seeds"] = {
      {"perturbation", config.seed},
      {"drive", config.drive_seed},
      {"drive_stream_offset", kDriveSeedOffset},
      {"generator", "splitmix64, phase = 2 pi * (top 53 bits) * 2^-53"},
  };
  meta["grid"] = {{"n_points", grid.size()},
                  {"spacing", grid.spacing()},
                  {"x_min", grid.node(0)},
                  {"box_length", 2.0 * kPi}};
  meta["units"] = {{"time", "1/omega_p"},
                   {"position", "1/k0"},
                   {"energy", "m V0^2 per particle"}};
  meta["fidelity_normalization"] =
      "F = |(1/N) sum_i conj(psi0_i) psi_i|^2, i.e. the box-averaged overlap (1/L) int dx, so F(0) = 1";
  meta["symmetry_definition"] =
      "Sigma = |(2/L) int_0^{L/2} psi(x) conj(psi(-x)) dx|^2, trapezoid rule on the grid";
  return meta;
}

std::string dump(const Json& meta) { return meta.dump(2) + "\n"; }

std::string gnuplot_header(const std::string& title) {
  return "# gnuplot -p <this file>\n"
         "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set title '" + title + "'\n";
}

std::string echo_plot(const std::string& csv) {
  std::string s = gnuplot_header("fidelity and symmetry");
  s += "set xlabel 't [1/omega_p]'\n";
  s += "set yrange [0:1.05]\n";
  s += "plot '" + csv + "' using 1:2 with lines title 'F', \\\n";
  s += "     '' using 1:3 with lines title 'Sigma'\n";
  return s;
}

std::filesystem::path prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

Json echo_summary(const EchoRecord& record, double threshold) {
  const auto f = detect_critical_time(record, threshold);
  const auto s = detect_crossing(record.times, record.symmetry, threshold);
  const auto f90 = detect_crossing(record.times, record.fidelity, 0.9);
  Json out;
  out["samples"] = record.size();
  out["fidelity"] = critical_json(f);
  out["symmetry"] = critical_json(s);
  out["fidelity_0_9_time"] = optional_number(f90.tau_c);
  if (f.tau_c && f90.tau_c) {
    out["drop_width"] = *f.tau_c - *f90.tau_c;
  } else {
    out["drop_width"] = nullptr;
  }
  out["failure"] = record.failure ? Json(*record.failure) : Json(nullptr);
  return out;
}

}  // namespace

std::string format_number(double value) { return to_chars_string(value, 17); }

std::string format_shortest(double value) { return to_chars_string(value, std::nullopt); }

std::string echo_csv(const EchoRecord& record) {
  std::string out = kEchoHeader;
  out += '\n';
  const bool energies = record.energies.size() == record.size();
  for (std::size_t k = 0; k < record.size(); ++k) {
    std::string line = format_number(record.times[k]);
    append_field(line, record.fidelity[k]);
    append_field(line, record.symmetry[k]);
    if (energies) {
      const auto& e = record.energies[k];
      append_field(line, e.kinetic);
      append_field(line, e.potential);
      append_field(line, e.fermi);
      append_field(line, e.perturbation);
      append_field(line, e.total);
    } else {
      line += ",,,,,";
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::string out = kSpectrumHeader;
  out += '\n';
  for (std::size_t k = 0; k < spectrum.omega.size(); ++k) {
    out += format_number(spectrum.omega[k]);
    append_field(out, spectrum.power[k]);
    out += '\n';
  }
  return out;
}

std::string scan_csv(const ScanSeries& series) {
  std::string out = kScanHeader;
  out += '\n';
  for (const auto& p : series.points) {
    std::string line = format_number(p.param);
    append_field(line, p.critical.tau_c);
    line += p.critical.crossed ? ",1" : ",0";
    append_field(line, p.rate.rate);
    append_field(line, p.rate.rate ? std::optional<double>(p.rate.r_squared) : std::nullopt);
    out += line;
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    if (line.empty()) continue;
    if (fields.size() != table.header.size()) {
      throw OutputError("CSV row " + std::to_string(table.rows.size() + 1) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(table.header.size()));
    }
    std::vector<std::optional<double>> row;
    for (const auto& f : fields) {
      if (f.empty()) {
        row.emplace_back();
        continue;
      }
      double v = 0.0;
      const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || end != f.data() + f.size()) {
        throw OutputError("CSV field '" + f + "' is not a number");
      }
      row.emplace_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_csv(buffer.str());
  } catch (const OutputError& e) {
    throw OutputError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

std::string platform_description() {
  std::string os = "unknown-os";
#if defined(__linux__)
  os = "linux";
#elif defined(__APPLE__)
  os = "darwin";
#elif defined(_WIN32)
  os = "windows";
#endif
  std::string arch = "unknown-arch";
#if defined(__x86_64__) || defined(_M_X64)
  arch = "x86_64";
#elif defined(__aarch64__) || defined(_M_ARM64)
  arch = "aarch64";
#endif
  std::string compiler = "unknown-compiler";
#if defined(__clang__)
  compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  compiler = "gcc " __VERSION__;
#elif defined(_MSC_VER)
  compiler = "msvc " + std::to_string(_MSC_VER);
#endif
  return os + "-" + arch + " " + compiler + "; fft: fftw3";
}

WrittenFiles write_echo(const RunConfig& config, const EchoRecord& record,
                        const std::filesystem::path& dir) {
  prepare_dir(dir);
  WrittenFiles files;
  const auto csv = dir / "echo.csv";
  write_text(csv, echo_csv(record));
  Json meta = base_metadata(config);
  meta["data"] = {{"file", "echo.csv"}, {"schema", kEchoHeader}};
  meta["symmetry_source"] = to_string(config.symmetry_source);
  meta["energies_of"] = "perturbed trajectory";
  meta["result"] = echo_summary(record, config.threshold);
  const auto json = dir / "echo.json";
  write_text(json, dump(meta));
  const auto plot = dir / "echo.gp";
  write_text(plot, echo_plot("echo.csv"));
  files.paths = {csv, json, plot};
  return files;
}

WrittenFiles write_spectrum(const RunConfig& config, const SpectrumRun& run,
                            const std::filesystem::path& dir) {
  prepare_dir(dir);
  WrittenFiles files;
  const auto csv = dir / "spectrum.csv";
  write_text(csv, spectrum_csv(run.spectrum));
  Json meta = base_metadata(config);
  meta["data"] = {{"file", "spectrum.csv"}, {"schema", kSpectrumHeader}};
  Json result;
  result["window"] = to_string(run.spectrum.window);
  result["samples"] = run.times.size();
  result["resolution"] = run.spectrum.resolution;
  if (run.spectrum.omega.size() >= 3) {
    result["peak_omega"] = peak_frequency(run.spectrum, run.spectrum.resolution);
    result["band"] = {0.0, config.band_max};
    result["max_bin_fraction"] = max_bin_fraction(run.spectrum, 0.0, config.band_max);
  } else {
    result["peak_omega"] = nullptr;
    result["max_bin_fraction"] = nullptr;
  }
  result["failure"] = run.failure ? Json(*run.failure) : Json(nullptr);
  meta["result"] = std::move(result);
  const auto json = dir / "spectrum.json";
  write_text(json, dump(meta));
  std::string s = gnuplot_header("potential energy spectrum");
  s += "set xlabel 'omega / omega_p'\nset ylabel 'power'\nset logscale y\n";
  s += "set xrange [0:" + format_shortest(2.0 * config.band_max) + "]\n";
  s += "plot 'spectrum.csv' using 1:2 with lines title 'E_pot'\n";
  const auto plot = dir / "spectrum.gp";
  write_text(plot, s);
  files.paths = {csv, json, plot};
  return files;
}

WrittenFiles write_scan(const RunConfig& config, const ScanResult& result,
                        const std::filesystem::path& dir) {
  prepare_dir(dir);
  WrittenFiles files;
  const std::string stem = result.kind;
  Json meta = base_metadata(config);
  meta["axis"] = result.axis;
  meta["threshold"] = result.threshold;
  Json series_list = Json::array();
  std::string plot = gnuplot_header(result.kind);
  const bool log_axis = result.axis == "epsilon";
  if (log_axis) plot += "set logscale x\n";
  plot += "set xlabel '" + result.axis + "'\n";
  plot += result.kind == "fgr-scan" ? "set ylabel 'rate'\n" : "set ylabel 'tau_c'\n";
  std::string plot_cmd;

  for (const auto& s : result.series) {
    const std::string csv_name = stem + "_" + s.label + ".csv";
    const auto csv = dir / csv_name;
    write_text(csv, scan_csv(s));
    files.paths.push_back(csv);
    Json sj;
    sj["label"] = s.label;
    sj["file"] = csv_name;
    sj["schema"] = kScanHeader;
    sj["h"] = s.h;
    sj["seed"] = s.seed;
    sj["tau_c_fit"] = fit_json(s.fit);
    if (s.fit) sj["t0"] = s.fit->slope;
    Json points = Json::array();
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      const auto& p = s.points[k];
      Json pj;
      pj["param"] = p.param;
      pj["critical"] = critical_json(p.critical);
      pj["symmetry_tau"] = optional_number(p.symmetry_tau);
      pj["rate"] = {{"value", optional_number(p.rate.rate)},
                    {"r_squared", p.rate.rate ? Json(p.rate.r_squared) : Json(nullptr)},
                    {"points", p.rate.n},
                    {"t_begin", p.rate.t_begin},
                    {"t_end", p.rate.t_end},
                    {"low_confidence", p.rate.low_confidence}};
      if (result.kind == "beta-scan") {
        pj["short_rate"] = optional_number(p.short_rate);
        pj["departure_time"] = optional_number(p.departure_time);
      }
      pj["horizon"] = p.horizon;
      pj["extended"] = p.extended;
      pj["failure"] = p.failure ? Json(*p.failure) : Json(nullptr);
      if (p.record.size() > 0) {
        const std::string curve = stem + "_" + s.label + "_" + std::to_string(k) + ".csv";
        write_text(dir / curve, echo_csv(p.record));
        files.paths.push_back(dir / curve);
        pj["curve"] = curve;
      }
      points.push_back(std::move(pj));
    }
    sj["points"] = std::move(points);
    series_list.push_back(std::move(sj));
    const std::string column = result.kind == "fgr-scan" ? "4" : "2";
    plot_cmd += (plot_cmd.empty() ? "plot " : ", \\\n     ") + std::string("'") + csv_name +
                "' using 1:" + column + " with linespoints title '" + s.label + "'";
  }
  meta["series"] = std::move(series_list);
  if (result.fgr) {
    const auto& f = *result.fgr;
    Json fj;
    fj["fit_window"] = {config.fgr_fit_ceiling, config.fgr_fit_floor};
    fj["rate_ratios"] = f.rate_ratios;
    fj["rate_over_eps2"] = f.scaled_rates;
    fj["collapse_levels"] = f.collapse_levels;
    Json times = Json::array();
    for (const auto& row : f.collapse_times) {
      Json r = Json::array();
      for (const auto& t : row) r.push_back(optional_number(t));
      times.push_back(std::move(r));
    }
    fj["collapse_eps2_t"] = std::move(times);
    fj["collapse_spread"] = optional_number(f.collapse_spread);
    Json onset = Json::array();
    for (const auto& t : f.onset_times) onset.push_back(optional_number(t));
    fj["onset_time_f_0_99"] = std::move(onset);
    fj["total_energy_varies"] = f.energy_varies;
    meta["fgr"] = std::move(fj);
  }
  if (result.kind == "beta-scan") {
    meta["short_time_window_end"] = optional_number(result.reference_horizon);
  }
  if (result.kind == "fgr-scan") {
    plot += "set logscale y\n";
  }
  plot += plot_cmd + "\n";
  const auto json = dir / (stem + ".json");
  write_text(json, dump(meta));
  const auto gp = dir / (stem + ".gp");
  write_text(gp, plot);
  files.paths.push_back(json);
  files.paths.push_back(gp);
  return files;
}

}  // namespace loschmidt

namespace loschmidt {

namespace {

std::string describe(const char* name, std::optional<double> value) {
  return std::string(name) + " = " + (value ? format_shortest(*value) : std::string("none"));
}

}  // namespace

RunOutcome execute(const RunConfig& config) {
  validate_config(config);
  RunOutcome outcome;
  switch (*config.scenario) {
    case Scenario::kEcho: {
      EchoOptions options;
      options.record_energies = config.record_energies;
      options.symmetry_source = config.symmetry_source;
      const EchoRecord record = run_echo(config.physics, config.unperturbed_spec(),
                                         config.perturbed_spec(), options);
      outcome.files = write_echo(config, record, config.out_dir);
      outcome.blew_up = record.failure.has_value();
      const auto f = detect_critical_time(record, config.threshold);
      const auto s = detect_crossing(record.times, record.symmetry, config.threshold);
      outcome.summary.push_back(describe("tau_c(F)", f.tau_c));
      outcome.summary.push_back(describe("tau_c(Sigma)", s.tau_c));
      if (record.failure) outcome.summary.push_back(*record.failure);
      break;
    }
    case Scenario::kSpectrum: {
      const SpectrumRun run = run_spectrum(config.physics, config.window);
      outcome.files = write_spectrum(config, run, config.out_dir);
      outcome.blew_up = run.failure.has_value();
      if (run.spectrum.omega.size() >= 3) {
        outcome.summary.push_back(
            describe("peak omega", peak_frequency(run.spectrum, run.spectrum.resolution)));
        outcome.summary.push_back(describe(
            "max bin fraction", max_bin_fraction(run.spectrum, 0.0, config.band_max)));
      }
      if (run.failure) outcome.summary.push_back(*run.failure);
      break;
    }
    case Scenario::kTauScan: {
      TauScanOptions options;
      options.threshold = config.threshold;
      options.workers = config.workers;
      options.n_min = config.n_min;
      options.n_max = config.n_max;
      const ScanResult result = scan_tau_c(config.physics, config.tau_epsilons,
                                           config.tau_h_values, config.tau_seeds, options);
      outcome.files = write_scan(config, result, config.out_dir);
      outcome.blew_up = result.any_failure();
      for (const auto& s : result.series) {
        outcome.summary.push_back(s.label + ": " +
                                  describe("t0", s.fit ? std::optional(s.fit->slope) : std::nullopt) +
                                  ", " +
                                  describe("R^2", s.fit ? std::optional(s.fit->r_squared)
                                                        : std::nullopt));
      }
      break;
    }
    case Scenario::kFgrScan: {
      FgrOptions options;
      options.threshold = config.threshold;
      options.workers = config.workers;
      options.n_modes = config.drive_modes;
      options.n_min = config.n_min;
      options.n_max = config.n_max;
      options.zero_fermi = config.fgr_zero_fermi;
      options.fit_ceiling = config.fgr_fit_ceiling;
      options.fit_floor = config.fgr_fit_floor;
      options.keep_curves = true;
      const ScanResult result =
          scan_fgr(config.physics, config.fgr_delta, config.fgr_epsilons, config.seed, options);
      outcome.files = write_scan(config, result, config.out_dir);
      outcome.blew_up = result.any_failure();
      for (const auto& p : result.series.front().points) {
        outcome.summary.push_back("epsilon " + format_shortest(p.param) + ": " +
                                  describe("rate", p.rate.rate));
      }
      if (result.fgr) {
        outcome.summary.push_back(describe("collapse spread", result.fgr->collapse_spread));
      }
      break;
    }
    case Scenario::kBetaScan: {
      BetaOptions options;
      options.threshold = config.threshold;
      options.workers = config.workers;
      options.n_modes = config.drive_modes;
      options.n_min = config.n_min;
      options.n_max = config.n_max;
      options.zero_fermi = config.beta_zero_fermi;
      const ScanResult result = scan_beta(config.physics, config.beta_delta, config.beta_epsilon,
                                          config.beta_values, config.seed, options);
      outcome.files = write_scan(config, result, config.out_dir);
      outcome.blew_up = result.any_failure();
      for (const auto& p : result.series.front().points) {
        outcome.summary.push_back("beta " + format_shortest(p.param) + ": " +
                                  describe("t(F=threshold)", p.critical.tau_c) + ", " +
                                  describe("departure", p.departure_time));
      }
      break;
    }
  }
  return outcome;
}

}  // namespace loschmidt
