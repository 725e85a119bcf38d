#include "loschmidt/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loschmidt/output.hpp"

namespace loschmidt {

namespace {

constexpr std::array<std::pair<Scenario, std::string_view>, 5> kScenarioNames{{
    {Scenario::kEcho, "echo"},
    {Scenario::kSpectrum, "spectrum"},
    {Scenario::kTauScan, "tauc-scan"},
    {Scenario::kFgrScan, "fgr-scan"},
    {Scenario::kBetaScan, "beta-scan"},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw ConfigError(key, "must be finite");
  return value;
}

template <typename Int>
Int parse_integer(const std::string& key, std::string_view text) {
  text = trim(text);
  Int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split_list(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<std::string_view> items;
  if (text.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    items.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<double> parse_double_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key, "list must not be empty");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key, std::string_view text) {
  std::vector<std::uint64_t> out;
  for (auto item : split_list(text)) out.push_back(parse_integer<std::uint64_t>(key, item));
  if (out.empty()) throw ConfigError(key, "list must not be empty");
  return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_shortest(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

template <typename Enum, std::size_t N>
Enum parse_choice(const std::string& key, std::string_view text,
                  const std::array<std::pair<Enum, std::string_view>, N>& names) {
  text = trim(text);
  for (const auto& [value, name] : names) {
    if (name == text) return value;
  }
  std::string allowed;
  for (const auto& [value, name] : names) {
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw ConfigError(key, "unknown value '" + std::string(text) + "' (allowed: " + allowed + ")");
}

template <typename Enum, std::size_t N>
std::string choice_name(Enum value, const std::array<std::pair<Enum, std::string_view>, N>& names) {
  for (const auto& [v, name] : names) {
    if (v == value) return std::string(name);
  }
  return {};
}

constexpr std::array<std::pair<PoissonSymbol, std::string_view>, 2> kSymbolNames{{
    {PoissonSymbol::kFiniteDifference, "finite-difference"},
    {PoissonSymbol::kExact, "exact"},
}};
constexpr std::array<std::pair<KineticMethod, std::string_view>, 3> kKineticNames{{
    {KineticMethod::kExponential, "exponential"},
    {KineticMethod::kCrankNicolson, "crank-nicolson"},
    {KineticMethod::kCrankNicolsonSpectral, "crank-nicolson-fft"},
}};
constexpr std::array<std::pair<SplitOrder, std::string_view>, 2> kSplitNames{{
    {SplitOrder::kPotentialKineticPotential, "vtv"},
    {SplitOrder::kKineticPotentialKinetic, "tvt"},
}};
constexpr std::array<std::pair<DensityKind, std::string_view>, 3> kDensityNames{{
    {DensityKind::kSelfConsistent, "self-consistent"},
    {DensityKind::kExternal, "external"},
    {DensityKind::kMixed, "mixed"},
}};
constexpr std::array<std::pair<SymmetrySource, std::string_view>, 2> kSymmetryNames{{
    {SymmetrySource::kPerturbed, "perturbed"},
    {SymmetrySource::kUnperturbed, "unperturbed"},
}};
constexpr std::array<std::pair<Window, std::string_view>, 2> kWindowNames{{
    {Window::kHann, "hann"},
    {Window::kNone, "none"},
}};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

struct Entry {
  ConfigKey doc;
  std::function<void(RunConfig&, const std::string& key, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

Entry real(std::string_view key, std::string_view doc, double RunConfig::*field,
           std::function<bool(double)> ok, const char* what) {
  return {{key, doc},
          [field, ok, what](RunConfig& c, const std::string& k, std::string_view v) {
            const double x = parse_double(k, v);
            require(ok(x), k, what);
            c.*field = x;
          },
          [field](const RunConfig& c) { return format_shortest(c.*field); }};
}

Entry physics_real(std::string_view key, std::string_view doc, double SimParams::*field,
                   std::function<bool(double)> ok, const char* what) {
  return {{key, doc},
          [field, ok, what](RunConfig& c, const std::string& k, std::string_view v) {
            const double x = parse_double(k, v);
            require(ok(x), k, what);
            c.physics.*field = x;
          },
          [field](const RunConfig& c) { return format_shortest(c.physics.*field); }};
}

Entry flag(std::string_view key, std::string_view doc, bool RunConfig::*field) {
  return {{key, doc},
          [field](RunConfig& c, const std::string& k, std::string_view v) {
            c.*field = parse_bool(k, v);
          },
          [field](const RunConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

Entry mode_index(std::string_view key, std::string_view doc, int RunConfig::*field) {
  return {{key, doc},
          [field](RunConfig& c, const std::string& k, std::string_view v) {
            const int x = parse_integer<int>(k, v);
            require(x >= 1, k, "must be >= 1");
            c.*field = x;
          },
          [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

Entry seed(std::string_view key, std::string_view doc, std::uint64_t RunConfig::*field) {
  return {{key, doc},
          [field](RunConfig& c, const std::string& k, std::string_view v) {
            c.*field = parse_integer<std::uint64_t>(k, v);
          },
          [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

Entry real_list(std::string_view key, std::string_view doc, std::vector<double> RunConfig::*field,
                std::function<bool(double)> ok, const char* what) {
  return {{key, doc},
          [field, ok, what](RunConfig& c, const std::string& k, std::string_view v) {
            auto xs = parse_double_list(k, v);
            for (double x : xs) require(ok(x), k, what);
            c.*field = std::move(xs);
          },
          [field](const RunConfig& c) { return join(c.*field); }};
}

template <typename Enum, std::size_t N>
Entry choice(std::string_view key, std::string_view doc, Enum RunConfig::*field,
             const std::array<std::pair<Enum, std::string_view>, N>& names) {
  return {{key, doc},
          [field, &names](RunConfig& c, const std::string& k, std::string_view v) {
            c.*field = parse_choice(k, v, names);
          },
          [field, &names](const RunConfig& c) { return choice_name(c.*field, names); }};
}

template <typename Enum, std::size_t N>
Entry physics_choice(std::string_view key, std::string_view doc, Enum SimParams::*field,
                     const std::array<std::pair<Enum, std::string_view>, N>& names) {
  return {{key, doc},
          [field, &names](RunConfig& c, const std::string& k, std::string_view v) {
            c.physics.*field = parse_choice(k, v, names);
          },
          [field, &names](const RunConfig& c) { return choice_name(c.physics.*field, names); }};
}

bool positive(double x) { return x > 0.0; }
bool non_negative(double x) { return x >= 0.0; }
bool unit_interval_closed(double x) { return x >= 0.0 && x <= 1.0; }
bool unit_interval_open(double x) { return x > 0.0 && x < 1.0; }

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    e.push_back({{"scenario", "echo | spectrum | tauc-scan | fgr-scan | beta-scan (required)"},
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   c.scenario = parse_choice(k, v, kScenarioNames);
                 },
                 [](const RunConfig& c) {
                   return c.scenario ? std::string(to_string(*c.scenario)) : std::string();
                 }});
    e.push_back(physics_real("physics.K0", "normalized wave number k0 V0 / omega_p [2]",
                             &SimParams::K0, positive, "must be > 0"));
    e.push_back(physics_real("physics.h", "normalized Planck constant [0.05]", &SimParams::h,
                             positive, "must be > 0"));
    e.push_back(physics_real("physics.vf_ratio", "Fermi velocity over V0 [0.1]",
                             &SimParams::vf_ratio, non_negative, "must be >= 0"));
    e.push_back(physics_real("physics.init_amplitude", "initial velocity amplitude A [1]",
                             &SimParams::init_amplitude, non_negative, "must be >= 0"));
    e.push_back({{"numerics.n_points", "grid points N, even and >= 16 [2048]"},
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   const auto n = parse_integer<std::size_t>(k, v);
                   require(n >= Grid::kMinPoints && n % 2 == 0, k, "must be even and >= 16");
                   c.physics.n_points = n;
                 },
                 [](const RunConfig& c) { return std::to_string(c.physics.n_points); }});
    e.push_back(physics_real("numerics.dt", "time step in 1/omega_p [5e-4]", &SimParams::dt,
                             positive, "must be > 0"));
    e.push_back(physics_real("numerics.t_end", "end time in 1/omega_p [200]", &SimParams::t_end,
                             non_negative, "must be >= 0"));
    e.push_back({{"numerics.sample_every", "steps between samples [10]"},
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   const auto n = parse_integer<std::size_t>(k, v);
                   require(n >= 1, k, "must be >= 1");
                   c.physics.sample_every = n;
                 },
                 [](const RunConfig& c) { return std::to_string(c.physics.sample_every); }});
    e.push_back(physics_choice("numerics.poisson_symbol", "finite-difference | exact",
                               &SimParams::poisson_symbol, kSymbolNames));
    e.push_back(physics_choice("numerics.kinetic",
                               "exponential | crank-nicolson | crank-nicolson-fft",
                               &SimParams::kinetic_method, kKineticNames));
    e.push_back(physics_choice("numerics.split_order", "vtv | tvt", &SimParams::split_order,
                               kSplitNames));
    e.push_back(choice("hamiltonian.density", "self-consistent | external | mixed",
                       &RunConfig::density, kDensityNames));
    e.push_back(real("hamiltonian.beta", "self-consistent weight of a mixed density [1]",
                     &RunConfig::beta, unit_interval_closed, "must lie in [0, 1]"));
    e.push_back(real("hamiltonian.delta", "external drive amplitude [0]", &RunConfig::delta,
                     non_negative, "must be >= 0"));
    e.push_back(mode_index("hamiltonian.n_modes", "external drive modes [25]",
                           &RunConfig::drive_modes));
    e.push_back(seed("hamiltonian.drive_seed", "drive phase seed of the echo scenario [1]",
                     &RunConfig::drive_seed));
    e.push_back(real("perturbation.epsilon", "static perturbation amplitude [1e-9]",
                     &RunConfig::epsilon, non_negative, "must be >= 0"));
    e.push_back(mode_index("perturbation.n_min", "lowest perturbation mode [1]", &RunConfig::n_min));
    e.push_back(mode_index("perturbation.n_max", "highest perturbation mode [20]",
                           &RunConfig::n_max));
    e.push_back(seed("perturbation.seed", "perturbation phase seed; scans also derive drive phases from it [1]",
                     &RunConfig::seed));
    e.push_back(real("analysis.threshold", "fidelity level defining tau_c [0.1]",
                     &RunConfig::threshold, unit_interval_open, "must lie in (0, 1)"));
    e.push_back(choice("analysis.symmetry_source", "perturbed | unperturbed",
                       &RunConfig::symmetry_source, kSymmetryNames));
    e.push_back(flag("analysis.energies", "record energy components in echo runs [true]",
                     &RunConfig::record_energies));
    e.push_back({{"run.workers", "concurrent scan points [1]"},
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   const auto n = parse_integer<std::size_t>(k, v);
                   require(n >= 1, k, "must be >= 1");
                   c.workers = n;
                 },
                 [](const RunConfig& c) { return std::to_string(c.workers); }});
    e.push_back(choice("spectrum.window", "hann | none", &RunConfig::window, kWindowNames));
    e.push_back(real("spectrum.band_max", "upper edge of the flatness band [3]",
                     &RunConfig::band_max, positive, "must be > 0"));
    e.push_back(real_list("tauc.epsilons", "perturbation amplitudes [1e-9,...,1e-3]",
                          &RunConfig::tau_epsilons, positive, "entries must be > 0"));
    e.push_back(real_list("tauc.h_values", "Planck constants scanned [0.05]",
                          &RunConfig::tau_h_values, positive, "entries must be > 0"));
    e.push_back({{"tauc.seeds", "perturbation seeds; several add a seed-averaged series [1]"},
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   c.tau_seeds = parse_seed_list(k, v);
                 },
                 [](const RunConfig& c) { return join(c.tau_seeds); }});
    e.push_back(real("fgr.delta", "external drive amplitude [0.5]", &RunConfig::fgr_delta,
                     positive, "must be > 0"));
    e.push_back(real_list("fgr.epsilons", "perturbation amplitudes [5e-4,1e-3,2e-3]",
                          &RunConfig::fgr_epsilons, positive, "entries must be > 0"));
    e.push_back(flag("fgr.zero_fermi", "drop the Fermi term [true]", &RunConfig::fgr_zero_fermi));
    e.push_back(real("fgr.fit_ceiling", "upper fidelity of the rate fit window [0.9]",
                     &RunConfig::fgr_fit_ceiling, unit_interval_open, "must lie in (0, 1)"));
    e.push_back(real("fgr.fit_floor", "lower fidelity of the rate fit window [0.2]",
                     &RunConfig::fgr_fit_floor, unit_interval_open, "must lie in (0, 1)"));
    e.push_back(real("beta.delta", "external drive amplitude [0.5]", &RunConfig::beta_delta,
                     positive, "must be > 0"));
    e.push_back(real("beta.epsilon", "perturbation amplitude [1e-3]", &RunConfig::beta_epsilon,
                     positive, "must be > 0"));
    e.push_back(real_list("beta.values", "self-consistent weights [0,0.01,0.03,0.1,0.3]",
                          &RunConfig::beta_values, unit_interval_closed,
                          "entries must lie in [0, 1]"));
    e.push_back(flag("beta.zero_fermi", "drop the Fermi term [true]", &RunConfig::beta_zero_fermi));
    e.push_back({{"output.dir", "output directory [out]"},
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   v = trim(v);
                   require(!v.empty(), k, "must not be empty");
                   c.out_dir = std::string(v);
                 },
                 [](const RunConfig& c) { return c.out_dir.generic_string(); }});
    return e;
  }();
  return entries;
}

const Entry* find_entry(std::string_view key) {
  for (const auto& e : registry()) {
    if (e.doc.key == key) return &e;
  }
  return nullptr;
}

void flatten(const nlohmann::json& node, const std::string& prefix,
             std::map<std::string, std::string>& out) {
  if (node.is_object()) {
    for (const auto& [name, child] : node.items()) {
      flatten(child, prefix.empty() ? name : prefix + "." + name, out);
    }
    return;
  }
  if (prefix.empty()) throw ConfigError("", "JSON configuration must be an object");
  if (node.is_array()) {
    std::string joined;
    for (const auto& item : node) {
      if (item.is_structured()) throw ConfigError(prefix, "lists must hold scalars");
      if (!joined.empty()) joined += ',';
      joined += item.is_string() ? item.get<std::string>() : item.dump();
    }
    out[prefix] = joined;
  } else if (node.is_string()) {
    out[prefix] = node.get<std::string>();
  } else if (node.is_null()) {
    throw ConfigError(prefix, "null is not a value");
  } else {
    out[prefix] = node.dump();
  }
}

}  // namespace

const char* to_string(Scenario scenario) noexcept {
  for (const auto& [value, name] : kScenarioNames) {
    if (value == scenario) return name.data();
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) noexcept {
  for (const auto& [value, n] : kScenarioNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& e : registry()) k.push_back(e.doc);
    return k;
  }();
  return keys;
}

HamiltonianSpec RunConfig::unperturbed_spec() const {
  HamiltonianSpec spec;
  switch (density) {
    case DensityKind::kSelfConsistent:
      spec.density = DensitySource::self_consistent();
      break;
    case DensityKind::kExternal:
      spec.density = DensitySource::external(delta, drive_modes, drive_seed);
      break;
    case DensityKind::kMixed:
      spec.density = DensitySource::mixed(beta, delta, drive_modes, drive_seed);
      break;
  }
  return spec;
}

HamiltonianSpec RunConfig::perturbed_spec() const {
  HamiltonianSpec spec = unperturbed_spec();
  spec.perturbation.emplace(physics.grid(), epsilon, n_min, n_max, seed);
  return spec;
}

std::map<std::string, std::string> RunConfig::effective() const {
  std::map<std::string, std::string> out;
  for (const auto& e : registry()) out[std::string(e.doc.key)] = e.get(*this);
  return out;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", where + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", where + ": expected 'key = value'");
    }
    const auto name = trim(line.substr(0, eq));
    if (name.empty()) throw ConfigError("", where + ": missing key");
    std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);
    if (out.count(key)) throw ConfigError(key, where + ": duplicate key");
    out[key] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

std::map<std::string, std::string> parse_json_values(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "JSON configuration must be an object");
  // Run metadata carries the complete configuration under this member.
  if (doc.contains("effective_config")) doc = doc["effective_config"];
  std::map<std::string, std::string> out;
  flatten(doc, "", out);
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && text[first] == '{') return parse_json_values(text);
    return parse_key_values(text);
  } catch (const ConfigError& e) {
    throw ConfigError(e.key(), path.string() + ": " + e.what());
  }
}

std::string resolve_key(std::string_view name) {
  if (find_entry(name)) return std::string(name);
  static const std::map<std::string, std::string, std::less<>> kAliases{
      {"epsilon", "perturbation.epsilon"},
      {"delta", "hamiltonian.delta"},
      {"N", "numerics.n_points"},
      {"out", "output.dir"},
  };
  if (const auto it = kAliases.find(name); it != kAliases.end()) return it->second;
  std::vector<std::string> matches;
  for (const auto& e : registry()) {
    const auto dot = e.doc.key.rfind('.');
    const auto leaf = dot == std::string_view::npos ? e.doc.key : e.doc.key.substr(dot + 1);
    if (leaf == name) matches.emplace_back(e.doc.key);
  }
  if (matches.size() == 1) return matches.front();
  if (matches.empty()) throw ConfigError(std::string(name), "unknown configuration key");
  std::string list;
  for (const auto& m : matches) list += (list.empty() ? "" : ", ") + m;
  throw ConfigError(std::string(name), "ambiguous key, use one of: " + list);
}

void validate_config(const RunConfig& c) {
  const std::size_t half = c.physics.n_points / 2;
  require(c.n_min <= c.n_max, "perturbation.n_max", "must be >= perturbation.n_min");
  require(static_cast<std::size_t>(c.n_max) < half, "perturbation.n_max",
          "must be below N/2 = " + std::to_string(half) + " (aliasing)");
  require(static_cast<std::size_t>(c.drive_modes) < half, "hamiltonian.n_modes",
          "must be below N/2 = " + std::to_string(half) + " (aliasing)");
  require(c.fgr_fit_floor < c.fgr_fit_ceiling, "fgr.fit_floor", "must be below fgr.fit_ceiling");
  if (c.density == DensityKind::kSelfConsistent) {
    require(c.delta == 0.0, "hamiltonian.delta",
            "must be 0 for a self-consistent density (use density = mixed)");
    require(c.beta == 1.0, "hamiltonian.beta",
            "must be 1 for a self-consistent density (use density = mixed)");
  }
  const double samples = c.physics.t_end / (c.physics.dt * static_cast<double>(c.physics.sample_every));
  require(samples <= 1e8, "numerics.t_end", "too many samples for the chosen dt");
  if (!c.scenario) throw ConfigError("scenario", "missing scenario");
  c.physics.validate();
}

RunConfig build_config(const std::map<std::string, std::string>& values) {
  RunConfig config;
  for (const auto& [key, value] : values) {
    const Entry* entry = find_entry(key);
    if (!entry) throw ConfigError(key, "unknown configuration key");
    entry->set(config, key, value);
  }
  validate_config(config);
  return config;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> values;
  if (path) values = read_config_file(*path);
  for (const auto& [name, value] : overrides) values[resolve_key(name)] = value;
  return build_config(values);
}

}  // namespace loschmidt
