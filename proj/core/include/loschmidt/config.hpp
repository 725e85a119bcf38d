#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loschmidt/core.hpp"
#include "loschmidt/diagnostics.hpp"
#include "loschmidt/error.hpp"
#include "loschmidt/fields.hpp"
#include "loschmidt/scenarios.hpp"

namespace loschmidt {

enum class Scenario { kEcho, kSpectrum, kTauScan, kFgrScan, kBetaScan };

const char* to_string(Scenario scenario) noexcept;
std::optional<Scenario> parse_scenario(std::string_view name) noexcept;

/// A configuration problem, tagged with the dotted key it concerns.
class ConfigError : public InvalidParameter {
 public:
  ConfigError(std::string key, const std::string& message)
      : InvalidParameter(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Every knob of a run. Defaults reproduce the self-consistent K0 = 2,
/// h = 0.05, epsilon = 1e-9 echo.
struct RunConfig {
  std::optional<Scenario> scenario;
  SimParams physics;

  DensityKind density = DensityKind::kSelfConsistent;
  double beta = 1.0;
  double delta = 0.0;
  int drive_modes = DensitySource::kDefaultModes;
  std::uint64_t drive_seed = 1;

  double epsilon = 1e-9;
  int n_min = StaticPerturbation::kDefaultMinMode;
  int n_max = StaticPerturbation::kDefaultMaxMode;
  std::uint64_t seed = 1;

  double threshold = 0.1;
  SymmetrySource symmetry_source = SymmetrySource::kPerturbed;
  bool record_energies = true;
  std::size_t workers = 1;

  Window window = Window::kHann;
  double band_max = 3.0;

  std::vector<double> tau_epsilons = {1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3};
  std::vector<double> tau_h_values = {0.05};
  std::vector<std::uint64_t> tau_seeds = {1};

  double fgr_delta = 0.5;
  std::vector<double> fgr_epsilons = {5e-4, 1e-3, 2e-3};
  bool fgr_zero_fermi = true;
  double fgr_fit_ceiling = 0.9;
  double fgr_fit_floor = 0.2;

  double beta_delta = 0.5;
  double beta_epsilon = 1e-3;
  std::vector<double> beta_values = {0.0, 0.01, 0.03, 0.1, 0.3};
  bool beta_zero_fermi = true;

  std::filesystem::path out_dir = "out";

  /// Hamiltonians of the echo scenario.
  HamiltonianSpec unperturbed_spec() const;
  HamiltonianSpec perturbed_spec() const;

  /// Dotted key -> canonical value text, for every registered key.
  std::map<std::string, std::string> effective() const;
};

/// One documented configuration key.
struct ConfigKey {
  std::string_view key;
  std::string_view description;
};

/// All keys in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Flat key/value text:
///   # comment
///   scenario = echo
///   [physics]
///   K0 = 2
///   numerics.dt = 5e-4
/// A "[section]" header prefixes the keys after it. Lists are comma
/// separated. Throws ConfigError with the line number on malformed input.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Flattens a JSON object into dotted keys (arrays become comma lists).
std::map<std::string, std::string> parse_json_values(std::string_view text);

/// Reads a file in either format (JSON when the first non-blank character
/// is '{').
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Resolves a command-line override name: a full dotted key, or a leaf
/// name such as "epsilon" or "K0" that identifies exactly one key.
std::string resolve_key(std::string_view name);

/// Applies values over the defaults and validates the result. Unknown keys,
/// malformed values and out-of-range values throw ConfigError naming the key.
RunConfig build_config(const std::map<std::string, std::string>& values);

/// File values, then overrides (override names go through resolve_key).
RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

/// Cross-field checks (grid aliasing, mode ranges); called by build_config.
void validate_config(const RunConfig& config);

}  // namespace loschmidt
