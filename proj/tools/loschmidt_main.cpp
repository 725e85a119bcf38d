#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loschmidt/config.hpp"
#include "loschmidt/error.hpp"
#include "loschmidt/output.hpp"
#include "loschmidt/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBlowUp = 3;

// Unrecognized "--key=value" or "--key value" tokens become config overrides.
std::vector<std::pair<std::string, std::string>> collect_overrides(
    const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& token = extras[i];
    if (token.rfind("--", 0) != 0 || token.size() <= 2) {
      throw loschmidt::ConfigError("", "unexpected argument '" + token + "'");
    }
    const std::string body = token.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      overrides.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < extras.size()) {
      overrides.emplace_back(body, extras[++i]);
    } else {
      throw loschmidt::ConfigError(body, "missing value");
    }
  }
  return overrides;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loschmidt echo in a self-consistent quantum electron gas"};
  app.allow_extras();
  app.set_version_flag("--version", std::string(loschmidt::kVersion));

  std::string scenario;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  bool list_keys = false;
  bool quiet = false;
  app.add_option("scenario", scenario, "echo | spectrum | tauc-scan | fgr-scan | beta-scan");
  app.add_option("--config,-c", config_path, "configuration file (key = value or JSON)");
  app.add_option("--out,-o", out_dir, "output directory");
  app.add_flag("--list-keys", list_keys, "print every configuration key and exit");
  app.add_flag("--quiet,-q", quiet, "suppress the result summary");
  app.footer("Any other --key=value pair overrides a configuration key, e.g. --epsilon=1e-6 "
             "or --numerics.dt=2.5e-4.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (list_keys) {
    for (const auto& key : loschmidt::config_keys()) {
      std::cout << key.key << "\t" << key.description << "\n";
    }
    return kExitOk;
  }

  try {
    auto overrides = collect_overrides(app.remaining());
    if (!scenario.empty()) overrides.emplace_back("scenario", scenario);
    if (out_dir) overrides.emplace_back("output.dir", *out_dir);
    std::optional<std::filesystem::path> path;
    if (config_path) path = *config_path;
    const loschmidt::RunConfig config = loschmidt::parse_config(path, overrides);

    const loschmidt::RunOutcome outcome = loschmidt::execute(config);
    if (!quiet) {
      for (const auto& line : outcome.summary) std::cout << line << "\n";
      for (const auto& file : outcome.files.paths) std::cout << "wrote " << file.string() << "\n";
    }
    if (outcome.blew_up) {
      std::cerr << "loschmidt: numerical blow-up; partial results written\n";
      return kExitBlowUp;
    }
    return kExitOk;
  } catch (const loschmidt::BlowUpError& e) {
    std::cerr << "loschmidt: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const loschmidt::InvalidParameter& e) {
    std::cerr << "loschmidt: invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const loschmidt::InvalidExperiment& e) {
    std::cerr << "loschmidt: invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "loschmidt: " << e.what() << "\n";
    return kExitFailure;
  }
}
