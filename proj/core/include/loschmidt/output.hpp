#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loschmidt/config.hpp"
#include "loschmidt/diagnostics.hpp"
#include "loschmidt/error.hpp"
#include "loschmidt/scenarios.hpp"

namespace loschmidt {

/// File-system failure while writing or reading results.
class OutputError : public Error {
 public:
  using Error::Error;
};

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double value);
/// Shortest text that round-trips (used for configuration echoes).
std::string format_shortest(double value);

inline constexpr const char* kEchoHeader = "t,fidelity,symmetry,e_kin,e_pot,e_fermi,e_pert,e_total";
inline constexpr const char* kSpectrumHeader = "omega,power";
inline constexpr const char* kScanHeader = "param,tau_c,crossed,rate,fit_quality";

/// CSV text; absent values are written as empty fields.
std::string echo_csv(const EchoRecord& record);
std::string spectrum_csv(const Spectrum& spectrum);
std::string scan_csv(const ScanSeries& series);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes `content` to `path` byte for byte; throws OutputError with the path.
void write_text(const std::filesystem::path& path, const std::string& content);

struct WrittenFiles {
  std::vector<std::filesystem::path> paths;
};

/// Each writer emits CSV data, a JSON metadata file and a gnuplot script
/// into `dir` (created if needed). Nothing time- or host-dependent beyond
/// the compiler and platform identifiers is recorded.
WrittenFiles write_echo(const RunConfig& config, const EchoRecord& record,
                        const std::filesystem::path& dir);
WrittenFiles write_spectrum(const RunConfig& config, const SpectrumRun& run,
                            const std::filesystem::path& dir);
WrittenFiles write_scan(const RunConfig& config, const ScanResult& result,
                        const std::filesystem::path& dir);

struct RunOutcome {
  WrittenFiles files;
  bool blew_up = false;
  std::vector<std::string> summary;  // human-readable result lines
};

/// Runs the configured scenario and writes its outputs to config.out_dir.
/// A blow-up still writes the partial series and sets blew_up.
RunOutcome execute(const RunConfig& config);

/// Identifiers of the build: library version, compiler, OS and architecture.
std::string platform_description();

}  // namespace loschmidt
