#pragma once

// Command-line front end: run configuration, command execution and report
// persistence. Everything except argv parsing and file output lives in
// execute(), so tests can run commands in-process.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvelab/closedforms.hpp"
#include "curvelab/finitetype.hpp"

namespace curvelab::cli {

inline constexpr const char* kSchema = "curvelab/1";

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,
  kExitIndeterminate = 2,
  kExitUsage = 3,
  kExitNumeric = 4,
};

struct RunConfig {
  std::string command;
  std::string surface = "sphere";
  std::map<std::string, double> params;
  std::optional<Domain> domain;
  Form form = Form::II;
  std::string field = "n";
  std::string target = "n";
  std::optional<SamplePoint> at;
  std::optional<int> grid;
  SamplingStrategy strategy = SamplingStrategy::jittered;
  int count = 64;
  std::uint64_t seed = 0;
  Thresholds thresholds;
  double k_min = 1e-8;
  int jet_order = kDefaultJetOrder;
  int workers = 1;
  std::string pipeline;
  std::string out_dir;
  std::string format = "both";
};

/// Key = value settings from a config file, applied on top of `base`.
/// Recognized keys mirror the long flag names with '-' replaced by '_'.
void apply_config_text(const std::string& text, RunConfig& base);
void apply_config_file(const std::string& path, RunConfig& base);

/// Output directory: the --out flag, else $CURVELAB_OUT, else the config
/// file's `out`, else ./curvelab-reports.
std::string resolve_out_dir(const std::optional<std::string>& flag,
                            const std::string& from_file);

nlohmann::json to_json(const RunConfig& config);

struct CsvTable {
  std::string name;  // file name, deterministic
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string render() const;
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string summary;
  std::vector<CsvTable> tables;
};

/// Runs a fully resolved configuration. Raises curvelab::Error on engine
/// failures; the report carries no timestamp.
CommandResult execute(const RunConfig& config);

/// Maps an error kind to exit code 3 (configuration) or 4 (everything else).
int exit_code_for(ErrorKind kind);

nlohmann::json error_json(const std::string& kind, const std::string& message);

/// Parses argv, runs the command, writes artifacts, prints the JSON report to
/// `out` and the one-line summary (or error JSON) to `err`.
int run_command(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err);

}  // namespace curvelab::cli
