#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbloch/config.hpp"

namespace cbloch {

// In-memory result of one experiment. Everything written to files comes
// from here except wall_time_s, which stays off disk so identical configs
// produce byte-identical outputs.
struct RunReport {
  std::string experiment;
  nlohmann::json config_echo;  // the parsed config
  std::string config_text;     // and its verbatim source
  std::string digest_hex;
  std::vector<std::string> columns;
  std::vector<nlohmann::json> rows;  // arrays aligned with columns
  nlohmann::json summary;
  bool assertions_passed = false;
  double wall_time_s = 0;
};

struct RunOptions {
  int workers = 0;  // 0 = number of processors
  std::optional<std::string> output_dir;             // overrides env and config
  std::optional<std::vector<std::string>> formats;   // overrides config
  std::optional<std::uint64_t> seed;                 // overrides config
};

// executes the experiment the config describes; throws on invalid setups,
// reports embedded-assertion outcomes in the returned summary
RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

// writes <experiment>-<digest8>.<ext> atomically (temp file + rename) for
// each requested format and returns the manifest; CSV numerics use 17
// significant digits, JSON carries the identical values
std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::vector<std::string>& formats,
                                               const std::filesystem::path& directory);

struct RunOutcome {
  RunReport report;
  std::vector<std::filesystem::path> files;
  int exit_code = 0;  // 0 pass, 1 assertion failure
};

// load_config + run_experiment + emit_report with the documented precedence
// for the output directory: --output flag, then CBLOCH_OUTPUT_DIR, then the
// config's output block
RunOutcome run_experiment_file(const std::filesystem::path& config_file,
                               const RunOptions& opts = {});

}  // namespace cbloch
