#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbloch/evolution.hpp"
#include "cbloch/types.hpp"
#include "cbloch/verify.hpp"

namespace cbloch {

// malformed config text: not valid JSON, or an unreadable file
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr char kConfigSchema[] = "cbloch-config/1";
inline constexpr char kReportSchema[] = "cbloch-report/1";

struct PathBlock {
  std::string family;
  std::map<std::string, double> params;
};

struct SweepBlock {
  std::string parameter;  // only "dphi1" is sweepable
  std::vector<double> grid;
};

struct OutputBlock {
  std::string directory = ".";
  std::vector<std::string> formats = {"csv", "json"};
};

// target rotation for robustness sweeps
struct GateBlock {
  double theta = pi / 2;
  double phi = 0;
  double alpha = pi / 2;
  double theta0_ref = pi / 2;
};

struct CzBlock {
  double u = 1.0;
  double big_theta = pi;
  std::string mode = "idealized";  // "idealized" or "full"
  bool abstract_gates = false;
};

// A validated experiment description. Blocks that the chosen experiment
// cannot use are rejected at parse time rather than silently ignored.
struct ExperimentConfig {
  std::string experiment;  // phase | gate | robustness | czgate | verify-all
  std::uint64_t seed = kDefaultSeed;
  std::optional<PathBlock> path;
  IntegratorConfig integrator;
  std::optional<SweepBlock> sweep;
  OutputBlock output;
  GateBlock gate;
  CzBlock cz;
  std::string raw_text;    // the config file verbatim
  std::string digest_hex;  // 16 hex digits of fnv1a64(raw_text)
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

// parses and fully validates config text; referenced path families are
// instantiated via make_path before this returns
ExperimentConfig parse_config_text(const std::string& text);

// reads the file and delegates to parse_config_text
ExperimentConfig load_config(const std::filesystem::path& file);

}  // namespace cbloch
