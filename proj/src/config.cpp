#include "cbloch/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cbloch/errors.hpp"
#include "cbloch/paths.hpp"

namespace cbloch {
namespace {

using nlohmann::json;

const std::set<std::string> kExperiments = {"phase", "gate", "robustness", "czgate",
                                            "verify-all"};

void reject_unknown_keys(const json& node, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : node.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ValidationError("config: unknown key '" + key + "' in " + where);
  }
}

const json* field(const json& node, const std::string& key) {
  auto it = node.find(key);
  return it == node.end() ? nullptr : &*it;
}

double number_field(const json& node, const std::string& key, double fallback) {
  const json* v = field(node, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ValidationError("config: '" + key + "' must be a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw ValidationError("config: '" + key + "' must be finite");
  return d;
}

std::string string_field(const json& node, const std::string& key, const std::string& fallback) {
  const json* v = field(node, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ValidationError("config: '" + key + "' must be a string");
  return v->get<std::string>();
}

PathBlock parse_path_block(const json& node) {
  if (!node.is_object()) throw ValidationError("config: 'path' must be an object");
  reject_unknown_keys(node, {"family", "params"}, "path");
  PathBlock block;
  const json* family = field(node, "family");
  if (!family || !family->is_string())
    throw ValidationError("config: path block needs a string 'family'");
  block.family = family->get<std::string>();
  if (const json* params = field(node, "params")) {
    if (!params->is_object()) throw ValidationError("config: 'path.params' must be an object");
    for (const auto& [key, value] : params->items()) {
      if (!value.is_number())
        throw ValidationError("config: path parameter '" + key + "' must be a number");
      block.params[key] = value.get<double>();
    }
  }
  make_path(block.family, block.params);  // validates family and ranges up front
  return block;
}

SweepBlock parse_sweep_block(const json& node) {
  if (!node.is_object()) throw ValidationError("config: 'sweep' must be an object");
  reject_unknown_keys(node, {"parameter", "grid"}, "sweep");
  SweepBlock block;
  block.parameter = string_field(node, "parameter", "dphi1");
  if (block.parameter != "dphi1")
    throw ValidationError("config: only 'dphi1' can be swept, got '" + block.parameter + "'");
  const json* grid = field(node, "grid");
  if (!grid || !grid->is_array() || grid->empty())
    throw ValidationError("config: sweep grid must be a non-empty array");
  for (const auto& v : *grid) {
    if (!v.is_number() || !std::isfinite(v.get<double>()))
      throw ValidationError("config: sweep grid entries must be finite numbers");
    block.grid.push_back(v.get<double>());
  }
  return block;
}

OutputBlock parse_output_block(const json& node) {
  if (!node.is_object()) throw ValidationError("config: 'output' must be an object");
  reject_unknown_keys(node, {"directory", "formats"}, "output");
  OutputBlock block;
  block.directory = string_field(node, "directory", block.directory);
  if (block.directory.empty()) throw ValidationError("config: output directory must be non-empty");
  if (const json* formats = field(node, "formats")) {
    if (!formats->is_array() || formats->empty())
      throw ValidationError("config: 'output.formats' must be a non-empty array");
    block.formats.clear();
    for (const auto& f : *formats) {
      if (!f.is_string() || (f != "csv" && f != "json"))
        throw ValidationError("config: output formats are 'csv' and 'json'");
      const std::string name = f.get<std::string>();
      if (std::find(block.formats.begin(), block.formats.end(), name) != block.formats.end())
        throw ValidationError("config: duplicate output format '" + name + "'");
      block.formats.push_back(name);
    }
  }
  return block;
}

IntegratorConfig parse_integrator_block(const json& node) {
  if (!node.is_object()) throw ValidationError("config: 'integrator' must be an object");
  reject_unknown_keys(node, {"steps", "checkpoint_stride", "scheme"}, "integrator");
  IntegratorConfig cfg;
  const double steps = number_field(node, "steps", cfg.steps);
  if (steps < 10 || steps != std::floor(steps))
    throw ValidationError("config: integrator steps must be an integer >= 10");
  cfg.steps = static_cast<int>(steps);
  const double stride = number_field(node, "checkpoint_stride", cfg.checkpoint_stride);
  if (stride < 1 || stride != std::floor(stride))
    throw ValidationError("config: checkpoint stride must be an integer >= 1");
  cfg.checkpoint_stride = static_cast<int>(stride);
  cfg.scheme = string_field(node, "scheme", cfg.scheme);
  if (cfg.scheme != "rk4-fixed")
    throw ValidationError("config: unknown integrator scheme '" + cfg.scheme + "'");
  return cfg;
}

GateBlock parse_gate_block(const json& node) {
  if (!node.is_object()) throw ValidationError("config: 'gate' must be an object");
  reject_unknown_keys(node, {"theta", "phi", "alpha", "theta0_ref"}, "gate");
  GateBlock block;
  block.theta = number_field(node, "theta", block.theta);
  block.phi = number_field(node, "phi", block.phi);
  block.alpha = number_field(node, "alpha", block.alpha);
  block.theta0_ref = number_field(node, "theta0_ref", block.theta0_ref);
  return block;
}

CzBlock parse_cz_block(const json& node) {
  if (!node.is_object()) throw ValidationError("config: 'czgate' must be an object");
  reject_unknown_keys(node, {"u", "big_theta", "mode", "abstract_gates"}, "czgate");
  CzBlock block;
  block.u = number_field(node, "u", block.u);
  if (block.u <= 0) throw ValidationError("config: czgate u must be positive");
  block.big_theta = number_field(node, "big_theta", block.big_theta);
  if (block.big_theta < 0) throw ValidationError("config: czgate big_theta must be non-negative");
  block.mode = string_field(node, "mode", block.mode);
  if (block.mode != "idealized" && block.mode != "full")
    throw ValidationError("config: czgate mode is 'idealized' or 'full'");
  if (const json* flag = field(node, "abstract_gates")) {
    if (!flag->is_boolean())
      throw ValidationError("config: 'abstract_gates' must be a boolean");
    block.abstract_gates = flag->get<bool>();
  }
  if (block.abstract_gates && block.mode == "full")
    throw ValidationError("config: abstract gates require idealized mode");
  return block;
}

void require_block(bool present, const std::string& experiment, const std::string& block) {
  if (!present)
    throw ValidationError("config: experiment '" + experiment + "' needs a '" + block +
                          "' block");
}

void forbid_block(bool present, const std::string& experiment, const std::string& block) {
  if (present)
    throw ValidationError("config: experiment '" + experiment + "' does not use a '" + block +
                          "' block");
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string digest_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config: top level must be an object");

  reject_unknown_keys(
      doc, {"schema", "experiment", "seed", "path", "integrator", "sweep", "output", "gate",
            "czgate"},
      "the top level");

  const std::string schema = string_field(doc, "schema", "");
  if (schema.empty()) throw ValidationError("config: missing 'schema' field");
  if (schema != kConfigSchema)
    throw ValidationError("config: unsupported schema '" + schema + "', expected '" +
                          kConfigSchema + "'");

  ExperimentConfig cfg;
  cfg.raw_text = text;
  cfg.digest_hex = digest_hex(text);

  cfg.experiment = string_field(doc, "experiment", "");
  if (!kExperiments.count(cfg.experiment))
    throw ValidationError("config: unknown experiment '" + cfg.experiment + "'");

  if (const json* seed = field(doc, "seed")) {
    if (!seed->is_number_integer() || seed->get<long long>() < 0)
      throw ValidationError("config: 'seed' must be a non-negative integer");
    cfg.seed = seed->get<std::uint64_t>();
  }

  if (const json* node = field(doc, "path")) cfg.path = parse_path_block(*node);
  if (const json* node = field(doc, "integrator")) cfg.integrator = parse_integrator_block(*node);
  if (const json* node = field(doc, "sweep")) cfg.sweep = parse_sweep_block(*node);
  if (const json* node = field(doc, "output")) cfg.output = parse_output_block(*node);
  const json* gate_node = field(doc, "gate");
  if (gate_node) cfg.gate = parse_gate_block(*gate_node);
  const json* cz_node = field(doc, "czgate");
  if (cz_node) cfg.cz = parse_cz_block(*cz_node);

  const std::string& kind = cfg.experiment;
  if (kind == "phase" || kind == "gate") {
    require_block(cfg.path.has_value(), kind, "path");
    forbid_block(cfg.sweep.has_value(), kind, "sweep");
    forbid_block(gate_node != nullptr, kind, "gate");
    forbid_block(cz_node != nullptr, kind, "czgate");
  } else if (kind == "robustness") {
    require_block(cfg.sweep.has_value(), kind, "sweep");
    forbid_block(cfg.path.has_value(), kind, "path");
    forbid_block(cz_node != nullptr, kind, "czgate");
  } else if (kind == "czgate") {
    forbid_block(cfg.path.has_value(), kind, "path");
    forbid_block(cfg.sweep.has_value(), kind, "sweep");
    forbid_block(gate_node != nullptr, kind, "gate");
  } else {  // verify-all
    forbid_block(cfg.path.has_value(), kind, "path");
    forbid_block(cfg.sweep.has_value(), kind, "sweep");
    forbid_block(gate_node != nullptr, kind, "gate");
    forbid_block(cz_node != nullptr, kind, "czgate");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError("config: cannot read '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace cbloch
