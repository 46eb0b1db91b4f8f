#include "cbloch/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "cbloch/errors.hpp"
#include "cbloch/evolution.hpp"
#include "cbloch/gates.hpp"
#include "cbloch/geometry.hpp"
#include "cbloch/linalg.hpp"
#include "cbloch/paths.hpp"
#include "cbloch/two_atom.hpp"
#include "cbloch/verify.hpp"
#include "cbloch/version.hpp"

namespace cbloch {
namespace {

using nlohmann::json;

void run_phase(const ExperimentConfig& cfg, RunReport& rep) {
  const auto path = make_path(cfg.path->family, cfg.path->params);
  require_closed(path);
  rep.columns = {"route", "alpha_plus", "alpha_minus", "raw_re", "raw_im", "pole_fallback"};
  double alpha_minus[3];
  int i = 0;
  for (auto route :
       {PhaseRoute::time_integral, PhaseRoute::line_integral, PhaseRoute::solid_angle}) {
    const auto r = compute_phase(path, route);
    rep.rows.push_back(json::array({route_name(route), r.alpha_plus, r.alpha_minus,
                                    r.raw.real(), r.raw.imag(), r.pole_fallback}));
    alpha_minus[i++] = r.alpha_minus;
  }
  double disagreement = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      disagreement = std::max(disagreement, std::abs(alpha_minus[a] - alpha_minus[b]));
  rep.summary["max_route_disagreement"] = disagreement;
  bool ok = disagreement <= 1e-9;
  if (path.family() == "circle") {
    const double cap = pi * (1.0 - std::cos(path.params().at("theta0")));
    rep.summary["cap_reference"] = cap;
    rep.summary["cap_deviation"] = std::abs(alpha_minus[0] - cap);
    ok = ok && std::abs(alpha_minus[0] - cap) <= 1e-9;
  }
  rep.assertions_passed = ok;
}

void run_gate(const ExperimentConfig& cfg, RunReport& rep) {
  const auto path = make_path(cfg.path->family, cfg.path->params);
  require_closed(path);
  const auto rec = evolve_path(path, cfg.integrator);
  const std::string name = recognize_gate(Matrix2c(rec.final_operator()), 1e-4);
  // -1 marks "no catalog gate within tolerance"
  const double distance =
      name.empty() ? -1.0 : gate_distance(rec.final_operator(), MatrixXc(named_gate(name)));
  const double unit_res = rec.unitarity_residual.back();
  const double det_dev = std::abs(rec.final_operator().determinant() - 1.0);

  rep.columns = {"realized_gate", "gate_distance", "endpoint_unitarity",
                 "det_deviation", "max_intermediate_unitarity"};
  rep.rows.push_back(json::array(
      {name, distance, unit_res, det_dev, rec.max_intermediate_unitarity_residual()}));
  rep.summary["realized_gate"] = name;
  rep.summary["endpoint_unitarity"] = unit_res;
  rep.summary["det_deviation"] = det_dev;
  rep.assertions_passed = unit_res <= 1e-6 && det_dev <= 1e-6;
}

void run_robustness(const ExperimentConfig& cfg, RunReport& rep, int workers) {
  const auto& grid = cfg.sweep->grid;
  const GateBlock& g = cfg.gate;
  std::vector<RobustnessPoint> points(grid.size());

  const int pool = std::max(1, std::min<int>(workers, static_cast<int>(grid.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < grid.size();)
      points[i] = robustness_sweep(g.theta, g.phi, g.alpha, {grid[i]}, g.theta0_ref)[0];
  };
  std::vector<std::thread> threads;
  for (int w = 1; w < pool; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();

  rep.columns = {"dphi1", "dphi2", "f_exact", "f_quadratic_approx", "f_dynamical_ref",
                 "f_holonomic_ref"};
  bool finite = true;
  double worst_quadratic_gap = 0;
  for (const auto& p : points) {
    rep.rows.push_back(json::array({p.deviation.dphi1, p.deviation.dphi2, p.f_exact,
                                    p.f_quadratic_approx, p.f_dynamical_ref,
                                    p.f_holonomic_ref}));
    finite = finite && std::isfinite(p.f_exact);
    worst_quadratic_gap =
        std::max(worst_quadratic_gap, std::abs(p.f_exact - p.f_quadratic_approx));
  }
  rep.summary["points"] = grid.size();
  rep.summary["max_quadratic_gap"] = worst_quadratic_gap;
  rep.assertions_passed = finite;
}

void run_czgate(const ExperimentConfig& cfg, RunReport& rep) {
  const TwoAtomMode mode =
      cfg.cz.mode == "full" ? TwoAtomMode::full : TwoAtomMode::idealized;
  auto two = default_cz_config(cfg.cz.u, cfg.cz.big_theta, mode);
  two.abstract_gates = cfg.cz.abstract_gates;
  const auto out = run_cz_protocol(two, cfg.integrator);

  rep.columns = {"basis", "fidelity", "r_population", "diagonal_phase"};
  const auto& comp = ThreeLevelBasis::computational();
  for (int k = 0; k < 4; ++k)
    rep.rows.push_back(json::array({ThreeLevelBasis::label(comp[k]),
                                    out.report.basis_fidelity[k], out.report.r_population[k],
                                    out.report.diagonal_phase[k]}));
  rep.summary["theta_target"] = out.report.theta_target;
  rep.summary["theta_effective"] = out.report.theta_effective;
  rep.summary["theta_effective_magnitude"] = std::abs(out.report.theta_effective);
  rep.summary["leakage"] = out.report.leakage;
  rep.summary["mode"] = out.report.mode;
  rep.summary["abstract_gates"] = out.report.abstract_gates;
  rep.summary["u_over_omega"] = out.report.u_over_omega;
  rep.summary["ratio_warning"] = out.report.ratio_warning;
  rep.summary["breakdown"] = out.report.breakdown;
  rep.assertions_passed = !out.report.breakdown;
}

void run_verify_all(RunReport& rep, std::uint64_t seed) {
  const auto results = run_certification(seed);
  rep.columns = {"criterion", "name", "passed", "detail"};
  int n_passed = 0;
  for (const auto& r : results) {
    rep.rows.push_back(json::array({r.id, r.name, r.passed, r.detail}));
    n_passed += r.passed ? 1 : 0;
  }
  rep.summary["seed"] = seed;
  rep.summary["passed"] = n_passed;
  rep.summary["total"] = results.size();
  rep.assertions_passed = n_passed == static_cast<int>(results.size());
}

std::string csv_cell(const json& v) {
  std::string text;
  if (v.is_string())
    text = v.get<std::string>();
  else if (v.is_boolean())
    text = v.get<bool>() ? "true" : "false";
  else if (v.is_number_integer())
    text = std::to_string(v.get<long long>());
  else if (v.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    text = buf;
  } else
    text = v.dump();

  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::string render_csv(const RunReport& report) {
  std::string out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out += ',';
    out += report.columns[i];
  }
  out += '\n';
  for (const auto& r : report.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(r[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const RunReport& report) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["version"] = kToolkitVersion;
  doc["experiment"] = report.experiment;
  doc["config_digest"] = report.digest_hex;
  doc["config"] = report.config_echo;
  doc["config_text"] = report.config_text;
  doc["columns"] = report.columns;
  doc["rows"] = report.rows;
  doc["summary"] = report.summary;
  return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& target, const std::string& content) {
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("report: cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw ValidationError("report: write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec)
    throw ValidationError("report: cannot move '" + tmp.string() + "' into place: " +
                          ec.message());
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.experiment = cfg.experiment;
  rep.config_text = cfg.raw_text;
  rep.digest_hex = cfg.raw_text.empty() ? digest_hex("") : cfg.digest_hex;
  rep.config_echo = cfg.raw_text.empty() ? json::object() : json::parse(cfg.raw_text);
  rep.summary = json::object();

  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  const int workers = opts.workers > 0
                          ? opts.workers
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  if (cfg.experiment == "phase")
    run_phase(cfg, rep);
  else if (cfg.experiment == "gate")
    run_gate(cfg, rep);
  else if (cfg.experiment == "robustness")
    run_robustness(cfg, rep, workers);
  else if (cfg.experiment == "czgate")
    run_czgate(cfg, rep);
  else if (cfg.experiment == "verify-all")
    run_verify_all(rep, seed);
  else
    throw ValidationError("run_experiment: unknown experiment '" + cfg.experiment + "'");

  rep.summary["assertions_passed"] = rep.assertions_passed;
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::vector<std::string>& formats,
                                               const std::filesystem::path& directory) {
  for (const auto& f : formats)
    if (f != "csv" && f != "json")
      throw ValidationError("report: unknown format '" + f + "'");

  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec)
    throw ValidationError("report: cannot create '" + directory.string() + "': " +
                          ec.message());

  const std::string stem = report.experiment + "-" + report.digest_hex.substr(0, 8);
  std::vector<std::filesystem::path> manifest;
  for (const char* fmt : {"csv", "json"}) {  // stable manifest order
    if (std::find(formats.begin(), formats.end(), fmt) == formats.end()) continue;
    const std::filesystem::path target = directory / (stem + "." + fmt);
    write_atomic(target, fmt == std::string("csv") ? render_csv(report) : render_json(report));
    manifest.push_back(target);
  }
  return manifest;
}

RunOutcome run_experiment_file(const std::filesystem::path& config_file,
                               const RunOptions& opts) {
  const ExperimentConfig cfg = load_config(config_file);
  RunOutcome out;
  out.report = run_experiment(cfg, opts);

  std::string dir = cfg.output.directory;
  if (const char* env = std::getenv("CBLOCH_OUTPUT_DIR"); env && *env) dir = env;
  if (opts.output_dir) dir = *opts.output_dir;
  out.files = emit_report(out.report, opts.formats.value_or(cfg.output.formats), dir);
  out.exit_code = out.report.assertions_passed ? 0 : 1;
  return out;
}

}  // namespace cbloch
