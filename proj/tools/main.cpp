#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cbloch/errors.hpp"
#include "cbloch/paths.hpp"
#include "cbloch/runner.hpp"
#include "cbloch/verify.hpp"
#include "cbloch/version.hpp"

namespace {

int do_run(const std::string& config_file, const cbloch::RunOptions& opts) {
  try {
    const auto outcome = cbloch::run_experiment_file(config_file, opts);
    for (const auto& f : outcome.files) std::printf("%s\n", f.string().c_str());
    std::fprintf(stderr, "wall_time_s=%.3f\n", outcome.report.wall_time_s);
    if (outcome.exit_code != 0)
      std::fprintf(stderr, "error: assertion: embedded assertions failed\n");
    return outcome.exit_code;
  } catch (const cbloch::ParseError& e) {
    std::fprintf(stderr, "error: parse: %s\n", e.what());
    return 2;
  } catch (const cbloch::ValidationError& e) {
    std::fprintf(stderr, "error: validation: %s\n", e.what());
    return 3;
  } catch (const cbloch::NumericalError& e) {
    std::fprintf(stderr, "error: numerical: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
}

int do_verify(std::uint64_t seed) {
  try {
    const auto results = cbloch::run_certification(seed);
    int n_passed = 0;
    for (const auto& r : results) {
      std::printf("%s criterion %d: %s (%s)\n", r.passed ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.detail.c_str());
      n_passed += r.passed ? 1 : 0;
    }
    std::printf("%d/%zu criteria passed\n", n_passed, results.size());
    return n_passed == static_cast<int>(results.size()) ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
}

int do_list_paths() {
  for (const auto& fam : cbloch::list_path_families()) {
    std::string line = fam.name + "  required:";
    for (const auto& key : fam.required) line += " " + key;
    line += "  optional:";
    for (const auto& key : fam.optional) line += " " + key;
    std::printf("%s\n", line.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and certification toolkit for nonadiabatic geometric gates"};
  app.set_version_flag("--version", cbloch::kToolkitVersion);
  app.require_subcommand(1);

  std::string config_file;
  int workers = 0;
  std::string output_dir;
  std::string format_choice;
  std::uint64_t seed = cbloch::kDefaultSeed;

  auto* run = app.add_subcommand("run", "execute the experiment a config file describes");
  run->add_option("config", config_file, "JSON experiment config file")->required();
  run->add_option("--workers", workers, "worker threads for sweeps (default: processors)");
  run->add_option("--output", output_dir,
                  "output directory (beats CBLOCH_OUTPUT_DIR, which beats the config)");
  run->add_option("--format", format_choice, "csv, json, or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_option("--seed", seed, "seed for randomized checks");

  auto* verify = app.add_subcommand("verify-all", "run the whole certification suite");
  verify->add_option("--seed", seed, "seed for randomized checks");

  app.add_subcommand("list-paths", "list built-in path families and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: parse: %s\n", e.what());
    return 2;
  }

  if (run->parsed()) {
    cbloch::RunOptions opts;
    opts.workers = workers;
    if (run->count("--output")) opts.output_dir = output_dir;
    if (run->count("--seed")) opts.seed = seed;
    if (run->count("--format")) {
      if (format_choice == "both")
        opts.formats = std::vector<std::string>{"csv", "json"};
      else
        opts.formats = std::vector<std::string>{format_choice};
    }
    return do_run(config_file, opts);
  }
  if (verify->parsed()) return do_verify(seed);
  return do_list_paths();
}
