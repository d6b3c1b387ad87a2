// relibench: anytime-performance measures and selection-reliability
// experiments over empirical performance distributions.
//
// Subcommands:
//   aoc         run-log CSV -> per-run AOC table CSV
//   generate    synthesize tables or run logs from a JSON config
//   experiment  run a resampling / racing study from a JSON config
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "relibench/errors.hpp"
#include "relibench/experiment_runner.hpp"
#include "relibench/version.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitInternalError = 4;

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw relibench::DataError("cannot open config '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw relibench::ParameterError("config '" + path.string() + "': " + e.what());
  }
}

// count:upper:lower, e.g. the default 51:1e2:1e-8.
relibench::TargetSet parse_target_spec(const std::string& spec) {
  const std::size_t first = spec.find(':');
  const std::size_t second = spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw relibench::ParameterError("targets spec must be count:upper:lower");
  try {
    return relibench::default_target_set(std::stoi(spec.substr(0, first)),
                                         std::stod(spec.substr(first + 1, second - first - 1)),
                                         std::stod(spec.substr(second + 1)));
  } catch (const std::logic_error&) {
    throw relibench::ParameterError("targets spec must be count:upper:lower");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-reliability toolkit for optimizer benchmarking"};
  app.set_version_flag("--version", relibench::kVersion);
  app.require_subcommand(1);

  // aoc
  std::string log_path, aoc_out = "table.csv", target_spec = "51:1e2:1e-8";
  std::int64_t budget = 10000;
  CLI::App* aoc = app.add_subcommand("aoc", "Compute per-run AOC values from a run log");
  aoc->add_option("--log", log_path, "Run-log CSV")->required();
  aoc->add_option("--out", aoc_out, "Output table CSV path");
  aoc->add_option("--budget", budget, "Evaluation budget B");
  aoc->add_option("--targets", target_spec, "Targets as count:upper:lower");

  // generate / experiment
  std::string generate_config, experiment_config;
  relibench::RunOptions gen_options, exp_options;
  std::int64_t gen_seed = -1, exp_seed = -1;
  std::string gen_out_dir = ".", exp_out_dir = ".";

  CLI::App* generate = app.add_subcommand("generate", "Synthesize tables or run logs");
  generate->add_option("--config", generate_config, "Generator config JSON")->required();
  generate->add_option("--out-dir", gen_out_dir, "Output directory");
  generate->add_option("--seed", gen_seed, "Master seed override")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--workers", gen_options.workers, "Worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* experiment = app.add_subcommand("experiment", "Run a reliability experiment");
  experiment->add_option("--config", experiment_config, "Experiment config JSON")->required();
  experiment->add_option("--out-dir", exp_out_dir, "Output directory");
  experiment->add_option("--seed", exp_seed, "Master seed override")
      ->check(CLI::NonNegativeNumber);
  experiment->add_option("--workers", exp_options.workers, "Worker threads")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (aoc->parsed()) {
      const auto written =
          relibench::run_aoc(log_path, parse_target_spec(target_spec), budget, aoc_out);
      for (const auto& p : written) std::cout << p.string() << '\n';
    } else if (generate->parsed()) {
      gen_options.out_dir = gen_out_dir;
      if (gen_seed >= 0) gen_options.seed_override = static_cast<std::uint64_t>(gen_seed);
      const std::filesystem::path config_path(generate_config);
      const auto written = relibench::run_generate(load_config(config_path),
                                                   config_path.parent_path(), gen_options);
      for (const auto& p : written) std::cout << p.string() << '\n';
    } else if (experiment->parsed()) {
      exp_options.out_dir = exp_out_dir;
      if (exp_seed >= 0) exp_options.seed_override = static_cast<std::uint64_t>(exp_seed);
      const std::filesystem::path config_path(experiment_config);
      const auto written = relibench::run_experiment(load_config(config_path),
                                                     config_path.parent_path(), exp_options);
      for (const auto& p : written) std::cout << p.string() << '\n';
    }
  } catch (const relibench::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const relibench::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return 0;
}
