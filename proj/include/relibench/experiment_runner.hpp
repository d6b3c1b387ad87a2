#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relibench/perf_measures.hpp"
#include "relibench/racing.hpp"
#include "relibench/synth.hpp"

namespace relibench {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int workers = 1;
  std::optional<std::uint64_t> seed_override;
};

// Everything needed to bit-reproduce a run: tool version, seed, the full
// parameter set, and digests of inputs and outputs.
struct ExperimentManifest {
  std::string tool_version;
  std::string kind;
  std::uint64_t master_seed = 0;
  nlohmann::json parameters;
  std::vector<std::pair<std::string, std::string>> input_digests;   // path, digest
  std::vector<std::pair<std::string, std::string>> output_digests;  // name, digest
  nlohmann::json summary;

  nlohmann::json to_json() const;
};

// Flat key-value (de)serialization of a RaceSpec; unknown keys are rejected.
nlohmann::json race_spec_to_json(const RaceSpec& spec);
RaceSpec race_spec_from_json(const nlohmann::json& j);

MixtureSpec mixture_spec_from_json(const nlohmann::json& j);

// Computes per-run AOC values from a run log and writes a performance-table
// CSV (one row per (config, run)). The log must hold a single function id.
// Returns the paths written.
std::vector<std::filesystem::path> run_aoc(const std::filesystem::path& run_log_path,
                                           const TargetSet& targets, std::int64_t budget,
                                           const std::filesystem::path& out_path);

// Dispatches a generator config ("mixture_table", "toy_table", "toy_runs").
// Relative input paths resolve against config_dir. Writes data files plus a
// manifest.json, manifest last; returns all paths written.
std::vector<std::filesystem::path> run_generate(const nlohmann::json& config,
                                                const std::filesystem::path& config_dir,
                                                const RunOptions& options);

// Dispatches an experiment config ("best_by_mean_loss", "underestimation_error",
// "pairwise_decisions", "test_correctness", "race_loss_study", "rank_change",
// "cumulative_means"). Same output conventions as run_generate.
std::vector<std::filesystem::path> run_experiment(const nlohmann::json& config,
                                                  const std::filesystem::path& config_dir,
                                                  const RunOptions& options);

}  // namespace relibench
