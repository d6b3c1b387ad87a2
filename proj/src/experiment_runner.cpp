#include "relibench/experiment_runner.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "relibench/csv.hpp"
#include "relibench/experiments.hpp"
#include "relibench/version.hpp"

namespace relibench {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParameterError("config: missing field '" + key + "'");
  return *it;
}

std::string require_string(const json& j, const std::string& key) {
  const json& field = require_field(j, key);
  if (!field.is_string()) throw ParameterError("config: field '" + key + "' must be a string");
  return field.get<std::string>();
}

double require_number(const json& j, const std::string& key) {
  const json& field = require_field(j, key);
  if (!field.is_number()) throw ParameterError("config: field '" + key + "' must be a number");
  return field.get<double>();
}

std::int64_t require_integer(const json& j, const std::string& key) {
  const json& field = require_field(j, key);
  if (!field.is_number_integer())
    throw ParameterError("config: field '" + key + "' must be an integer");
  return field.get<std::int64_t>();
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParameterError("config: field '" + key + "' has the wrong type");
  }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (const auto& [key, _] : j.items())
    if (allowed.find(key) == allowed.end())
      throw ParameterError("config: unknown field '" + key + "' in " + context);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::uint64_t resolve_seed(const json& config, const RunOptions& options) {
  if (options.seed_override) return *options.seed_override;
  const json& field = require_field(config, "seed");
  if (!field.is_number_integer() || field.get<std::int64_t>() < 0)
    throw ParameterError("config: 'seed' must be a non-negative integer");
  return field.get<std::uint64_t>();
}

struct OutputSet {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> written;

  explicit OutputSet(const std::filesystem::path& dir) : out_dir(dir) {
    std::filesystem::create_directories(dir);
  }

  std::filesystem::path path_of(const std::string& name) { return out_dir / name; }

  void record(const std::filesystem::path& p) { written.push_back(p); }
};

void write_manifest(OutputSet& outputs, ExperimentManifest manifest) {
  for (const auto& p : outputs.written)
    manifest.output_digests.emplace_back(p.filename().string(), file_digest(p));
  const std::filesystem::path path = outputs.path_of("manifest.json");
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + tmp.string() + "' for writing");
    out << manifest.to_json().dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
  outputs.record(path);
}

ExperimentManifest make_manifest(const std::string& kind, std::uint64_t seed,
                                 const json& config) {
  ExperimentManifest manifest;
  manifest.tool_version = kVersion;
  manifest.kind = kind;
  manifest.master_seed = seed;
  manifest.parameters = config;
  manifest.parameters["seed"] = seed;  // reflects any --seed override
  return manifest;
}

PerformanceTable load_table(const json& config, const std::filesystem::path& config_dir,
                            ExperimentManifest& manifest) {
  const std::filesystem::path table_path = resolve(config_dir, require_string(config, "table"));
  manifest.input_digests.emplace_back(table_path.string(), file_digest(table_path));
  return read_performance_table(table_path);
}

std::vector<int> parse_sizes(const json& config) {
  const json& field = require_field(config, "sizes");
  if (!field.is_array() || field.empty())
    throw ParameterError("config: 'sizes' must be a non-empty array of integers");
  std::vector<int> sizes;
  for (const auto& s : field) {
    if (!s.is_number_integer() || s.get<int>() < 1)
      throw ParameterError("config: sample sizes must be positive integers");
    sizes.push_back(s.get<int>());
  }
  return sizes;
}

// --- mixture / optimizer config parsing -----------------------------------

MixtureFamily family_from_string(const std::string& name) {
  if (name == "normal") return MixtureFamily::NORMAL;
  if (name == "lognormal") return MixtureFamily::LOGNORMAL;
  if (name == "point_mass") return MixtureFamily::POINT_MASS;
  throw ParameterError("config: unknown mixture family '" + name + "'");
}

ToyFunction toy_function_from_string(const std::string& name) {
  if (name == "sphere") return ToyFunction::SPHERE;
  if (name == "rastrigin") return ToyFunction::RASTRIGIN;
  if (name == "step_plateau") return ToyFunction::STEP_PLATEAU;
  throw ParameterError("config: unknown toy function '" + name + "'");
}

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "random_search") return OptimizerKind::RANDOM_SEARCH;
  if (name == "step_size_es") return OptimizerKind::STEP_SIZE_ES;
  throw ParameterError("config: unknown optimizer '" + name + "'");
}

std::vector<std::pair<std::string, MixtureSpec>> parse_mixture_configs(const json& config) {
  const json& list = require_field(config, "configs");
  if (!list.is_array() || list.empty())
    throw ParameterError("config: 'configs' must be a non-empty array");
  const double default_min = get_or(config, "clamp_min", 0.0);
  const double default_max = get_or(config, "clamp_max", 10000.0);
  std::vector<std::pair<std::string, MixtureSpec>> out;
  for (const auto& entry : list) {
    reject_unknown_keys(entry, {"config_id", "components", "clamp_min", "clamp_max"},
                        "mixture config");
    MixtureSpec spec;
    spec.clamp_min = get_or(entry, "clamp_min", default_min);
    spec.clamp_max = get_or(entry, "clamp_max", default_max);
    const json& components = require_field(entry, "components");
    if (!components.is_array() || components.empty())
      throw ParameterError("config: 'components' must be a non-empty array");
    for (const auto& c : components) {
      MixtureComponent component;
      component.weight = require_number(c, "weight");
      component.family = family_from_string(require_string(c, "family"));
      switch (component.family) {
        case MixtureFamily::NORMAL:
          reject_unknown_keys(c, {"weight", "family", "mean", "stddev"}, "normal component");
          component.param1 = require_number(c, "mean");
          component.param2 = require_number(c, "stddev");
          break;
        case MixtureFamily::LOGNORMAL:
          reject_unknown_keys(c, {"weight", "family", "mu", "sigma"}, "lognormal component");
          component.param1 = require_number(c, "mu");
          component.param2 = require_number(c, "sigma");
          break;
        case MixtureFamily::POINT_MASS:
          reject_unknown_keys(c, {"weight", "family", "value"}, "point mass component");
          component.param1 = require_number(c, "value");
          break;
      }
      spec.components.push_back(component);
    }
    spec.validate();
    out.emplace_back(require_string(entry, "config_id"), std::move(spec));
  }
  return out;
}

std::vector<OptimizerConfig> parse_optimizer_configs(const json& config) {
  const json& list = require_field(config, "configs");
  if (!list.is_array() || list.empty())
    throw ParameterError("config: 'configs' must be a non-empty array");
  std::vector<OptimizerConfig> out;
  for (const auto& entry : list) {
    reject_unknown_keys(entry, {"config_id", "optimizer", "initial_step", "adapt_rate"},
                        "optimizer config");
    OptimizerConfig oc;
    oc.config_id = require_string(entry, "config_id");
    oc.kind = optimizer_from_string(require_string(entry, "optimizer"));
    oc.params.initial_step = get_or(entry, "initial_step", oc.params.initial_step);
    oc.params.adapt_rate = get_or(entry, "adapt_rate", oc.params.adapt_rate);
    out.push_back(std::move(oc));
  }
  return out;
}

TargetSet parse_targets(const json& config) {
  const auto it = config.find("targets");
  if (it == config.end()) return default_target_set();
  reject_unknown_keys(*it, {"count", "upper", "lower"}, "'targets'");
  return default_target_set(static_cast<int>(get_or(*it, "count", std::int64_t{51})),
                            get_or(*it, "upper", 1e2), get_or(*it, "lower", 1e-8));
}

// --- experiment kinds -------------------------------------------------------

std::vector<std::filesystem::path> experiment_best_by_mean_loss(
    const json& config, const std::filesystem::path& config_dir, const RunOptions& options,
    bool underestimation) {
  const std::uint64_t seed = resolve_seed(config, options);
  ExperimentManifest manifest =
      make_manifest(require_string(config, "kind"), seed, config);
  const PerformanceTable table = load_table(config, config_dir, manifest);
  const std::vector<int> sizes = parse_sizes(config);
  const int reps = static_cast<int>(require_integer(config, "reps"));

  OutputSet outputs(options.out_dir);
  if (underestimation) {
    const auto results = underestimation_error(table, sizes, reps, seed, options.workers);
    AtomicCsvWriter writer(outputs.path_of("underestimation.csv"),
                           {"sample_size", "repetition", "error"});
    json excluded = json::object();
    for (const auto& [size, result] : results) {
      for (Eigen::Index r = 0; r < result.errors.size(); ++r)
        writer.write_row({std::to_string(size), std::to_string(r),
                          format_double(result.errors(r))});
      excluded[std::to_string(size)] = result.excluded;
    }
    writer.commit();
    outputs.record(outputs.path_of("underestimation.csv"));
    manifest.summary["excluded_repetitions"] = excluded;
  } else {
    const auto results = best_by_mean_loss(table, sizes, reps, seed, options.workers);
    AtomicCsvWriter writer(outputs.path_of("losses.csv"),
                           {"sample_size", "repetition", "loss"});
    json means = json::object();
    for (const auto& [size, dist] : results) {
      for (Eigen::Index r = 0; r < dist.losses.size(); ++r)
        writer.write_row({std::to_string(size), std::to_string(r),
                          format_double(dist.losses(r))});
      means[std::to_string(size)] = dist.losses.mean();
    }
    writer.commit();
    outputs.record(outputs.path_of("losses.csv"));
    manifest.summary["mean_loss"] = means;
  }
  write_manifest(outputs, std::move(manifest));
  return outputs.written;
}

void write_pairwise_csv(OutputSet& outputs, const std::vector<PairwiseRecord>& records) {
  AtomicCsvWriter writer(outputs.path_of("pairwise.csv"),
                         {"config_a", "config_b", "true_mean_gap", "correct_fraction",
                          "incorrect_fraction", "inconclusive_fraction"});
  for (const auto& rec : records)
    writer.write_row({rec.config_a, rec.config_b, format_double(rec.true_mean_gap),
                      format_double(rec.correct_fraction),
                      format_double(rec.incorrect_fraction),
                      format_double(rec.inconclusive_fraction)});
  writer.commit();
  outputs.record(outputs.path_of("pairwise.csv"));
}

std::vector<std::filesystem::path> experiment_pairwise(const json& config,
                                                       const std::filesystem::path& config_dir,
                                                       const RunOptions& options) {
  const std::uint64_t seed = resolve_seed(config, options);
  ExperimentManifest manifest = make_manifest("pairwise_decisions", seed, config);
  const PerformanceTable table = load_table(config, config_dir, manifest);
  const int n_pairs = static_cast<int>(get_or(config, "n_pairs", std::int64_t{10000}));
  const int k = static_cast<int>(get_or(config, "k", std::int64_t{15}));
  const int reps = static_cast<int>(get_or(config, "reps", std::int64_t{500}));
  const SampleSource source =
      sample_source_from_string(get_or<std::string>(config, "source", "empirical"));

  const PairwiseStudy study =
      pairwise_decisions(table, n_pairs, k, reps, source, seed, options.workers);

  OutputSet outputs(options.out_dir);
  write_pairwise_csv(outputs, study.records);
  manifest.summary["excluded_pairs"] = study.excluded_pairs;
  write_manifest(outputs, std::move(manifest));
  return outputs.written;
}

std::vector<std::filesystem::path> experiment_correctness(
    const json& config, const std::filesystem::path& config_dir, const RunOptions& options) {
  const std::uint64_t seed = resolve_seed(config, options);
  ExperimentManifest manifest = make_manifest("test_correctness", seed, config);
  const PerformanceTable table = load_table(config, config_dir, manifest);
  const CompareMethod method = compare_method_from_string(require_string(config, "method"));
  const int n_pairs = static_cast<int>(get_or(config, "n_pairs", std::int64_t{10000}));
  const int k = static_cast<int>(get_or(config, "k", std::int64_t{15}));
  const int reps = static_cast<int>(get_or(config, "reps", std::int64_t{500}));
  const double alpha = get_or(config, "alpha", 0.05);
  const int bins = static_cast<int>(get_or(config, "bins", std::int64_t{20}));

  const CorrectnessStudy study =
      test_correctness(table, method, n_pairs, k, reps, alpha, seed, options.workers, bins);

  OutputSet outputs(options.out_dir);
  write_pairwise_csv(outputs, study.records);
  {
    AtomicCsvWriter writer(outputs.path_of("bins.csv"),
                           {"bin_low", "bin_high", "pairs", "correct", "incorrect",
                            "inconclusive"});
    for (Eigen::Index b = 0; b + 1 < study.bins.bin_edges.size(); ++b)
      writer.write_row({format_double(study.bins.bin_edges(b)),
                        format_double(study.bins.bin_edges(b + 1)),
                        std::to_string(study.bins.counts(b)),
                        format_double(study.bins.correct(b)),
                        format_double(study.bins.incorrect(b)),
                        format_double(study.bins.inconclusive(b))});
    writer.commit();
    outputs.record(outputs.path_of("bins.csv"));
  }
  manifest.summary["excluded_pairs"] = study.excluded_pairs;
  manifest.summary["fraction_exceeding_alpha"] = study.fraction_exceeding_alpha;
  write_manifest(outputs, std::move(manifest));
  return outputs.written;
}

std::vector<std::filesystem::path> experiment_race_loss(const json& config,
                                                        const std::filesystem::path& config_dir,
                                                        const RunOptions& options) {
  const std::uint64_t seed = resolve_seed(config, options);
  ExperimentManifest manifest = make_manifest("race_loss_study", seed, config);
  const PerformanceTable table = load_table(config, config_dir, manifest);
  const int reps = static_cast<int>(get_or(config, "reps", std::int64_t{1000}));

  const json& variant_list = require_field(config, "variants");
  if (!variant_list.is_array() || variant_list.empty())
    throw ParameterError("config: 'variants' must be a non-empty array");
  std::vector<RaceStudyVariant> variants;
  for (const auto& v : variant_list) {
    RaceStudyVariant variant;
    variant.spec = race_spec_from_json(v);
    variant.label = get_or<std::string>(v, "label", "");
    if (variant.label.empty()) {
      variant.label = std::string(to_string(variant.spec.test_kind)) + "-ft" +
                      std::to_string(variant.spec.first_test);
      if (variant.spec.test_kind == TestKind::SHA)
        variant.label += "-R" + std::to_string(variant.spec.reduction_factor);
    }
    variants.push_back(std::move(variant));
  }

  const auto results = race_loss_study(table, variants, reps, seed, options.workers);

  double loss_grid_max = get_or(config, "loss_grid_max", 0.0);
  if (loss_grid_max <= 0.0) {
    for (const auto& r : results) loss_grid_max = std::max(loss_grid_max, r.losses.maxCoeff());
    if (loss_grid_max <= 0.0) loss_grid_max = 1.0;  // every loss zero
  }

  OutputSet outputs(options.out_dir);
  {
    AtomicCsvWriter writer(outputs.path_of("races.csv"),
                           {"variant", "repetition", "loss", "total_samples"});
    for (const auto& r : results)
      for (Eigen::Index rep = 0; rep < r.losses.size(); ++rep)
        writer.write_row({r.label, std::to_string(rep), format_double(r.losses(rep)),
                          format_double(r.total_samples(rep))});
    writer.commit();
    outputs.record(outputs.path_of("races.csv"));
  }
  {
    AtomicCsvWriter writer(outputs.path_of("race_summary.csv"),
                           {"variant", "mean_loss", "mean_total_samples", "sum_total_samples",
                            "loss_cdf_auc", "loss_grid_max"});
    for (const auto& r : results)
      writer.write_row({r.label, format_double(r.mean_loss),
                        format_double(r.mean_total_samples),
                        std::to_string(r.sum_total_samples),
                        format_double(loss_curve_auc(r.losses, loss_grid_max)),
                        format_double(loss_grid_max)});
    writer.commit();
    outputs.record(outputs.path_of("race_summary.csv"));
  }
  manifest.summary["loss_grid_max"] = loss_grid_max;
  write_manifest(outputs, std::move(manifest));
  return outputs.written;
}

std::vector<std::filesystem::path> experiment_rank_change(
    const json& config, const std::filesystem::path& config_dir, const RunOptions& options) {
  const std::uint64_t seed = resolve_seed(config, options);
  ExperimentManifest manifest = make_manifest("rank_change", seed, config);
  const PerformanceTable table = load_table(config, config_dir, manifest);
  const int sample_size = static_cast<int>(get_or(config, "sample_size", std::int64_t{15}));

  RngStream rng(seed, 0);
  const auto rows = rank_change_table(table, sample_size, rng);

  OutputSet outputs(options.out_dir);
  AtomicCsvWriter writer(outputs.path_of("rank_change.csv"),
                         {"config_id", "original_rank", "resampled_rank"});
  for (const auto& row : rows)
    writer.write_row({row.config_id, std::to_string(row.original_rank),
                      std::to_string(row.resampled_rank)});
  writer.commit();
  outputs.record(outputs.path_of("rank_change.csv"));
  write_manifest(outputs, std::move(manifest));
  return outputs.written;
}

std::vector<std::filesystem::path> experiment_cumulative_means(
    const json& config, const std::filesystem::path& config_dir, const RunOptions& options) {
  const std::uint64_t seed = resolve_seed(config, options);
  ExperimentManifest manifest = make_manifest("cumulative_means", seed, config);
  const PerformanceTable table = load_table(config, config_dir, manifest);
  const std::string config_id = require_string(config, "config_id");
  const int n = static_cast<int>(get_or(config, "n", std::int64_t{200}));

  RngStream rng(seed, 0);
  const Eigen::ArrayXd means = cumulative_means(table, config_id, n, rng);

  OutputSet outputs(options.out_dir);
  AtomicCsvWriter writer(outputs.path_of("cumulative_means.csv"),
                         {"config_id", "draw_index", "cumulative_mean"});
  for (Eigen::Index i = 0; i < means.size(); ++i)
    writer.write_row({config_id, std::to_string(i + 1), format_double(means(i))});
  writer.commit();
  outputs.record(outputs.path_of("cumulative_means.csv"));
  write_manifest(outputs, std::move(manifest));
  return outputs.written;
}

}  // namespace

json ExperimentManifest::to_json() const {
  json j;
  j["tool_version"] = tool_version;
  j["kind"] = kind;
  j["master_seed"] = master_seed;
  j["parameters"] = parameters;
  j["inputs"] = json::array();
  for (const auto& [path, digest] : input_digests)
    j["inputs"].push_back({{"path", path}, {"fnv1a64", digest}});
  j["outputs"] = json::array();
  for (const auto& [name, digest] : output_digests)
    j["outputs"].push_back({{"file", name}, {"fnv1a64", digest}});
  j["summary"] = summary;
  return j;
}

json race_spec_to_json(const RaceSpec& spec) {
  json j;
  j["test_kind"] = to_string(spec.test_kind);
  j["first_test"] = spec.first_test;
  j["each_test"] = spec.each_test;
  j["max_elites"] = spec.max_elites;
  j["budget_samples"] = spec.budget_samples;
  j["alpha"] = spec.alpha;
  if (spec.test_kind == TestKind::SHA) j["reduction_factor"] = spec.reduction_factor;
  return j;
}

RaceSpec race_spec_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"label", "test_kind", "first_test", "each_test", "max_elites",
                       "budget_samples", "alpha", "reduction_factor"},
                      "race spec");
  RaceSpec spec;
  spec.test_kind = test_kind_from_string(require_string(j, "test_kind"));
  spec.first_test = static_cast<int>(require_integer(j, "first_test"));
  spec.each_test = static_cast<int>(get_or(j, "each_test", std::int64_t{1}));
  spec.max_elites = static_cast<int>(get_or(j, "max_elites", std::int64_t{5}));
  spec.budget_samples = get_or(j, "budget_samples", std::int64_t{10000});
  spec.alpha = get_or(j, "alpha", 0.05);
  spec.reduction_factor = static_cast<int>(get_or(j, "reduction_factor", std::int64_t{2}));
  spec.validate();
  return spec;
}

MixtureSpec mixture_spec_from_json(const json& j) {
  json wrapper;
  wrapper["configs"] = json::array({json{{"config_id", "spec"}}});
  wrapper["configs"][0]["components"] = require_field(j, "components");
  if (j.contains("clamp_min")) wrapper["configs"][0]["clamp_min"] = j["clamp_min"];
  if (j.contains("clamp_max")) wrapper["configs"][0]["clamp_max"] = j["clamp_max"];
  return parse_mixture_configs(wrapper).front().second;
}

std::vector<std::filesystem::path> run_aoc(const std::filesystem::path& run_log_path,
                                           const TargetSet& targets, std::int64_t budget,
                                           const std::filesystem::path& out_path) {
  const std::vector<RunTrajectory> runs = read_run_log(run_log_path);

  std::set<std::string> function_ids;
  for (const auto& traj : runs) function_ids.insert(traj.function_id);
  if (function_ids.size() != 1)
    throw DataError("run log '" + run_log_path.string() +
                    "' holds more than one function id; one table per function");

  // Runs arrive sorted by (config_id, run_id); the position within its
  // configuration becomes the sample index.
  std::map<std::string, std::vector<double>> aoc_rows;
  for (const auto& traj : runs)
    aoc_rows[traj.config_id].push_back(aoc_of_run(traj, targets, budget));

  std::size_t min_runs = std::numeric_limits<std::size_t>::max(), max_runs = 0;
  for (const auto& [config, values] : aoc_rows) {
    min_runs = std::min(min_runs, values.size());
    max_runs = std::max(max_runs, values.size());
  }
  if (min_runs != max_runs)
    std::cerr << "warning: uneven run counts per configuration (min " << min_runs << ", max "
              << max_runs << ")\n";

  AtomicCsvWriter writer(out_path, {"config_id", "sample_index", "aoc_value"});
  for (const auto& [config, values] : aoc_rows)
    for (std::size_t i = 0; i < values.size(); ++i)
      writer.write_row({config, std::to_string(i), format_double(values[i])});
  writer.commit();
  return {out_path};
}

std::vector<std::filesystem::path> run_generate(const json& config,
                                                const std::filesystem::path& config_dir,
                                                const RunOptions& options) {
  (void)config_dir;
  const std::string kind = require_string(config, "kind");
  const std::uint64_t seed = resolve_seed(config, options);
  ExperimentManifest manifest = make_manifest(kind, seed, config);
  OutputSet outputs(options.out_dir);

  if (kind == "mixture_table") {
    const auto configs = parse_mixture_configs(config);
    const int samples = static_cast<int>(get_or(config, "samples_per_config", std::int64_t{200}));
    const std::string function_id = get_or<std::string>(config, "function_id", "mixture");
    const PerformanceTable table =
        build_table_from_mixtures(function_id, configs, samples, seed);
    const std::string name = get_or<std::string>(config, "output", "table.csv");
    write_performance_table(outputs.path_of(name), table);
    outputs.record(outputs.path_of(name));
  } else if (kind == "toy_table" || kind == "toy_runs") {
    ToyProblem problem;
    problem.function = toy_function_from_string(require_string(config, "function"));
    problem.dimension = static_cast<int>(get_or(config, "dimension", std::int64_t{5}));
    const std::int64_t budget = get_or(config, "budget", std::int64_t{10000});
    const int runs_per_config =
        static_cast<int>(get_or(config, "runs_per_config", std::int64_t{200}));
    const auto configs = parse_optimizer_configs(config);

    if (kind == "toy_table") {
      const TargetSet targets = parse_targets(config);
      const PerformanceTable table = build_table_from_runs(
          problem, configs, runs_per_config, targets, budget, seed, options.workers);
      const std::string name = get_or<std::string>(config, "output", "table.csv");
      write_performance_table(outputs.path_of(name), table);
      outputs.record(outputs.path_of(name));
    } else {
      std::vector<RunTrajectory> trajectories(configs.size() *
                                              static_cast<std::size_t>(runs_per_config));
      for (std::size_t c = 0; c < configs.size(); ++c)
        for (int r = 0; r < runs_per_config; ++r) {
          const std::size_t item = c * static_cast<std::size_t>(runs_per_config) +
                                   static_cast<std::size_t>(r);
          RngStream rng(seed, item);
          trajectories[item] =
              run_toy_optimizer(problem, configs[c].kind, configs[c].params, budget, rng,
                                configs[c].config_id, std::to_string(r));
        }
      const std::string name = get_or<std::string>(config, "output", "runs.csv");
      write_run_log(outputs.path_of(name), trajectories);
      outputs.record(outputs.path_of(name));
    }
  } else {
    throw ParameterError("config: unknown generator kind '" + kind + "'");
  }

  write_manifest(outputs, std::move(manifest));
  return outputs.written;
}

std::vector<std::filesystem::path> run_experiment(const json& config,
                                                  const std::filesystem::path& config_dir,
                                                  const RunOptions& options) {
  const std::string kind = require_string(config, "kind");
  if (kind == "best_by_mean_loss")
    return experiment_best_by_mean_loss(config, config_dir, options, false);
  if (kind == "underestimation_error")
    return experiment_best_by_mean_loss(config, config_dir, options, true);
  if (kind == "pairwise_decisions") return experiment_pairwise(config, config_dir, options);
  if (kind == "test_correctness") return experiment_correctness(config, config_dir, options);
  if (kind == "race_loss_study") return experiment_race_loss(config, config_dir, options);
  if (kind == "rank_change") return experiment_rank_change(config, config_dir, options);
  if (kind == "cumulative_means")
    return experiment_cumulative_means(config, config_dir, options);
  throw ParameterError("config: unknown experiment kind '" + kind + "'");
}

}  // namespace relibench
