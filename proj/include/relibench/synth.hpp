#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relibench/errors.hpp"
#include "relibench/perf_measures.hpp"
#include "relibench/performance_table.hpp"
#include "relibench/rng.hpp"

namespace relibench {

// --- parametric mixtures --------------------------------------------------

enum class MixtureFamily { NORMAL, LOGNORMAL, POINT_MASS };

// NORMAL: param1 = mean, param2 = stddev.
// LOGNORMAL: param1 = mu, param2 = sigma of the underlying normal.
// POINT_MASS: param1 = value.
struct MixtureComponent {
  double weight = 1.0;
  MixtureFamily family = MixtureFamily::NORMAL;
  double param1 = 0.0;
  double param2 = 0.0;
};

// Weighted mixture whose draws are clamped to [clamp_min, clamp_max]
// (AOC values live in [0, budget]).
struct MixtureSpec {
  std::vector<MixtureComponent> components;
  double clamp_min = 0.0;
  double clamp_max = 10000.0;

  void validate() const;
  double mean() const;  // analytic mean, ignoring truncation
};

Eigen::ArrayXd sample_mixture(const MixtureSpec& spec, int n, RngStream& rng);

// --- toy benchmark problems -------------------------------------------------

enum class ToyFunction { SPHERE, RASTRIGIN, STEP_PLATEAU };

// All toy functions are minimized over [-5, 5]^d with optimum value 0, so a
// function value doubles as the objective precision.
struct ToyProblem {
  ToyFunction function = ToyFunction::SPHERE;
  int dimension = 5;
};

double evaluate(const ToyProblem& problem, const Eigen::VectorXd& x);

// --- toy optimizers ----------------------------------------------------------

enum class OptimizerKind { RANDOM_SEARCH, STEP_SIZE_ES };

struct OptimizerParams {
  // (1+1)-ES settings; ignored by random search.
  double initial_step = 2.5;
  double adapt_rate = 0.8;  // success multiplier exponent numerator, 1/5th rule
};

// Runs one seeded optimizer for `budget` evaluations and records every
// best-so-far improvement.
RunTrajectory run_toy_optimizer(const ToyProblem& problem, OptimizerKind kind,
                                const OptimizerParams& params, std::int64_t budget,
                                RngStream& rng, std::string config_id = "config",
                                std::string run_id = "0");

struct OptimizerConfig {
  std::string config_id;
  OptimizerKind kind = OptimizerKind::RANDOM_SEARCH;
  OptimizerParams params;
};

// Fresh trajectories for every (config, run), reduced to AOC values.
// Run r of config c uses stream (master_seed, c * runs_per_config + r).
PerformanceTable build_table_from_runs(const ToyProblem& problem,
                                       const std::vector<OptimizerConfig>& configs,
                                       int runs_per_config, const TargetSet& targets,
                                       std::int64_t budget, std::uint64_t master_seed,
                                       int workers = 1);

// Table whose stored vectors are mixture draws; config c uses stream
// (master_seed, c).
PerformanceTable build_table_from_mixtures(
    std::string function_id,
    const std::vector<std::pair<std::string, MixtureSpec>>& configs, int samples_per_config,
    std::uint64_t master_seed);

const char* to_string(ToyFunction f);
const char* to_string(OptimizerKind k);

}  // namespace relibench
