#include "relibench/synth.hpp"

#include <algorithm>
#include <cmath>

#include "relibench/parallel.hpp"

namespace relibench {

namespace {

constexpr double kBoxHalfWidth = 5.0;
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Radius of the STEP_PLATEAU basin; sized so uniform sampling of the 5-d box
// lands inside with probability ~1.5e-3 per evaluation. At a budget of 1000
// evaluations roughly a fifth of the runs never find the basin and stall on
// the shelves, which splits the AOC distribution into two modes.
constexpr double kPlateauBasinRadius = 1.95;
constexpr double kPlateauBasinValue = 1e-9;

double component_mean(const MixtureComponent& c) {
  switch (c.family) {
    case MixtureFamily::NORMAL:
      return c.param1;
    case MixtureFamily::LOGNORMAL:
      return std::exp(c.param1 + 0.5 * c.param2 * c.param2);
    case MixtureFamily::POINT_MASS:
      return c.param1;
  }
  return 0.0;
}

double draw_component(const MixtureComponent& c, RngStream& rng) {
  switch (c.family) {
    case MixtureFamily::NORMAL:
      return rng.normal(c.param1, c.param2);
    case MixtureFamily::LOGNORMAL:
      return std::exp(rng.normal(c.param1, c.param2));
    case MixtureFamily::POINT_MASS:
      return c.param1;
  }
  return 0.0;
}

Eigen::VectorXd uniform_in_box(int dimension, RngStream& rng) {
  Eigen::VectorXd x(dimension);
  for (int i = 0; i < dimension; ++i)
    x(i) = kBoxHalfWidth * (2.0 * rng.uniform01() - 1.0);
  return x;
}

}  // namespace

void MixtureSpec::validate() const {
  if (components.empty()) throw ParameterError("MixtureSpec: no components");
  double weight_sum = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0) || c.weight > 1.0)
      throw ParameterError("MixtureSpec: component weights must lie in (0, 1]");
    weight_sum += c.weight;
    switch (c.family) {
      case MixtureFamily::NORMAL:
      case MixtureFamily::LOGNORMAL:
        if (!(c.param2 >= 0.0) || !std::isfinite(c.param1) || !std::isfinite(c.param2))
          throw ParameterError("MixtureSpec: invalid location/scale parameters");
        break;
      case MixtureFamily::POINT_MASS:
        if (!std::isfinite(c.param1))
          throw ParameterError("MixtureSpec: point mass value must be finite");
        break;
    }
  }
  if (std::fabs(weight_sum - 1.0) > 1e-9)
    throw ParameterError("MixtureSpec: component weights must sum to 1");
  if (!(clamp_max > clamp_min))
    throw ParameterError("MixtureSpec: clamp_max must exceed clamp_min");
}

double MixtureSpec::mean() const {
  double m = 0.0;
  for (const auto& c : components) m += c.weight * component_mean(c);
  return m;
}

Eigen::ArrayXd sample_mixture(const MixtureSpec& spec, int n, RngStream& rng) {
  spec.validate();
  if (n < 1) throw ParameterError("sample_mixture: n must be >= 1");
  Eigen::ArrayXd out(n);
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    const MixtureComponent* chosen = &spec.components.back();
    for (const auto& c : spec.components) {
      if (u < c.weight) {
        chosen = &c;
        break;
      }
      u -= c.weight;
    }
    out(i) = std::clamp(draw_component(*chosen, rng), spec.clamp_min, spec.clamp_max);
  }
  return out;
}

double evaluate(const ToyProblem& problem, const Eigen::VectorXd& x) {
  if (problem.dimension < 1) throw ParameterError("ToyProblem: dimension must be >= 1");
  if (x.size() != problem.dimension)
    throw ParameterError("evaluate: point dimension mismatch");
  switch (problem.function) {
    case ToyFunction::SPHERE:
      return x.squaredNorm();
    case ToyFunction::RASTRIGIN: {
      double sum = 10.0 * problem.dimension;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        sum += x(i) * x(i) - 10.0 * std::cos(kTwoPi * x(i));
      return std::max(0.0, sum);
    }
    case ToyFunction::STEP_PLATEAU: {
      // Flat shelves everywhere except a small basin around the optimum:
      // local search stalls on a shelf, so a run's quality is decided by
      // whether the basin is ever sampled. That makes the AOC distribution
      // over independent runs bimodal.
      const double r = x.norm();
      if (r <= kPlateauBasinRadius) return kPlateauBasinValue;
      return 1.0 + std::floor(r);
    }
  }
  throw ParameterError("evaluate: unknown toy function");
}

RunTrajectory run_toy_optimizer(const ToyProblem& problem, OptimizerKind kind,
                                const OptimizerParams& params, std::int64_t budget,
                                RngStream& rng, std::string config_id, std::string run_id) {
  if (budget < 1) throw ParameterError("run_toy_optimizer: budget must be >= 1");
  if (kind == OptimizerKind::STEP_SIZE_ES) {
    if (!(params.initial_step > 0.0))
      throw ParameterError("run_toy_optimizer: initial_step must be positive");
    if (!(params.adapt_rate > 0.0))
      throw ParameterError("run_toy_optimizer: adapt_rate must be positive");
  }

  RunTrajectory traj;
  traj.config_id = std::move(config_id);
  traj.function_id = to_string(problem.function);
  traj.run_id = std::move(run_id);

  Eigen::VectorXd x = uniform_in_box(problem.dimension, rng);
  double fx = evaluate(problem, x);
  double best = fx;
  traj.points.push_back({1, best});

  if (kind == OptimizerKind::RANDOM_SEARCH) {
    for (std::int64_t t = 2; t <= budget; ++t) {
      const Eigen::VectorXd y = uniform_in_box(problem.dimension, rng);
      const double fy = evaluate(problem, y);
      if (fy < best) {
        best = fy;
        traj.points.push_back({t, best});
      }
    }
    return traj;
  }

  // (1+1)-ES with multiplicative 1/5th-success step adaptation: a success
  // grows the step by exp(adapt_rate / d), a failure shrinks it by a quarter
  // of that exponent, which is stationary at a 1/5 success rate.
  const double d = static_cast<double>(problem.dimension);
  const double up = std::exp(params.adapt_rate / d);
  const double down = std::exp(-0.25 * params.adapt_rate / d);
  double sigma = params.initial_step;
  for (std::int64_t t = 2; t <= budget; ++t) {
    Eigen::VectorXd y(problem.dimension);
    for (int i = 0; i < problem.dimension; ++i) y(i) = x(i) + sigma * rng.normal();
    const double fy = evaluate(problem, y);
    if (fy < fx) {
      x = y;
      fx = fy;
      sigma *= up;
    } else {
      sigma *= down;
    }
    sigma = std::max(sigma, 1e-12);
    if (fx < best) {
      best = fx;
      traj.points.push_back({t, best});
    }
  }
  return traj;
}

PerformanceTable build_table_from_runs(const ToyProblem& problem,
                                       const std::vector<OptimizerConfig>& configs,
                                       int runs_per_config, const TargetSet& targets,
                                       std::int64_t budget, std::uint64_t master_seed,
                                       int workers) {
  if (configs.empty()) throw ParameterError("build_table_from_runs: no configurations");
  if (runs_per_config < 1)
    throw ParameterError("build_table_from_runs: runs_per_config must be >= 1");

  const std::size_t total = configs.size() * static_cast<std::size_t>(runs_per_config);
  std::vector<double> aoc_values(total);
  parallel_for(total, workers, [&](std::size_t item) {
    const std::size_t c = item / static_cast<std::size_t>(runs_per_config);
    const std::size_t r = item % static_cast<std::size_t>(runs_per_config);
    RngStream rng(master_seed, item);
    const RunTrajectory traj =
        run_toy_optimizer(problem, configs[c].kind, configs[c].params, budget, rng,
                          configs[c].config_id, std::to_string(r));
    aoc_values[item] = aoc_of_run(traj, targets, budget);
  });

  std::map<std::string, Eigen::ArrayXd> entries;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    Eigen::ArrayXd col(runs_per_config);
    for (int r = 0; r < runs_per_config; ++r)
      col(r) = aoc_values[c * static_cast<std::size_t>(runs_per_config) +
                          static_cast<std::size_t>(r)];
    if (!entries.emplace(configs[c].config_id, std::move(col)).second)
      throw ParameterError("build_table_from_runs: duplicate config_id '" +
                           configs[c].config_id + "'");
  }
  return PerformanceTable(to_string(problem.function), std::move(entries));
}

PerformanceTable build_table_from_mixtures(
    std::string function_id,
    const std::vector<std::pair<std::string, MixtureSpec>>& configs, int samples_per_config,
    std::uint64_t master_seed) {
  if (configs.empty()) throw ParameterError("build_table_from_mixtures: no configurations");
  if (samples_per_config < 1)
    throw ParameterError("build_table_from_mixtures: samples_per_config must be >= 1");
  std::map<std::string, Eigen::ArrayXd> entries;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    RngStream rng(master_seed, c);
    if (!entries.emplace(configs[c].first,
                         sample_mixture(configs[c].second, samples_per_config, rng))
             .second)
      throw ParameterError("build_table_from_mixtures: duplicate config_id '" +
                           configs[c].first + "'");
  }
  return PerformanceTable(std::move(function_id), std::move(entries));
}

const char* to_string(ToyFunction f) {
  switch (f) {
    case ToyFunction::SPHERE:
      return "sphere";
    case ToyFunction::RASTRIGIN:
      return "rastrigin";
    case ToyFunction::STEP_PLATEAU:
      return "step_plateau";
  }
  return "unknown";
}

const char* to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::RANDOM_SEARCH:
      return "random_search";
    case OptimizerKind::STEP_SIZE_ES:
      return "step_size_es";
  }
  return "unknown";
}

}  // namespace relibench
