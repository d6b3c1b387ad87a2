#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "relibench/perf_measures.hpp"
#include "relibench/synth.hpp"

using namespace relibench;

namespace {

MixtureSpec point_mass(double value) {
  MixtureSpec spec;
  spec.components.push_back({1.0, MixtureFamily::POINT_MASS, value, 0.0});
  return spec;
}

}  // namespace

TEST_CASE("point mass mixture draws its single value") {
  RngStream rng(1, 0);
  const Eigen::ArrayXd draws = sample_mixture(point_mass(7.0), 100, rng);
  CHECK((draws == 7.0).all());
}

TEST_CASE("mixture mean matches the weighted component means") {
  MixtureSpec spec;
  spec.components.push_back({0.8, MixtureFamily::NORMAL, 100.0, 10.0});
  spec.components.push_back({0.2, MixtureFamily::NORMAL, 500.0, 20.0});
  CHECK(spec.mean() == doctest::Approx(180.0).epsilon(1e-12));
  RngStream rng(3, 0);
  const Eigen::ArrayXd draws = sample_mixture(spec, 100000, rng);
  // mixture sd ~160.5, so 3 standard errors ~1.52
  CHECK(std::fabs(draws.mean() - 180.0) < 1.6);
}

TEST_CASE("mixture draws are clamped to the truncation interval") {
  MixtureSpec spec;
  spec.components.push_back({1.0, MixtureFamily::NORMAL, -50.0, 1.0});
  RngStream rng(5, 0);
  const Eigen::ArrayXd draws = sample_mixture(spec, 200, rng);
  CHECK((draws == 0.0).all());

  MixtureSpec high;
  high.components.push_back({1.0, MixtureFamily::NORMAL, 1e7, 1.0});
  high.clamp_max = 10000.0;
  RngStream rng2(5, 1);
  CHECK((sample_mixture(high, 50, rng2) == 10000.0).all());
}

TEST_CASE("lognormal component mean") {
  MixtureSpec spec;
  spec.components.push_back({1.0, MixtureFamily::LOGNORMAL, 3.0, 0.5});
  spec.clamp_max = 1e9;
  CHECK(spec.mean() == doctest::Approx(std::exp(3.125)).epsilon(1e-12));
  RngStream rng(9, 0);
  const Eigen::ArrayXd draws = sample_mixture(spec, 100000, rng);
  CHECK(std::fabs(draws.mean() - std::exp(3.125)) < 0.3);
}

TEST_CASE("mixture validation") {
  MixtureSpec bad;
  bad.components.push_back({0.5, MixtureFamily::POINT_MASS, 1.0, 0.0});
  CHECK_THROWS_AS(bad.validate(), ParameterError);  // weights sum to 0.5
  bad.components.push_back({0.6, MixtureFamily::POINT_MASS, 2.0, 0.0});
  CHECK_THROWS_AS(bad.validate(), ParameterError);  // sum to 1.1
  MixtureSpec empty;
  CHECK_THROWS_AS(empty.validate(), ParameterError);
  RngStream rng(1, 1);
  CHECK_THROWS_AS(sample_mixture(empty, 10, rng), ParameterError);
}

TEST_CASE("random search with budget 1 records exactly the first evaluation") {
  const ToyProblem sphere{ToyFunction::SPHERE, 5};
  RngStream rng(11, 0);
  const RunTrajectory traj =
      run_toy_optimizer(sphere, OptimizerKind::RANDOM_SEARCH, {}, 1, rng);
  REQUIRE(traj.points.size() == 1);
  CHECK(traj.points[0].evaluations == 1);
  CHECK(traj.points[0].best_precision >= 0.0);
  CHECK(traj.points[0].best_precision <= 125.0);  // sup of sphere on the box
}

TEST_CASE("generated trajectories always satisfy the run invariants") {
  const std::vector<ToyFunction> functions = {ToyFunction::SPHERE, ToyFunction::RASTRIGIN,
                                              ToyFunction::STEP_PLATEAU};
  const std::vector<OptimizerKind> optimizers = {OptimizerKind::RANDOM_SEARCH,
                                                 OptimizerKind::STEP_SIZE_ES};
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    for (const auto f : functions)
      for (const auto o : optimizers) {
        RngStream rng(seed, 77);
        const ToyProblem problem{f, 1 + static_cast<int>(seed % 6)};
        const RunTrajectory traj = run_toy_optimizer(problem, o, {}, 200, rng);
        CHECK_NOTHROW(traj.validate());
        CHECK(traj.points.back().evaluations <= 200);
        CHECK(traj.points.front().evaluations == 1);
      }
  }
}

TEST_CASE("step-size ES reaches 1e-8 precision on the 5d sphere") {
  const ToyProblem sphere{ToyFunction::SPHERE, 5};
  int solved = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    RngStream rng(2025, run);
    const RunTrajectory traj =
        run_toy_optimizer(sphere, OptimizerKind::STEP_SIZE_ES, {}, 10000, rng);
    if (traj.points.back().best_precision <= 1e-8) ++solved;
  }
  CHECK(solved >= 90);
}

TEST_CASE("ES rejects invalid parameters") {
  const ToyProblem sphere{ToyFunction::SPHERE, 5};
  RngStream rng(1, 0);
  OptimizerParams params;
  params.initial_step = 0.0;
  CHECK_THROWS_AS(run_toy_optimizer(sphere, OptimizerKind::STEP_SIZE_ES, params, 10, rng),
                  ParameterError);
  CHECK_THROWS_AS(run_toy_optimizer(sphere, OptimizerKind::RANDOM_SEARCH, {}, 0, rng),
                  ParameterError);
}

TEST_CASE("random search AOC distribution on the plateau function is bimodal") {
  const ToyProblem plateau{ToyFunction::STEP_PLATEAU, 5};
  const TargetSet targets = default_target_set();
  const std::int64_t budget = 1000;
  const int runs = 200;
  Eigen::ArrayXd aocs(runs);
  for (int r = 0; r < runs; ++r) {
    RngStream rng(31337, static_cast<std::uint64_t>(r));
    const RunTrajectory traj =
        run_toy_optimizer(plateau, OptimizerKind::RANDOM_SEARCH, {}, budget, rng);
    aocs(r) = aoc_of_run(traj, targets, budget);
  }
  // histogram gap heuristic: mass piles up near zero (runs that found the
  // basin early) and at the stall value (runs that never did), with a thin
  // valley between them
  const double top = aocs.maxCoeff();
  REQUIRE(top > 0.0);
  int low = 0, valley = 0, high = 0;
  for (int r = 0; r < runs; ++r) {
    if (aocs(r) < 0.3 * top) ++low;
    if (aocs(r) >= 0.70 * top && aocs(r) < 0.92 * top) ++valley;
    if (aocs(r) >= 0.92 * top) ++high;
  }
  CHECK(low >= runs / 5);
  CHECK(high >= runs / 10);
  CHECK(valley * 2 < high);
}

TEST_CASE("single config, single run table") {
  const ToyProblem sphere{ToyFunction::SPHERE, 3};
  const TargetSet targets = default_target_set();
  const PerformanceTable table = build_table_from_runs(
      sphere, {{"only", OptimizerKind::RANDOM_SEARCH, {}}}, 1, targets, 100, 4);
  CHECK(table.num_configs() == 1);
  CHECK(table.samples("only").size() == 1);
  CHECK(table.function_id() == "sphere");
}

TEST_CASE("table shape is configs x runs and generation is deterministic") {
  const ToyProblem sphere{ToyFunction::SPHERE, 2};
  const TargetSet targets = default_target_set(11, 1e2, 1e-4);
  std::vector<OptimizerConfig> configs;
  for (int c = 0; c < 5; ++c)
    configs.push_back({"c" + std::to_string(c), OptimizerKind::RANDOM_SEARCH, {}});
  const PerformanceTable t1 = build_table_from_runs(sphere, configs, 20, targets, 50, 9, 1);
  const PerformanceTable t2 = build_table_from_runs(sphere, configs, 20, targets, 50, 9, 2);
  CHECK(t1.num_configs() == 5);
  for (const auto& [id, values] : t1.entries()) {
    CHECK(values.size() == 20);
    CHECK((values == t2.samples(id)).all());  // worker count cannot matter
  }
}

TEST_CASE("better step policy gives lower mean AOC on the sphere") {
  const ToyProblem sphere{ToyFunction::SPHERE, 5};
  const TargetSet targets = default_target_set();
  std::vector<OptimizerConfig> configs;
  configs.push_back({"good", OptimizerKind::STEP_SIZE_ES, {2.5, 0.8}});
  configs.push_back({"too_big", OptimizerKind::STEP_SIZE_ES, {80.0, 0.8}});
  configs.push_back({"too_small", OptimizerKind::STEP_SIZE_ES, {1e-4, 0.8}});
  const PerformanceTable table =
      build_table_from_runs(sphere, configs, 50, targets, 300, 5150, 2);
  const double good = true_mean(table, "good");
  const double big = true_mean(table, "too_big");
  const double tiny = true_mean(table, "too_small");
  CHECK(good < big);
  CHECK(big < tiny);
}

TEST_CASE("mixture-backed tables reproduce their specs") {
  std::vector<std::pair<std::string, MixtureSpec>> configs;
  configs.emplace_back("p", point_mass(3.0));
  MixtureSpec normal;
  normal.components.push_back({1.0, MixtureFamily::NORMAL, 100.0, 5.0});
  configs.emplace_back("n", normal);
  const PerformanceTable table = build_table_from_mixtures("mix", configs, 300, 17);
  CHECK((table.samples("p") == 3.0).all());
  CHECK(std::fabs(true_mean(table, "n") - 100.0) < 1.0);
}
