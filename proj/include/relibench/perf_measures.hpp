#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "relibench/errors.hpp"

namespace relibench {

// Column entry for a target that was never reached within the budget.
inline constexpr double kNeverHit = std::numeric_limits<double>::infinity();

// A recorded improvement event: best-so-far precision after `evaluations`
// function calls. Precision is distance to the optimum in objective space.
struct TrajectoryPoint {
  std::int64_t evaluations = 0;
  double best_precision = 0.0;
};

// One optimizer run as a monotone best-so-far curve. Evaluation counts are
// strictly increasing (first one >= 1) and precision never increases.
struct RunTrajectory {
  std::string config_id;
  std::string function_id;
  std::string run_id;
  std::vector<TrajectoryPoint> points;

  // Throws DataError if the invariants above do not hold.
  void validate() const;
};

// Ordered precision targets, strictly descending and positive.
class TargetSet {
 public:
  explicit TargetSet(Eigen::ArrayXd targets);

  const Eigen::ArrayXd& values() const { return targets_; }
  Eigen::Index size() const { return targets_.size(); }
  double operator[](Eigen::Index i) const { return targets_(i); }

 private:
  Eigen::ArrayXd targets_;
};

// `count` targets geometrically spaced from `upper` down to `lower`,
// endpoints included.
TargetSet default_target_set(int count = 51, double upper = 1e2, double lower = 1e-8);

// First-hitting evaluation counts: one row per run, one column per target
// (same order as the TargetSet). Finite entries lie in [1, budget]; targets
// never reached hold kNeverHit. Within a row entries are non-decreasing,
// since targets get harder left to right.
class HittingTimeMatrix {
 public:
  HittingTimeMatrix(std::int64_t budget, Eigen::MatrixXd times);

  std::int64_t budget() const { return budget_; }
  Eigen::Index runs() const { return times_.rows(); }
  Eigen::Index num_targets() const { return times_.cols(); }
  const Eigen::MatrixXd& times() const { return times_; }

 private:
  std::int64_t budget_;
  Eigen::MatrixXd times_;  // runs x targets
};

// Hitting times of one run against every target: the smallest recorded
// evaluation count whose best-so-far precision is <= the target, or kNeverHit.
// Requires a valid nonempty trajectory and budget >= its last evaluation
// count; best-so-far persists for evaluations past the last recorded point.
Eigen::ArrayXd first_hitting_times(const RunTrajectory& traj, const TargetSet& targets,
                                   std::int64_t budget);

// Stacks first_hitting_times rows for a set of runs.
HittingTimeMatrix hitting_time_matrix(const std::vector<RunTrajectory>& runs,
                                      const TargetSet& targets, std::int64_t budget);

// Fraction of (run, target) pairs hit by evaluation t, for t in [1, budget].
double ecdf_value(const HittingTimeMatrix& hits, std::int64_t t);

// AUC = sum of ecdf_value over the integer grid t = 1..budget; lies in
// [0, budget] and attains budget when every target is hit at t = 1.
double auc(const HittingTimeMatrix& hits);

// AOC = budget - AUC. Minimised by better anytime performance.
double aoc(const HittingTimeMatrix& hits);

// AOC of a single run.
double aoc_of_run(const RunTrajectory& traj, const TargetSet& targets, std::int64_t budget);

}  // namespace relibench
