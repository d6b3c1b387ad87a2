#include "relibench/perf_measures.hpp"

#include <cmath>
#include <utility>

namespace relibench {

void RunTrajectory::validate() const {
  if (points.empty())
    throw DataError("trajectory " + config_id + "/" + run_id + ": no points");
  std::int64_t prev_eval = 0;
  double prev_prec = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    if (p.evaluations <= prev_eval)
      throw DataError("trajectory " + config_id + "/" + run_id +
                      ": evaluation counts must be strictly increasing and >= 1");
    if (!(p.best_precision >= 0.0) || !std::isfinite(p.best_precision))
      throw DataError("trajectory " + config_id + "/" + run_id +
                      ": best_precision must be finite and >= 0");
    if (p.best_precision > prev_prec)
      throw DataError("trajectory " + config_id + "/" + run_id +
                      ": best_precision must be non-increasing");
    prev_eval = p.evaluations;
    prev_prec = p.best_precision;
  }
}

TargetSet::TargetSet(Eigen::ArrayXd targets) : targets_(std::move(targets)) {
  if (targets_.size() == 0) throw ParameterError("TargetSet: empty target list");
  for (Eigen::Index i = 0; i < targets_.size(); ++i) {
    if (!(targets_(i) > 0.0) || !std::isfinite(targets_(i)))
      throw ParameterError("TargetSet: targets must be positive and finite");
    if (i > 0 && !(targets_(i) < targets_(i - 1)))
      throw ParameterError("TargetSet: targets must be strictly descending");
  }
}

TargetSet default_target_set(int count, double upper, double lower) {
  if (count < 2) throw ParameterError("default_target_set: count must be >= 2");
  if (!(upper > lower) || !(lower > 0.0))
    throw ParameterError("default_target_set: need upper > lower > 0");
  Eigen::ArrayXd targets(count);
  const double step = (std::log10(upper) - std::log10(lower)) / (count - 1);
  for (int j = 0; j < count; ++j)
    targets(j) = std::pow(10.0, std::log10(upper) - step * j);
  targets(0) = upper;
  targets(count - 1) = lower;
  return TargetSet(targets);
}

HittingTimeMatrix::HittingTimeMatrix(std::int64_t budget, Eigen::MatrixXd times)
    : budget_(budget), times_(std::move(times)) {
  if (budget_ < 1) throw ParameterError("HittingTimeMatrix: budget must be >= 1");
  if (times_.rows() == 0 || times_.cols() == 0)
    throw DataError("HittingTimeMatrix: empty matrix");
  for (Eigen::Index i = 0; i < times_.rows(); ++i) {
    double prev = 0.0;
    for (Eigen::Index j = 0; j < times_.cols(); ++j) {
      const double h = times_(i, j);
      if (std::isfinite(h)) {
        if (h < 1.0 || h > static_cast<double>(budget_))
          throw DataError("HittingTimeMatrix: finite hitting time outside [1, budget]");
      } else if (!(h == kNeverHit)) {
        throw DataError("HittingTimeMatrix: entries must be finite or kNeverHit");
      }
      if (h < prev)
        throw DataError("HittingTimeMatrix: hitting times must be non-decreasing "
                        "towards harder targets");
      prev = h;
    }
  }
}

Eigen::ArrayXd first_hitting_times(const RunTrajectory& traj, const TargetSet& targets,
                                   std::int64_t budget) {
  traj.validate();
  if (budget < traj.points.back().evaluations)
    throw DataError("first_hitting_times: budget smaller than last evaluation of " +
                    traj.config_id + "/" + traj.run_id);
  const Eigen::Index k = targets.size();
  Eigen::ArrayXd hits = Eigen::ArrayXd::Constant(k, kNeverHit);
  Eigen::Index ti = 0;
  for (const auto& p : traj.points) {
    while (ti < k && p.best_precision <= targets[ti]) {
      hits(ti) = static_cast<double>(p.evaluations);
      ++ti;
    }
    if (ti == k) break;
  }
  return hits;
}

HittingTimeMatrix hitting_time_matrix(const std::vector<RunTrajectory>& runs,
                                      const TargetSet& targets, std::int64_t budget) {
  if (runs.empty()) throw DataError("hitting_time_matrix: no runs");
  Eigen::MatrixXd times(static_cast<Eigen::Index>(runs.size()), targets.size());
  for (std::size_t i = 0; i < runs.size(); ++i)
    times.row(static_cast<Eigen::Index>(i)) =
        first_hitting_times(runs[i], targets, budget).transpose();
  return HittingTimeMatrix(budget, std::move(times));
}

double ecdf_value(const HittingTimeMatrix& hits, std::int64_t t) {
  if (t < 1 || t > hits.budget())
    throw ParameterError("ecdf_value: t outside [1, budget]");
  const auto& m = hits.times().array();
  const double hit_count =
      static_cast<double>((m <= static_cast<double>(t)).count());
  return hit_count / static_cast<double>(m.size());
}

double auc(const HittingTimeMatrix& hits) {
  // A hit at time h contributes an indicator for every integer t in
  // [h, budget], i.e. budget - h + 1 grid points.
  const auto& m = hits.times().array();
  const double budget = static_cast<double>(hits.budget());
  const double total = m.isFinite().select(budget - m + 1.0, 0.0).sum();
  return total / static_cast<double>(m.size());
}

double aoc(const HittingTimeMatrix& hits) {
  return static_cast<double>(hits.budget()) - auc(hits);
}

double aoc_of_run(const RunTrajectory& traj, const TargetSet& targets, std::int64_t budget) {
  Eigen::MatrixXd row(1, targets.size());
  row.row(0) = first_hitting_times(traj, targets, budget).transpose();
  return aoc(HittingTimeMatrix(budget, std::move(row)));
}

}  // namespace relibench
