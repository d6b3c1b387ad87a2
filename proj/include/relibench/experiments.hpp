#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relibench/performance_table.hpp"
#include "relibench/racing.hpp"
#include "relibench/rng.hpp"

namespace relibench {

// --- best-by-mean selection under resampling --------------------------------

struct LossDistribution {
  int sample_size = 0;
  Eigen::ArrayXd losses;  // one per repetition, all >= 0
};

// For each repetition: draw `size` values per configuration, select the
// lowest sample mean, record the relative true-mean gap to the actual best.
// Repetition r uses stream (seed, r) for every size, so sizes are paired.
std::map<int, LossDistribution> best_by_mean_loss(const PerformanceTable& table,
                                                  const std::vector<int>& sizes, int reps,
                                                  std::uint64_t seed, int workers = 1);

struct UnderestimationResult {
  int sample_size = 0;
  Eigen::ArrayXd errors;        // (true - sample mean) / true, per kept repetition
  std::int64_t excluded = 0;    // repetitions whose winner has true mean 0
};

// Signed relative error of the selected configuration's sample mean against
// its own true mean; positive means the winner looked better than it is.
std::map<int, UnderestimationResult> underestimation_error(const PerformanceTable& table,
                                                           const std::vector<int>& sizes,
                                                           int reps, std::uint64_t seed,
                                                           int workers = 1);

// --- pairwise comparisons ----------------------------------------------------

enum class SampleSource { EMPIRICAL, NORMAL };
enum class CompareMethod { MEANS, T_TEST, WILCOXON };

struct PairwiseRecord {
  std::string config_a;
  std::string config_b;
  double true_mean_gap = 0.0;  // |mu_a - mu_b| / max(mu_a, mu_b)
  double correct_fraction = 0.0;
  double incorrect_fraction = 0.0;
  double inconclusive_fraction = 0.0;
};

struct PairwiseStudy {
  std::vector<PairwiseRecord> records;  // one per non-excluded pair
  std::int64_t excluded_pairs = 0;      // pairs with exactly equal true means
};

// Mean-based pairwise decisions over uniformly random configuration pairs,
// sampling either the stored values or their normal surrogates.
PairwiseStudy pairwise_decisions(const PerformanceTable& table, int n_pairs, int k, int reps,
                                 SampleSource source, std::uint64_t seed, int workers = 1);

struct BinnedVerdicts {
  Eigen::ArrayXd bin_edges;  // ascending, bins + 1 entries
  Eigen::ArrayXd correct;    // per-bin mean fractions; NaN where the bin is empty
  Eigen::ArrayXd incorrect;
  Eigen::ArrayXd inconclusive;
  Eigen::ArrayXi counts;  // pairs per bin
};

struct CorrectnessStudy {
  std::vector<PairwiseRecord> records;
  BinnedVerdicts bins;
  std::int64_t excluded_pairs = 0;
  // Fraction of pairs whose incorrect rate exceeds alpha.
  double fraction_exceeding_alpha = 0.0;
};

// Classifies repeated pairwise comparisons as correct / incorrect /
// inconclusive against the true-mean ordering, binned by normalized gap.
CorrectnessStudy test_correctness(const PerformanceTable& table, CompareMethod method,
                                  int n_pairs, int k, int reps, double alpha,
                                  std::uint64_t seed, int workers = 1, int bins = 20);

// --- race studies -------------------------------------------------------------

struct RaceStudyVariant {
  std::string label;
  RaceSpec spec;
};

struct RaceStudyResult {
  std::string label;
  RaceSpec spec;
  Eigen::ArrayXd losses;         // per repetition
  Eigen::ArrayXd total_samples;  // per repetition
  double mean_loss = 0.0;
  double mean_total_samples = 0.0;
  std::int64_t sum_total_samples = 0;
};

// Runs each variant `reps` times with per-repetition streams; repetition r of
// variant v uses stream (seed, v * reps + r).
std::vector<RaceStudyResult> race_loss_study(const PerformanceTable& table,
                                             const std::vector<RaceStudyVariant>& variants,
                                             int reps, std::uint64_t seed, int workers = 1);

// Area under the empirical CDF of losses over [0, loss_grid_max], normalized
// to [0, 1]; 1 means every loss is zero.
double loss_curve_auc(Eigen::Ref<const Eigen::ArrayXd> losses, double loss_grid_max);

// --- rank / cumulative-mean exports ------------------------------------------

struct RankChangeRow {
  std::string config_id;
  int original_rank = 0;   // rank by true mean, 1 = best
  int resampled_rank = 0;  // rank by the resampled mean
};

// Ranks by true mean vs. by a fresh size-sample mean, for every configuration.
std::vector<RankChangeRow> rank_change_table(const PerformanceTable& table, int sample_size,
                                             RngStream& rng);

// Cumulative means of n draws with replacement from one configuration.
Eigen::ArrayXd cumulative_means(const PerformanceTable& table, const std::string& config_id,
                                int n, RngStream& rng);

const char* to_string(SampleSource s);
const char* to_string(CompareMethod m);
SampleSource sample_source_from_string(const std::string& name);
CompareMethod compare_method_from_string(const std::string& name);

}  // namespace relibench
