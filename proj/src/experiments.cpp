#include "relibench/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "relibench/parallel.hpp"
#include "relibench/stats.hpp"

namespace relibench {

namespace {

struct TableView {
  std::vector<std::string> ids;
  std::vector<const Eigen::ArrayXd*> samples;
  std::vector<double> true_means;
  double best_mean = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;

  explicit TableView(const PerformanceTable& table) {
    for (const auto& [id, values] : table.entries()) {
      ids.push_back(id);
      samples.push_back(&values);
      true_means.push_back(values.mean());
    }
    for (std::size_t i = 0; i < true_means.size(); ++i)
      if (true_means[i] < best_mean) {
        best_mean = true_means[i];
        best_index = i;
      }
  }

  double loss_of(std::size_t winner) const {
    const double winner_mean = true_means[winner];
    if (winner_mean <= best_mean) return 0.0;
    if (best_mean > 0.0) return (winner_mean - best_mean) / best_mean;
    return std::numeric_limits<double>::infinity();
  }
};

double mean_of_draws(const Eigen::ArrayXd& values, int k, RngStream& rng) {
  double sum = 0.0;
  const auto n = static_cast<std::size_t>(values.size());
  for (int i = 0; i < k; ++i)
    sum += values(static_cast<Eigen::Index>(rng.uniform_index(n)));
  return sum / static_cast<double>(k);
}

// Lowest sample mean over all configurations after k fresh draws each; ties
// stay with the lexicographically earlier configuration.
std::pair<std::size_t, double> select_by_sample_mean(const TableView& view, int k,
                                                     RngStream& rng) {
  std::size_t winner = 0;
  double winner_mean = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < view.samples.size(); ++c) {
    const double m = mean_of_draws(*view.samples[c], k, rng);
    if (m < winner_mean) {
      winner_mean = m;
      winner = c;
    }
  }
  return {winner, winner_mean};
}

void check_sizes(const std::vector<int>& sizes, int reps) {
  if (sizes.empty()) throw ParameterError("experiment: no sample sizes given");
  for (const int s : sizes)
    if (s < 1) throw ParameterError("experiment: sample sizes must be >= 1");
  if (reps < 1) throw ParameterError("experiment: reps must be >= 1");
}

std::pair<std::size_t, std::size_t> draw_pair(std::size_t n, RngStream& rng) {
  const std::size_t i = rng.uniform_index(n);
  std::size_t j = rng.uniform_index(n - 1);
  if (j >= i) ++j;
  return {i, j};
}

double gap_of(double mu_a, double mu_b) {
  return std::fabs(mu_a - mu_b) / std::max(mu_a, mu_b);
}

BinnedVerdicts bin_records(const std::vector<PairwiseRecord>& records, int bins) {
  BinnedVerdicts out;
  out.bin_edges = Eigen::ArrayXd::LinSpaced(bins + 1, 0.0, 1.0);
  out.correct = Eigen::ArrayXd::Zero(bins);
  out.incorrect = Eigen::ArrayXd::Zero(bins);
  out.inconclusive = Eigen::ArrayXd::Zero(bins);
  out.counts = Eigen::ArrayXi::Zero(bins);
  for (const auto& rec : records) {
    const int bin = std::min(bins - 1, static_cast<int>(rec.true_mean_gap * bins));
    out.correct(bin) += rec.correct_fraction;
    out.incorrect(bin) += rec.incorrect_fraction;
    out.inconclusive(bin) += rec.inconclusive_fraction;
    out.counts(bin) += 1;
  }
  for (int b = 0; b < bins; ++b) {
    if (out.counts(b) == 0) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out.correct(b) = nan;
      out.incorrect(b) = nan;
      out.inconclusive(b) = nan;
    } else {
      out.correct(b) /= out.counts(b);
      out.incorrect(b) /= out.counts(b);
      out.inconclusive(b) /= out.counts(b);
    }
  }
  return out;
}

enum class PairOutcome { CORRECT, INCORRECT, INCONCLUSIVE };

}  // namespace

std::map<int, LossDistribution> best_by_mean_loss(const PerformanceTable& table,
                                                  const std::vector<int>& sizes, int reps,
                                                  std::uint64_t seed, int workers) {
  check_sizes(sizes, reps);
  const TableView view(table);
  std::map<int, LossDistribution> out;
  for (const int size : sizes) {
    LossDistribution dist;
    dist.sample_size = size;
    dist.losses = Eigen::ArrayXd::Zero(reps);
    parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t rep) {
      RngStream rng(seed, rep);  // paired across sizes
      const auto [winner, winner_mean] = select_by_sample_mean(view, size, rng);
      (void)winner_mean;
      dist.losses(static_cast<Eigen::Index>(rep)) = view.loss_of(winner);
    });
    out.emplace(size, std::move(dist));
  }
  return out;
}

std::map<int, UnderestimationResult> underestimation_error(const PerformanceTable& table,
                                                           const std::vector<int>& sizes,
                                                           int reps, std::uint64_t seed,
                                                           int workers) {
  check_sizes(sizes, reps);
  const TableView view(table);
  std::map<int, UnderestimationResult> out;
  for (const int size : sizes) {
    Eigen::ArrayXd errors(reps);
    std::vector<char> keep(static_cast<std::size_t>(reps), 1);
    parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t rep) {
      RngStream rng(seed, rep);
      const auto [winner, winner_mean] = select_by_sample_mean(view, size, rng);
      const double true_winner_mean = view.true_means[winner];
      if (true_winner_mean == 0.0) {
        keep[rep] = 0;
        errors(static_cast<Eigen::Index>(rep)) = 0.0;
        return;
      }
      errors(static_cast<Eigen::Index>(rep)) =
          (true_winner_mean - winner_mean) / true_winner_mean;
    });
    UnderestimationResult result;
    result.sample_size = size;
    result.excluded =
        reps - std::accumulate(keep.begin(), keep.end(), std::int64_t{0});
    result.errors = Eigen::ArrayXd(reps - result.excluded);
    Eigen::Index w = 0;
    for (int rep = 0; rep < reps; ++rep)
      if (keep[static_cast<std::size_t>(rep)]) result.errors(w++) = errors(rep);
    out.emplace(size, std::move(result));
  }
  return out;
}

PairwiseStudy pairwise_decisions(const PerformanceTable& table, int n_pairs, int k, int reps,
                                 SampleSource source, std::uint64_t seed, int workers) {
  if (table.num_configs() < 2)
    throw ParameterError("pairwise_decisions: need at least 2 configurations");
  if (n_pairs < 1 || k < 1 || reps < 1)
    throw ParameterError("pairwise_decisions: n_pairs, k, reps must be >= 1");
  const TableView view(table);
  const std::size_t n = view.ids.size();

  std::vector<NormalSurrogate> surrogates;
  if (source == SampleSource::NORMAL) {
    surrogates.reserve(n);
    for (std::size_t c = 0; c < n; ++c)
      surrogates.push_back(normal_surrogate(table, view.ids[c]));
  }

  // Stream 0 picks the pairs; pair p then owns stream p + 1.
  RngStream pair_rng(seed, 0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(static_cast<std::size_t>(n_pairs));
  for (auto& p : pairs) p = draw_pair(n, pair_rng);

  std::vector<PairwiseRecord> all(pairs.size());
  std::vector<char> excluded(pairs.size(), 0);
  parallel_for(pairs.size(), workers, [&](std::size_t p) {
    const auto [ia, ib] = pairs[p];
    const double mu_a = view.true_means[ia];
    const double mu_b = view.true_means[ib];
    if (mu_a == mu_b) {
      excluded[p] = 1;
      return;
    }
    RngStream rng(seed, p + 1);
    int incorrect = 0;
    for (int rep = 0; rep < reps; ++rep) {
      double ma, mb;
      if (source == SampleSource::EMPIRICAL) {
        ma = mean_of_draws(*view.samples[ia], k, rng);
        mb = mean_of_draws(*view.samples[ib], k, rng);
      } else {
        const auto surrogate_mean = [&](const NormalSurrogate& s) {
          double sum = 0.0;
          for (int i = 0; i < k; ++i) sum += rng.normal(s.mean, s.stddev);
          return sum / static_cast<double>(k);
        };
        ma = surrogate_mean(surrogates[ia]);
        mb = surrogate_mean(surrogates[ib]);
      }
      const bool sample_a_better = ma < mb;
      const bool true_a_better = mu_a < mu_b;
      if (ma == mb || sample_a_better != true_a_better) ++incorrect;
    }
    PairwiseRecord rec;
    rec.config_a = view.ids[ia];
    rec.config_b = view.ids[ib];
    rec.true_mean_gap = gap_of(mu_a, mu_b);
    rec.incorrect_fraction = static_cast<double>(incorrect) / reps;
    rec.correct_fraction = 1.0 - rec.incorrect_fraction;
    rec.inconclusive_fraction = 0.0;
    all[p] = std::move(rec);
  });

  PairwiseStudy study;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (excluded[p])
      ++study.excluded_pairs;
    else
      study.records.push_back(std::move(all[p]));
  }
  return study;
}

CorrectnessStudy test_correctness(const PerformanceTable& table, CompareMethod method,
                                  int n_pairs, int k, int reps, double alpha,
                                  std::uint64_t seed, int workers, int bins) {
  if (table.num_configs() < 2)
    throw ParameterError("test_correctness: need at least 2 configurations");
  if (n_pairs < 1 || k < 1 || reps < 1)
    throw ParameterError("test_correctness: n_pairs, k, reps must be >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ParameterError("test_correctness: alpha must lie in (0, 1)");
  if (bins < 1) throw ParameterError("test_correctness: bins must be >= 1");
  if (method != CompareMethod::MEANS && k < 2)
    throw ParameterError("test_correctness: statistical tests need k >= 2");
  const TableView view(table);
  const std::size_t n = view.ids.size();

  RngStream pair_rng(seed, 0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs(static_cast<std::size_t>(n_pairs));
  for (auto& p : pairs) p = draw_pair(n, pair_rng);

  std::vector<PairwiseRecord> all(pairs.size());
  std::vector<char> excluded(pairs.size(), 0);
  parallel_for(pairs.size(), workers, [&](std::size_t p) {
    const auto [ia, ib] = pairs[p];
    const double mu_a = view.true_means[ia];
    const double mu_b = view.true_means[ib];
    if (mu_a == mu_b) {
      excluded[p] = 1;
      return;
    }
    const bool true_a_better = mu_a < mu_b;
    RngStream rng(seed, p + 1);
    int correct = 0, incorrect = 0, inconclusive = 0;
    Eigen::ArrayXd a(k), b(k);
    for (int rep = 0; rep < reps; ++rep) {
      const auto na = static_cast<std::size_t>(view.samples[ia]->size());
      const auto nb = static_cast<std::size_t>(view.samples[ib]->size());
      for (int i = 0; i < k; ++i)
        a(i) = (*view.samples[ia])(static_cast<Eigen::Index>(rng.uniform_index(na)));
      for (int i = 0; i < k; ++i)
        b(i) = (*view.samples[ib])(static_cast<Eigen::Index>(rng.uniform_index(nb)));

      PairOutcome outcome;
      if (method == CompareMethod::MEANS) {
        const double ma = a.mean(), mb = b.mean();
        outcome = (ma != mb && (ma < mb) == true_a_better) ? PairOutcome::CORRECT
                                                           : PairOutcome::INCORRECT;
      } else {
        const TestVerdict verdict = method == CompareMethod::T_TEST
                                        ? t_test_one_sided(a, b, alpha)
                                        : wilcoxon_rank_sum(a, b, alpha);
        if (verdict.decision == Decision::INCONCLUSIVE)
          outcome = PairOutcome::INCONCLUSIVE;
        else
          outcome = ((verdict.decision == Decision::A_BETTER) == true_a_better)
                        ? PairOutcome::CORRECT
                        : PairOutcome::INCORRECT;
      }
      if (outcome == PairOutcome::CORRECT) ++correct;
      if (outcome == PairOutcome::INCORRECT) ++incorrect;
      if (outcome == PairOutcome::INCONCLUSIVE) ++inconclusive;
    }
    PairwiseRecord rec;
    rec.config_a = view.ids[ia];
    rec.config_b = view.ids[ib];
    rec.true_mean_gap = gap_of(mu_a, mu_b);
    rec.correct_fraction = static_cast<double>(correct) / reps;
    rec.incorrect_fraction = static_cast<double>(incorrect) / reps;
    rec.inconclusive_fraction = static_cast<double>(inconclusive) / reps;
    all[p] = std::move(rec);
  });

  CorrectnessStudy study;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (excluded[p])
      ++study.excluded_pairs;
    else
      study.records.push_back(std::move(all[p]));
  }
  study.bins = bin_records(study.records, bins);
  std::int64_t exceeding = 0;
  for (const auto& rec : study.records)
    if (rec.incorrect_fraction > alpha) ++exceeding;
  study.fraction_exceeding_alpha =
      study.records.empty() ? 0.0
                            : static_cast<double>(exceeding) /
                                  static_cast<double>(study.records.size());
  return study;
}

std::vector<RaceStudyResult> race_loss_study(const PerformanceTable& table,
                                             const std::vector<RaceStudyVariant>& variants,
                                             int reps, std::uint64_t seed, int workers) {
  if (variants.empty()) throw ParameterError("race_loss_study: no variants");
  if (reps < 1) throw ParameterError("race_loss_study: reps must be >= 1");
  for (const auto& v : variants) v.spec.validate();

  std::vector<RaceStudyResult> results(variants.size());
  for (std::size_t v = 0; v < variants.size(); ++v) {
    results[v].label = variants[v].label;
    results[v].spec = variants[v].spec;
    results[v].losses = Eigen::ArrayXd::Zero(reps);
    results[v].total_samples = Eigen::ArrayXd::Zero(reps);
  }

  const std::size_t total_items = variants.size() * static_cast<std::size_t>(reps);
  parallel_for(total_items, workers, [&](std::size_t item) {
    const std::size_t v = item / static_cast<std::size_t>(reps);
    const std::size_t rep = item % static_cast<std::size_t>(reps);
    RngStream rng(seed, item);
    const RaceOutcome outcome = run_selection(table, variants[v].spec, rng);
    results[v].losses(static_cast<Eigen::Index>(rep)) = outcome.loss;
    results[v].total_samples(static_cast<Eigen::Index>(rep)) =
        static_cast<double>(outcome.total_samples);
  });

  for (auto& r : results) {
    r.mean_loss = r.losses.mean();
    r.mean_total_samples = r.total_samples.mean();
    r.sum_total_samples = static_cast<std::int64_t>(r.total_samples.sum());
  }
  return results;
}

double loss_curve_auc(Eigen::Ref<const Eigen::ArrayXd> losses, double loss_grid_max) {
  if (losses.size() == 0) throw ParameterError("loss_curve_auc: empty loss vector");
  if (!(loss_grid_max > 0.0))
    throw ParameterError("loss_curve_auc: loss_grid_max must be positive");
  // ECDF integral over [0, M]: each loss l contributes max(0, M - l).
  const double area =
      (loss_grid_max - losses.min(loss_grid_max)).max(0.0).sum() /
      static_cast<double>(losses.size());
  return area / loss_grid_max;
}

std::vector<RankChangeRow> rank_change_table(const PerformanceTable& table, int sample_size,
                                             RngStream& rng) {
  if (sample_size < 1) throw ParameterError("rank_change_table: sample_size must be >= 1");
  const TableView view(table);
  const std::size_t n = view.ids.size();
  std::vector<double> resampled_means(n);
  for (std::size_t c = 0; c < n; ++c)
    resampled_means[c] = mean_of_draws(*view.samples[c], sample_size, rng);

  const auto ranks_of = [&](const std::vector<double>& means) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
      return means[lhs] < means[rhs];
    });
    std::vector<int> ranks(n);
    for (std::size_t pos = 0; pos < n; ++pos) ranks[order[pos]] = static_cast<int>(pos) + 1;
    return ranks;
  };
  const std::vector<int> original = ranks_of(view.true_means);
  const std::vector<int> resampled = ranks_of(resampled_means);

  std::vector<RankChangeRow> rows(n);
  for (std::size_t c = 0; c < n; ++c)
    rows[c] = RankChangeRow{view.ids[c], original[c], resampled[c]};
  return rows;
}

Eigen::ArrayXd cumulative_means(const PerformanceTable& table, const std::string& config_id,
                                int n, RngStream& rng) {
  if (n < 1) throw ParameterError("cumulative_means: n must be >= 1");
  const Eigen::ArrayXd draws = resample(table, config_id, n, rng);
  Eigen::ArrayXd out(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += draws(i);
    out(i) = sum / static_cast<double>(i + 1);
  }
  return out;
}

const char* to_string(SampleSource s) {
  return s == SampleSource::EMPIRICAL ? "empirical" : "normal";
}

const char* to_string(CompareMethod m) {
  switch (m) {
    case CompareMethod::MEANS:
      return "means";
    case CompareMethod::T_TEST:
      return "t_test";
    case CompareMethod::WILCOXON:
      return "wilcoxon";
  }
  return "unknown";
}

SampleSource sample_source_from_string(const std::string& name) {
  if (name == "empirical") return SampleSource::EMPIRICAL;
  if (name == "normal") return SampleSource::NORMAL;
  throw ParameterError("unknown sample source '" + name + "'");
}

CompareMethod compare_method_from_string(const std::string& name) {
  if (name == "means") return CompareMethod::MEANS;
  if (name == "t_test") return CompareMethod::T_TEST;
  if (name == "wilcoxon") return CompareMethod::WILCOXON;
  throw ParameterError("unknown compare method '" + name + "'");
}

}  // namespace relibench
