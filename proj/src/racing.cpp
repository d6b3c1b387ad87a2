#include "relibench/racing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relibench/stats.hpp"

namespace relibench {

namespace {

// Shared bookkeeping for all selection procedures: per-configuration sample
// vectors in lexicographic id order.
struct RaceState {
  const PerformanceTable* table = nullptr;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> samples;
  std::vector<double> sums;
  std::int64_t total = 0;

  explicit RaceState(const PerformanceTable& t)
      : table(&t), ids(t.config_ids()), samples(ids.size()), sums(ids.size(), 0.0) {}

  void draw(std::size_t i, std::int64_t count, RngStream& rng) {
    const Eigen::ArrayXd chunk =
        resample(*table, ids[i], static_cast<int>(count), rng);
    for (Eigen::Index j = 0; j < chunk.size(); ++j) {
      samples[i].push_back(chunk(j));
      sums[i] += chunk(j);
    }
    total += count;
  }

  double mean(std::size_t i) const {
    return samples[i].empty() ? std::numeric_limits<double>::infinity()
                              : sums[i] / static_cast<double>(samples[i].size());
  }

  Eigen::ArrayXd as_array(std::size_t i) const {
    return Eigen::Map<const Eigen::ArrayXd>(samples[i].data(),
                                            static_cast<Eigen::Index>(samples[i].size()));
  }
};

// Lowest cumulative mean among `alive`; ties fall to the earlier (smaller)
// id because alive is kept sorted.
std::size_t lowest_mean(const RaceState& state, const std::vector<std::size_t>& alive) {
  std::size_t best = alive.front();
  for (const std::size_t i : alive)
    if (state.mean(i) < state.mean(best)) best = i;
  return best;
}

RaceOutcome finish(const RaceState& state, const std::vector<std::size_t>& alive) {
  RaceOutcome outcome;
  for (const std::size_t i : alive) outcome.survivors.push_back(state.ids[i]);
  for (std::size_t i = 0; i < state.ids.size(); ++i)
    outcome.samples_used[state.ids[i]] =
        static_cast<std::int64_t>(state.samples[i].size());
  outcome.total_samples = state.total;

  std::size_t selected = alive.front();
  for (const std::size_t i : alive)
    if (!state.samples[i].empty() && state.mean(i) < state.mean(selected)) selected = i;
  outcome.selected = state.ids[selected];
  outcome.selected_true_mean = true_mean(*state.table, outcome.selected);

  const double best_mean = true_mean(*state.table, best_by_true_mean(*state.table));
  if (outcome.selected_true_mean <= best_mean)
    outcome.loss = 0.0;
  else if (best_mean > 0.0)
    outcome.loss = (outcome.selected_true_mean - best_mean) / best_mean;
  else
    outcome.loss = std::numeric_limits<double>::infinity();
  return outcome;
}

// Applies one elimination test to the alive set; keeps at least the
// incumbent. No-op when any alive configuration has fewer than 2 samples.
void eliminate(RaceState& state, std::vector<std::size_t>& alive, TestKind kind,
               double alpha) {
  if (alive.size() < 2) return;
  std::size_t min_count = std::numeric_limits<std::size_t>::max();
  for (const std::size_t i : alive) min_count = std::min(min_count, state.samples[i].size());
  if (min_count < 2) return;

  if (kind == TestKind::T_TEST) {
    const std::size_t incumbent = lowest_mean(state, alive);
    const Eigen::ArrayXd incumbent_samples = state.as_array(incumbent);
    std::vector<std::size_t> next;
    for (const std::size_t i : alive) {
      if (i == incumbent) {
        next.push_back(i);
        continue;
      }
      const TestVerdict verdict =
          t_test_one_sided(state.as_array(i), incumbent_samples, alpha);
      if (verdict.decision != Decision::B_BETTER) next.push_back(i);
    }
    alive = std::move(next);
    return;
  }

  // Friedman race: blocks are shared resample indices, one row per index.
  const auto m = static_cast<Eigen::Index>(min_count);
  const auto k = static_cast<Eigen::Index>(alive.size());
  Eigen::MatrixXd blocks(m, k);
  for (Eigen::Index col = 0; col < k; ++col)
    for (Eigen::Index row = 0; row < m; ++row)
      blocks(row, col) =
          state.samples[alive[static_cast<std::size_t>(col)]][static_cast<std::size_t>(row)];
  const FriedmanResult result = friedman_test(blocks);
  const std::vector<Eigen::Index> keep = friedman_eliminate(result, blocks, alpha);
  std::vector<std::size_t> next;
  next.reserve(keep.size());
  for (const Eigen::Index col : keep) next.push_back(alive[static_cast<std::size_t>(col)]);
  alive = std::move(next);
}

}  // namespace

void RaceSpec::validate() const {
  if (first_test < 1) throw ParameterError("RaceSpec: first_test must be >= 1");
  if (each_test < 1) throw ParameterError("RaceSpec: each_test must be >= 1");
  if (max_elites < 1) throw ParameterError("RaceSpec: max_elites must be >= 1");
  if (budget_samples < 1) throw ParameterError("RaceSpec: budget_samples must be >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ParameterError("RaceSpec: alpha must lie in (0, 1)");
  if (test_kind == TestKind::SHA && reduction_factor < 2)
    throw ParameterError("RaceSpec: reduction_factor must be >= 2");
}

RaceOutcome run_race(const PerformanceTable& table, const RaceSpec& spec, RngStream& rng) {
  spec.validate();
  if (spec.test_kind != TestKind::T_TEST && spec.test_kind != TestKind::FRIEDMAN)
    throw ParameterError("run_race: spec must use T_TEST or FRIEDMAN");
  if (table.num_configs() < 2)
    throw ParameterError("run_race: need at least 2 configurations");

  RaceState state(table);
  std::vector<std::size_t> alive(state.ids.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  // First round; the budget may truncate it mid-draw, in which case no
  // elimination test runs and the race ends on the exhausted budget.
  bool truncated = false;
  for (const std::size_t i : alive) {
    const std::int64_t affordable =
        std::min<std::int64_t>(spec.first_test, spec.budget_samples - state.total);
    if (affordable < spec.first_test) truncated = true;
    if (affordable <= 0) break;
    state.draw(i, affordable, rng);
  }

  // A race over max_elites or fewer configurations is already settled; the
  // elimination test only runs while the field is larger than that.
  if (!truncated && alive.size() > static_cast<std::size_t>(spec.max_elites))
    eliminate(state, alive, spec.test_kind, spec.alpha);

  while (alive.size() > static_cast<std::size_t>(spec.max_elites)) {
    const std::int64_t round_cost =
        static_cast<std::int64_t>(spec.each_test) * static_cast<std::int64_t>(alive.size());
    if (state.total + round_cost > spec.budget_samples) break;
    for (const std::size_t i : alive) state.draw(i, spec.each_test, rng);
    eliminate(state, alive, spec.test_kind, spec.alpha);
  }
  return finish(state, alive);
}

RaceOutcome run_sampling_only(const PerformanceTable& table, int k, RngStream& rng) {
  if (k < 1) throw ParameterError("run_sampling_only: k must be >= 1");
  RaceState state(table);
  std::vector<std::size_t> alive(state.ids.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  for (const std::size_t i : alive) state.draw(i, k, rng);
  return finish(state, alive);
}

RaceOutcome run_sha(const PerformanceTable& table, int first_test, int reduction_factor,
                    RngStream& rng) {
  if (first_test < 1) throw ParameterError("run_sha: first_test must be >= 1");
  if (reduction_factor < 2) throw ParameterError("run_sha: reduction_factor must be >= 2");

  RaceState state(table);
  std::vector<std::size_t> alive(state.ids.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  std::int64_t round_samples = first_test;
  while (true) {
    for (const std::size_t i : alive) state.draw(i, round_samples, rng);
    if (alive.size() == 1) break;
    const std::size_t keep =
        (alive.size() + static_cast<std::size_t>(reduction_factor) - 1) /
        static_cast<std::size_t>(reduction_factor);
    std::vector<std::size_t> order = alive;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
      return state.mean(lhs) < state.mean(rhs);
    });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    alive = std::move(order);
    if (alive.size() == 1) break;
    round_samples *= 2;
  }
  return finish(state, alive);
}

RaceOutcome run_selection(const PerformanceTable& table, const RaceSpec& spec, RngStream& rng) {
  spec.validate();
  switch (spec.test_kind) {
    case TestKind::T_TEST:
    case TestKind::FRIEDMAN:
      return run_race(table, spec, rng);
    case TestKind::SAMPLING_ONLY:
      return run_sampling_only(table, spec.first_test, rng);
    case TestKind::SHA:
      return run_sha(table, spec.first_test, spec.reduction_factor, rng);
  }
  throw ParameterError("run_selection: unknown test kind");
}

const char* to_string(TestKind k) {
  switch (k) {
    case TestKind::T_TEST:
      return "t_test";
    case TestKind::FRIEDMAN:
      return "friedman";
    case TestKind::SAMPLING_ONLY:
      return "sampling_only";
    case TestKind::SHA:
      return "sha";
  }
  return "unknown";
}

TestKind test_kind_from_string(const std::string& name) {
  if (name == "t_test") return TestKind::T_TEST;
  if (name == "friedman") return TestKind::FRIEDMAN;
  if (name == "sampling_only") return TestKind::SAMPLING_ONLY;
  if (name == "sha") return TestKind::SHA;
  throw ParameterError("unknown test kind '" + name + "'");
}

}  // namespace relibench
