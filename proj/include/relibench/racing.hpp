#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relibench/performance_table.hpp"
#include "relibench/rng.hpp"

namespace relibench {

enum class TestKind { T_TEST, FRIEDMAN, SAMPLING_ONLY, SHA };

// Parameters of one selection procedure. budget_samples caps test-based
// races only; SHA's total is fixed by (n, first_test, reduction_factor).
struct RaceSpec {
  TestKind test_kind = TestKind::T_TEST;
  int first_test = 5;
  int each_test = 1;
  int max_elites = 5;
  std::int64_t budget_samples = 10000;
  double alpha = 0.05;
  int reduction_factor = 2;  // SHA only

  void validate() const;
};

struct RaceOutcome {
  std::vector<std::string> survivors;                // lexicographic order
  std::map<std::string, std::int64_t> samples_used;  // every participant
  std::int64_t total_samples = 0;
  std::string selected;
  double selected_true_mean = 0.0;
  double loss = 0.0;  // relative true-mean gap to the best participant
};

// Statistical race (t-test or Friedman): first_test samples per configuration,
// an elimination test, then rounds of each_test samples per survivor followed
// by the test again, until at most max_elites remain or the next round would
// exceed budget_samples. The recommendation is the survivor with the lowest
// cumulative sample mean.
RaceOutcome run_race(const PerformanceTable& table, const RaceSpec& spec, RngStream& rng);

// k samples per configuration, then pick the lowest sample mean.
RaceOutcome run_sampling_only(const PerformanceTable& table, int k, RngStream& rng);

// Successive halving: round r gives each surviving configuration
// 2^r * first_test samples, then the ceil(n/R) lowest cumulative means
// survive, until one configuration remains.
RaceOutcome run_sha(const PerformanceTable& table, int first_test, int reduction_factor,
                    RngStream& rng);

// Dispatch on spec.test_kind.
RaceOutcome run_selection(const PerformanceTable& table, const RaceSpec& spec, RngStream& rng);

const char* to_string(TestKind k);
TestKind test_kind_from_string(const std::string& name);

}  // namespace relibench
