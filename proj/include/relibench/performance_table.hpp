#pragma once

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

#include "relibench/errors.hpp"
#include "relibench/rng.hpp"

namespace relibench {

// Normal distribution fitted to a configuration's stored sample: same mean
// and standard deviation (n-1 divisor).
struct NormalSurrogate {
  double mean = 0.0;
  double stddev = 0.0;
};

// Per-configuration empirical AOC distributions: the verification-run store.
// Immutable after construction; configurations iterate in lexicographic
// order of their ids.
class PerformanceTable {
 public:
  PerformanceTable(std::string function_id, std::map<std::string, Eigen::ArrayXd> entries);

  const std::string& function_id() const { return function_id_; }
  const std::map<std::string, Eigen::ArrayXd>& entries() const { return entries_; }
  std::size_t num_configs() const { return entries_.size(); }

  // Largest per-configuration sample count (200 for verification-run data).
  int nominal_sample_count() const { return nominal_sample_count_; }

  bool contains(const std::string& config_id) const;
  const Eigen::ArrayXd& samples(const std::string& config_id) const;  // LookupError
  std::vector<std::string> config_ids() const;

 private:
  std::string function_id_;
  std::map<std::string, Eigen::ArrayXd> entries_;
  int nominal_sample_count_ = 0;
};

// Arithmetic mean of the full stored vector: the configuration's "true"
// performance.
double true_mean(const PerformanceTable& table, const std::string& config_id);

// k draws with replacement from the stored vector, deterministic given the
// stream.
Eigen::ArrayXd resample(const PerformanceTable& table, const std::string& config_id, int k,
                        RngStream& rng);

NormalSurrogate normal_surrogate(const PerformanceTable& table, const std::string& config_id);

Eigen::ArrayXd sample_surrogate(const NormalSurrogate& surrogate, int k, RngStream& rng);

// Configuration with the minimal true mean; ties break towards the
// lexicographically smallest id.
std::string best_by_true_mean(const PerformanceTable& table);

}  // namespace relibench
