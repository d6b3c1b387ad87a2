#include "relibench/performance_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "relibench/stats.hpp"

namespace relibench {

PerformanceTable::PerformanceTable(std::string function_id,
                                   std::map<std::string, Eigen::ArrayXd> entries)
    : function_id_(std::move(function_id)), entries_(std::move(entries)) {
  if (entries_.empty()) throw DataError("PerformanceTable: no configurations");
  for (const auto& [id, values] : entries_) {
    if (values.size() == 0)
      throw DataError("PerformanceTable: configuration '" + id + "' has no samples");
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (!std::isfinite(values(i)) || values(i) < 0.0)
        throw DataError("PerformanceTable: configuration '" + id +
                        "' has a non-finite or negative sample");
    nominal_sample_count_ =
        std::max(nominal_sample_count_, static_cast<int>(values.size()));
  }
}

bool PerformanceTable::contains(const std::string& config_id) const {
  return entries_.find(config_id) != entries_.end();
}

const Eigen::ArrayXd& PerformanceTable::samples(const std::string& config_id) const {
  const auto it = entries_.find(config_id);
  if (it == entries_.end())
    throw LookupError("PerformanceTable: unknown configuration '" + config_id + "'");
  return it->second;
}

std::vector<std::string> PerformanceTable::config_ids() const {
  std::vector<std::string> ids;
  ids.reserve(entries_.size());
  for (const auto& [id, _] : entries_) ids.push_back(id);
  return ids;
}

double true_mean(const PerformanceTable& table, const std::string& config_id) {
  return table.samples(config_id).mean();
}

Eigen::ArrayXd resample(const PerformanceTable& table, const std::string& config_id, int k,
                        RngStream& rng) {
  if (k < 1) throw ParameterError("resample: k must be >= 1");
  const Eigen::ArrayXd& values = table.samples(config_id);
  const auto n = static_cast<std::size_t>(values.size());
  Eigen::ArrayXd out(k);
  for (int i = 0; i < k; ++i)
    out(i) = values(static_cast<Eigen::Index>(rng.uniform_index(n)));
  return out;
}

NormalSurrogate normal_surrogate(const PerformanceTable& table, const std::string& config_id) {
  const Eigen::ArrayXd& values = table.samples(config_id);
  NormalSurrogate s;
  s.mean = values.mean();
  s.stddev = std::sqrt(sample_variance(values));
  return s;
}

Eigen::ArrayXd sample_surrogate(const NormalSurrogate& surrogate, int k, RngStream& rng) {
  if (k < 1) throw ParameterError("sample_surrogate: k must be >= 1");
  if (surrogate.stddev < 0.0)
    throw ParameterError("sample_surrogate: stddev must be >= 0");
  Eigen::ArrayXd out(k);
  for (int i = 0; i < k; ++i) out(i) = rng.normal(surrogate.mean, surrogate.stddev);
  return out;
}

std::string best_by_true_mean(const PerformanceTable& table) {
  std::string best;
  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto& [id, values] : table.entries()) {
    const double m = values.mean();
    if (m < best_mean) {  // map order breaks ties towards the smaller id
      best_mean = m;
      best = id;
    }
  }
  return best;
}

}  // namespace relibench
