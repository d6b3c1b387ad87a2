#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "relibench/errors.hpp"
#include "relibench/perf_measures.hpp"
#include "relibench/performance_table.hpp"

namespace relibench {

// Shortest round-trip decimal form of v ("%.17g"), locale independent.
std::string format_double(double v);

// Writes rows to <path>.tmp and renames onto path at commit(); an
// uncommitted writer removes its temporary on destruction, so interrupted
// runs never leave a half-written file under the final name.
class AtomicCsvWriter {
 public:
  AtomicCsvWriter(std::filesystem::path path, const std::vector<std::string>& header);
  ~AtomicCsvWriter();

  AtomicCsvWriter(const AtomicCsvWriter&) = delete;
  AtomicCsvWriter& operator=(const AtomicCsvWriter&) = delete;

  void write_row(const std::vector<std::string>& fields);
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
  bool committed_ = false;
};

// Run-log CSV, one row per improvement event:
//   config_id,function_id,run_id,evaluations,best_precision
// Returns trajectories sorted by (config_id, run_id); every trajectory is
// validated. Malformed rows raise DataError with the line number.
std::vector<RunTrajectory> read_run_log(const std::filesystem::path& path);

void write_run_log(const std::filesystem::path& path,
                   const std::vector<RunTrajectory>& trajectories);

// Performance-table CSV: config_id,sample_index,aoc_value. Sample indices of
// each configuration must be exactly 0..n-1, each present once.
PerformanceTable read_performance_table(const std::filesystem::path& path,
                                        std::string function_id = "");

void write_performance_table(const std::filesystem::path& path, const PerformanceTable& table);

// FNV-1a 64-bit digest of a file's raw bytes, as 16 hex characters.
std::string file_digest(const std::filesystem::path& path);

}  // namespace relibench
