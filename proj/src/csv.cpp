#include "relibench/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <utility>

namespace relibench {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& field, const std::filesystem::path& path, int line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw DataError(path.string() + ":" + std::to_string(line) + ": bad numeric field '" +
                    field + "'");
  return value;
}

std::int64_t parse_int(const std::string& field, const std::filesystem::path& path, int line) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw DataError(path.string() + ":" + std::to_string(line) + ": bad integer field '" +
                    field + "'");
  return value;
}

// Reads all lines; strips a trailing '\r' so CRLF files load too.
std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void expect_header(const std::vector<std::string>& lines, const std::string& header,
                   const std::filesystem::path& path) {
  if (lines.empty())
    throw DataError(path.string() + ": empty file, expected header '" + header + "'");
  if (lines.front() != header)
    throw DataError(path.string() + ":1: expected header '" + header + "', got '" +
                    lines.front() + "'");
}

void check_id_field(const std::string& id, const std::filesystem::path& path, int line) {
  if (id.empty())
    throw DataError(path.string() + ":" + std::to_string(line) + ": empty identifier");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

AtomicCsvWriter::AtomicCsvWriter(std::filesystem::path path,
                                 const std::vector<std::string>& header)
    : path_(std::move(path)), tmp_path_(path_.string() + ".tmp"), columns_(header.size()) {
  if (header.empty()) throw ParameterError("AtomicCsvWriter: empty header");
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw DataError("cannot open '" + tmp_path_.string() + "' for writing");
  write_row(header);
}

AtomicCsvWriter::~AtomicCsvWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void AtomicCsvWriter::write_row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_)
    throw ParameterError("AtomicCsvWriter: row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].find_first_of(",\n\r") != std::string::npos)
      throw ParameterError("AtomicCsvWriter: field may not contain comma or newline");
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

void AtomicCsvWriter::commit() {
  if (committed_) return;
  out_.flush();
  if (!out_) throw DataError("write failed for '" + tmp_path_.string() + "'");
  out_.close();
  std::filesystem::rename(tmp_path_, path_);
  committed_ = true;
}

std::vector<RunTrajectory> read_run_log(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  expect_header(lines, "config_id,function_id,run_id,evaluations,best_precision", path);

  std::map<std::pair<std::string, std::string>, RunTrajectory> runs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (lines[i].empty()) continue;
    const std::vector<std::string> fields = split_fields(lines[i]);
    if (fields.size() != 5)
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 5 fields, got " + std::to_string(fields.size()));
    check_id_field(fields[0], path, line_no);
    check_id_field(fields[1], path, line_no);
    check_id_field(fields[2], path, line_no);
    TrajectoryPoint point;
    point.evaluations = parse_int(fields[3], path, line_no);
    point.best_precision = parse_double(fields[4], path, line_no);

    auto& traj = runs[{fields[0], fields[2]}];
    if (traj.points.empty()) {
      traj.config_id = fields[0];
      traj.function_id = fields[1];
      traj.run_id = fields[2];
    } else if (traj.function_id != fields[1]) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": run appears under two function ids");
    }
    traj.points.push_back(point);
  }
  if (runs.empty()) throw DataError(path.string() + ": no data rows");

  std::vector<RunTrajectory> out;
  out.reserve(runs.size());
  for (auto& [key, traj] : runs) {
    traj.validate();
    out.push_back(std::move(traj));
  }
  return out;
}

void write_run_log(const std::filesystem::path& path,
                   const std::vector<RunTrajectory>& trajectories) {
  AtomicCsvWriter writer(path,
                         {"config_id", "function_id", "run_id", "evaluations", "best_precision"});
  for (const auto& traj : trajectories) {
    traj.validate();
    for (const auto& p : traj.points)
      writer.write_row({traj.config_id, traj.function_id, traj.run_id,
                        std::to_string(p.evaluations), format_double(p.best_precision)});
  }
  writer.commit();
}

PerformanceTable read_performance_table(const std::filesystem::path& path,
                                        std::string function_id) {
  const std::vector<std::string> lines = read_lines(path);
  expect_header(lines, "config_id,sample_index,aoc_value", path);

  std::map<std::string, std::vector<std::pair<std::int64_t, double>>> raw;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (lines[i].empty()) continue;
    const std::vector<std::string> fields = split_fields(lines[i]);
    if (fields.size() != 3)
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 3 fields, got " + std::to_string(fields.size()));
    check_id_field(fields[0], path, line_no);
    raw[fields[0]].emplace_back(parse_int(fields[1], path, line_no),
                                parse_double(fields[2], path, line_no));
  }
  if (raw.empty()) throw DataError(path.string() + ": no data rows");

  std::map<std::string, Eigen::ArrayXd> entries;
  for (auto& [config, values] : raw) {
    std::sort(values.begin(), values.end());
    Eigen::ArrayXd column(static_cast<Eigen::Index>(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j].first != static_cast<std::int64_t>(j))
        throw DataError(path.string() + ": configuration '" + config +
                        "' has missing or duplicate sample indices (expected 0.." +
                        std::to_string(values.size() - 1) + ")");
      column(static_cast<Eigen::Index>(j)) = values[j].second;
    }
    entries.emplace(config, std::move(column));
  }
  if (function_id.empty()) function_id = path.stem().string();
  return PerformanceTable(std::move(function_id), std::move(entries));
}

void write_performance_table(const std::filesystem::path& path, const PerformanceTable& table) {
  AtomicCsvWriter writer(path, {"config_id", "sample_index", "aoc_value"});
  for (const auto& [config, values] : table.entries())
    for (Eigen::Index i = 0; i < values.size(); ++i)
      writer.write_row({config, std::to_string(i), format_double(values(i))});
  writer.commit();
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for digest");
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001B3ULL;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace relibench
