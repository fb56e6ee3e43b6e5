#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace eigenvi::harness {

/// One sweep cell. Numeric results are nullopt when the cell failed or a
/// metric could not be formed; `note` then says why. Wall-clock timings live
/// in TimingRecord so that records.csv is a pure function of the config.
struct RunRecord {
  std::string config_hash;
  int cell = 0;
  std::string target;
  std::string family;
  std::string orders;  // per-dimension orders joined by 'x', e.g. "6x6"
  int basis_size = 0;
  std::size_t batch_size = 0;
  bool standardized = false;
  bool score_cache_reused = false;
  std::string status = "ok";  // "ok" or "failed"
  std::optional<double> lambda_min;
  std::optional<double> forward_kl;
  std::optional<double> forward_kl_stderr;
  std::size_t kl_excluded = 0;
  std::optional<double> fisher;
  std::optional<double> fisher_stderr;
  std::size_t fisher_excluded = 0;
  std::size_t tail_clips = 0;
  std::size_t rejected = 0;
  std::size_t score_evaluations = 0;
  std::string note;

  bool operator==(const RunRecord&) const = default;
};

struct TimingRecord {
  std::string config_hash;
  int cell = 0;
  int basis_size = 0;
  std::size_t batch_size = 0;
  double score_ms = 0.0;
  double assembly_ms = 0.0;
  double eigensolve_ms = 0.0;
  double metrics_ms = 0.0;
};

std::vector<std::string> record_header();
void write_records(std::ostream& out, const std::vector<RunRecord>& records);
/// Inverse of write_records. Throws std::invalid_argument on a malformed file.
std::vector<RunRecord> read_records(std::string_view text);

/// Plot-ready long format: one row per (cell, metric).
void write_long(std::ostream& out, const std::vector<RunRecord>& records);
void write_timings(std::ostream& out, const std::vector<TimingRecord>& timings);

}  // namespace eigenvi::harness
