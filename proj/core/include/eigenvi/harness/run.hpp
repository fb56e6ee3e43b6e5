#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "eigenvi/density.hpp"
#include "eigenvi/estimator.hpp"
#include "eigenvi/harness/config.hpp"
#include "eigenvi/harness/records.hpp"
#include "eigenvi/transform.hpp"

namespace eigenvi::harness {

/// Target, optional transform and fitting proposal shared by every cell.
struct Setup {
  std::shared_ptr<SyntheticTarget> target;
  /// Target in the coordinates the basis lives in (standardized if a
  /// transform is used).
  std::shared_ptr<const ScoreTarget> fit_target;
  std::optional<StandardizingTransform> transform;
  Proposal proposal;
};

/// Builds the target and, when requested, the standardizing transform
/// (SNIS draws use the stream derived from (seed, 1)).
Setup prepare(const ExperimentConfig& config);

struct RunOutcome {
  std::vector<RunRecord> records;
  std::vector<TimingRecord> timings;
  std::size_t failed_cells = 0;
  std::filesystem::path records_path;
  std::filesystem::path long_path;
  std::filesystem::path timings_path;
};

/// Runs every (B, K) cell in order. With explicit batch sizes one score cache
/// per B is shared by all K. Failures are recorded per cell and the sweep
/// continues. Outputs under config.out_dir: records.csv, metrics_long.csv,
/// timings.csv, config.json and densities/cell_<n>.json.
RunOutcome run(const ExperimentConfig& config, std::ostream* log = nullptr);

/// 0 when at least one cell succeeded, 2 when every cell failed.
int exit_code(const RunOutcome& outcome);

}  // namespace eigenvi::harness
