#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eigenvi/estimator.hpp"
#include "eigenvi/proposals.hpp"
#include "eigenvi/targets.hpp"

namespace eigenvi::harness {

inline constexpr int kConfigSchemaVersion = 1;

/// Invalid or incomplete experiment configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TargetSpec {
  /// A fixture name (see target_by_name) or "gaussian" with explicit moments.
  std::string name;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct ProposalSpec {
  Proposal::Kind kind = Proposal::Kind::UniformBox;
  double lo = -6.0;
  double hi = 6.0;
  double variance = 9.0;
};

struct StandardizeSpec {
  enum class Source { None, Snis, Fixed };
  Source source = Source::None;
  /// SNIS draws and the proposal they come from (original coordinates).
  std::size_t batch = 100000;
  ProposalSpec proposal{Proposal::Kind::IsotropicGaussian, -6.0, 6.0, 9.0};
  /// Used when source == Fixed.
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  TargetSpec target;
  /// One family per dimension, or a single family broadcast to every dimension.
  std::vector<std::string> families{"hermite"};
  /// K sweep; each entry holds per-dimension orders or a single order used
  /// for every dimension.
  std::vector<std::vector<int>> orders;
  /// B sweep. Each B cell draws one score cache shared by every K.
  std::vector<std::size_t> batch_sizes;
  /// When batch_sizes is empty, each K gets its own batch of B = multiplier * K.
  std::size_t batch_multiplier = 10;
  ProposalSpec proposal;
  StandardizeSpec standardize;
  std::size_t kl_samples = 100000;
  std::size_t fisher_samples = 10000;
  /// Draws from each fitted q to count CDF tail clips; 0 skips the check.
  std::size_t q_samples = 10000;
  AssemblyOptions assembly;
  std::filesystem::path out_dir = "eigenvi_out";
  bool write_densities = true;
};

/// Parses and validates a JSON configuration. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Rechecks the invariants enforced by parse_config after flag overrides.
void validate(const ExperimentConfig& config);

/// Target instance for a config target entry.
std::shared_ptr<SyntheticTarget> make_target(const TargetSpec& entry);
Proposal make_proposal(const ProposalSpec& entry, int dim);
/// Product basis for one entry of the orders sweep.
ProductBasis make_basis(const ExperimentConfig& config, const std::vector<int>& orders, int dim);

}  // namespace eigenvi::harness
