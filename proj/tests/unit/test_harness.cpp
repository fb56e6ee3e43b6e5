#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "../oracles/frozen.hpp"
#include "eigenvi/estimator.hpp"
#include "eigenvi/harness/config.hpp"
#include "eigenvi/harness/csv.hpp"
#include "eigenvi/harness/metrics.hpp"
#include "eigenvi/harness/records.hpp"
#include "eigenvi/harness/run.hpp"
#include "eigenvi/standardize.hpp"
#include "test_util.hpp"

namespace {

using namespace eigenvi;
namespace h = eigenvi::harness;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("eigenvi_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

OfeDensity gaussian_q(int dim, double variance = 1.0) {
  const OfeDensity base(ProductBasis::uniform(BasisFamily::hermite(), dim, 1), WeightVector(Eigen::VectorXd::Ones(1)));
  if (variance == 1.0) return base;
  return pull_density(base, StandardizingTransform(Eigen::VectorXd::Zero(dim),
                                                   std::sqrt(variance) * Eigen::MatrixXd::Identity(dim, dim)));
}

TEST(Csv, FormatAndEscape) {
  EXPECT_EQ(h::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(h::format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_THROW(h::format_double(std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_EQ(h::format_optional(std::nullopt), "");
  EXPECT_EQ(h::csv_escape("plain"), "plain");
  EXPECT_EQ(h::csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(h::csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(h::csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, WriterUsesCrlfAndParsesBack) {
  std::ostringstream out;
  h::CsvWriter w(out);
  w.row({"a", "b,c", "d\"e"});
  w.row({"", "x\r\ny", "1"});
  EXPECT_EQ(out.str(), "a,\"b,c\",\"d\"\"e\"\r\n,\"x\r\ny\",1\r\n");
  const auto rows = h::parse_csv(out.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"", "x\r\ny", "1"}));
  EXPECT_THROW(h::parse_csv("\"open"), std::invalid_argument);
}

TEST(Metrics, ForwardKlIdentical) {
  Rng rng(1);
  const auto kl = h::forward_kl(*standard_gaussian_target(1), gaussian_q(1), 100000, rng);
  EXPECT_LT(std::abs(kl.estimate), 3 * kl.standard_error + 1e-15);
  EXPECT_EQ(kl.used, 100000u);
}

TEST(Metrics, ForwardKlClosedForm) {
  Rng rng(2);
  const auto kl = h::forward_kl(*standard_gaussian_target(1), gaussian_q(1, 2.0), 100000, rng);
  EXPECT_LT(std::abs(kl.estimate - frozen::kKlN01N02), 3 * kl.standard_error);
  EXPECT_THROW(h::forward_kl(*standard_gaussian_target(1), gaussian_q(1), 0, rng), std::invalid_argument);
}

TEST(Metrics, ForwardKlExcludesZeros) {
  Eigen::VectorXd e2(2);
  e2 << 0.0, 1.0;
  const OfeDensity q(ProductBasis::uniform(BasisFamily::hermite(), 1, 2), WeightVector(e2));
  Eigen::MatrixXd s(1, 3);
  s << 0.0, 1.0, -1.0;
  const auto kl = h::forward_kl(*standard_gaussian_target(1), q, s);
  EXPECT_EQ(kl.excluded, 1u);
  EXPECT_EQ(kl.used, 2u);
}

TEST(Metrics, FisherExactFitIsZero) {
  Rng rng(3);
  const OfeDensity q(ProductBasis::uniform(BasisFamily::hermite(), 2, 3), WeightVector(testutil::random_unit(rng, 9)));
  const ExpansionTarget p(q);
  const auto fd = h::fisher_divergence_empirical(p, q, p.sample(rng, 2000));
  EXPECT_LT(fd.estimate, 1e-8);
}

TEST(Metrics, FisherClosedForm) {
  Rng rng(4);
  const GaussianTarget p(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 2.0));
  const auto fd = h::fisher_divergence_empirical(p, gaussian_q(1), p.sample(rng, 100000));
  EXPECT_LT(std::abs(fd.estimate - 0.5), 3 * fd.standard_error);
  EXPECT_THROW(h::fisher_divergence_empirical(p, gaussian_q(1), Eigen::MatrixXd(1, 0)), std::invalid_argument);
}

TEST(Metrics, FisherExcludesPoles) {
  Eigen::VectorXd e2(2);
  e2 << 0.0, 1.0;
  const OfeDensity q(ProductBasis::uniform(BasisFamily::hermite(), 1, 2), WeightVector(e2));
  Eigen::MatrixXd s(1, 3);
  s << 0.0, 1.0, -1.0;
  const auto fd = h::fisher_divergence_empirical(*standard_gaussian_target(1), q, s);
  EXPECT_EQ(fd.excluded, 1u);
}

constexpr const char* kMinimal = R"({"schema_version": 1, "seed": 3, "target": "mixture_2d",
  "basis": {"orders": [2, 3]}})";

TEST(Config, ParsesAndRoundTrips) {
  const auto c = h::parse_config(R"({
    "schema_version": 1, "name": "t", "seed": 42,
    "target": {"name": "gaussian", "mean": [1, 2], "covariance": [[2, 0.5], [0.5, 1]]},
    "basis": {"family": ["hermite", "legendre"], "orders": [3, [4, 2]]},
    "batch": {"sizes": [100, 200]},
    "proposal": {"kind": "gaussian", "variance": 4},
    "standardize": {"source": "fixed", "mean": [1, 2], "covariance": [[2, 0.5], [0.5, 1]]},
    "metrics": {"kl_samples": 1000, "fisher_samples": 100, "q_samples": 0},
    "assembly": {"chunk_size": 64, "workers": 2},
    "output": {"dir": "somewhere", "densities": false}})");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.orders, (std::vector<std::vector<int>>{{3}, {4, 2}}));
  EXPECT_EQ(c.batch_sizes, (std::vector<std::size_t>{100, 200}));
  EXPECT_EQ(c.proposal.kind, Proposal::Kind::IsotropicGaussian);
  EXPECT_EQ(c.standardize.source, h::StandardizeSpec::Source::Fixed);
  EXPECT_EQ(c.assembly.chunk_size, 64u);
  EXPECT_FALSE(c.write_densities);
  const auto again = h::parse_config(h::config_to_json(c));
  EXPECT_EQ(h::config_to_json(again), h::config_to_json(c));
  EXPECT_EQ(h::config_hash(again), h::config_hash(c));
  EXPECT_EQ(h::config_hash(c).size(), 16u);
}

TEST(Config, HashIgnoresWorkersAndOutput) {
  auto a = h::parse_config(kMinimal);
  auto b = a;
  b.assembly.workers = 7;
  b.out_dir = "elsewhere";
  EXPECT_EQ(h::config_hash(a), h::config_hash(b));
  b.seed = 4;
  EXPECT_NE(h::config_hash(a), h::config_hash(b));
}

TEST(Config, Errors) {
  const std::vector<std::string> bad{
      "not json",
      R"({"seed": 1, "target": "mixture_2d", "basis": {"orders": [2]}})",
      R"({"schema_version": 2, "seed": 1, "target": "mixture_2d", "basis": {"orders": [2]}})",
      R"({"schema_version": 1, "target": "mixture_2d", "basis": {"orders": [2]}})",
      R"({"schema_version": 1, "seed": -1, "target": "mixture_2d", "basis": {"orders": [2]}})",
      R"({"schema_version": 1, "seed": 1, "target": "nope", "basis": {"orders": [2]}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": []}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": [0]}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": [[1, 2, 3]]}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": [2], "famly": "x"}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"family": "chebyshev", "orders": [2]}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": [2]}, "batch": {"sizes": [0]}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": [2]}, "proposal": {"kind": "uniform", "lo": 1, "hi": 1}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": [2]}, "standardize": {"source": "fixed"}})",
      R"({"schema_version": 1, "seed": 1, "target": "mixture_2d", "basis": {"orders": [2]}, "extra": 1})",
  };
  for (const auto& text : bad) EXPECT_THROW(h::parse_config(text), h::ConfigError) << text;
  EXPECT_THROW(h::load_config("/nonexistent/config.json"), h::ConfigError);
}

h::RunRecord sample_record() {
  h::RunRecord r;
  r.config_hash = "0123456789abcdef";
  r.cell = 3;
  r.target = "mixture_2d";
  r.family = "hermite";
  r.orders = "6x6";
  r.basis_size = 36;
  r.batch_size = 360;
  r.standardized = true;
  r.score_cache_reused = true;
  r.lambda_min = 1.0 / 3.0;
  r.forward_kl = 0.1;
  r.forward_kl_stderr = 1e-300;
  r.kl_excluded = 2;
  r.fisher = 123456789.123;
  r.tail_clips = 1;
  r.score_evaluations = 360;
  r.note = "needs, \"quoting\"\nand a newline";
  return r;
}

TEST(Records, RoundTripExactly) {
  h::RunRecord failed;
  failed.status = "failed";
  failed.note = "setup failed: x";
  const std::vector<h::RunRecord> records{sample_record(), failed};
  std::ostringstream out;
  h::write_records(out, records);
  EXPECT_EQ(h::read_records(out.str()), records);
  EXPECT_THROW(h::read_records("wrong,header\r\n"), std::invalid_argument);
}

TEST(Records, LongFormat) {
  std::ostringstream out;
  h::write_long(out, {sample_record()});
  const auto rows = h::parse_csv(out.str());
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"config_hash", "cell", "target", "family", "K", "B", "metric", "value"}));
  bool saw_kl = false;
  for (const auto& r : rows)
    if (r[6] == "forward_kl") saw_kl = std::stod(r[7]) == 0.1;
  EXPECT_TRUE(saw_kl);
}

h::ExperimentConfig small_config(const std::string& name) {
  auto c = h::parse_config(R"({"schema_version": 1, "seed": 11, "target": "mixture_2d",
    "basis": {"orders": [2, 3]}, "batch": {"sizes": [200, 300]}, "proposal": {"lo": -9, "hi": 9},
    "metrics": {"kl_samples": 2000, "fisher_samples": 200, "q_samples": 200},
    "assembly": {"chunk_size": 50}})");
  c.out_dir = scratch(name);
  return c;
}

TEST(Run, SweepWritesEverything) {
  const auto c = small_config("sweep");
  const auto outcome = h::run(c);
  ASSERT_EQ(outcome.records.size(), 4u);
  EXPECT_EQ(outcome.failed_cells, 0u);
  EXPECT_EQ(h::exit_code(outcome), 0);
  EXPECT_FALSE(outcome.records[0].score_cache_reused);
  EXPECT_TRUE(outcome.records[1].score_cache_reused);
  EXPECT_EQ(outcome.records[0].score_evaluations, 200u);
  EXPECT_EQ(outcome.records[1].score_evaluations, 0u);
  EXPECT_EQ(outcome.records[2].batch_size, 300u);
  for (const auto& r : outcome.records) {
    EXPECT_EQ(r.status, "ok");
    ASSERT_TRUE(r.forward_kl.has_value());
    EXPECT_GT(*r.forward_kl, -3 * *r.forward_kl_stderr);
  }
  EXPECT_EQ(h::read_records(slurp(outcome.records_path)), outcome.records);
  EXPECT_TRUE(std::filesystem::exists(c.out_dir / "densities" / "cell_3.json"));
  EXPECT_TRUE(std::filesystem::exists(outcome.timings_path));
  EXPECT_EQ(h::parse_config(slurp(c.out_dir / "config.json")).seed, 11u);
}

TEST(Run, DeterministicAcrossRunsAndWorkers) {
  auto a = small_config("det_a");
  auto b = small_config("det_b");
  a.assembly.workers = 1;
  b.assembly.workers = 3;
  h::run(a);
  h::run(b);
  // config.json records the worker count and directory, which legitimately differ.
  for (const char* f : {"records.csv", "metrics_long.csv", "densities/cell_2.json"})
    EXPECT_EQ(slurp(a.out_dir / f), slurp(b.out_dir / f)) << f;

  const std::string first = slurp(a.out_dir / "records.csv");
  const std::string config = slurp(a.out_dir / "config.json");
  h::run(a);
  EXPECT_EQ(slurp(a.out_dir / "records.csv"), first);
  EXPECT_EQ(slurp(a.out_dir / "config.json"), config);
}

TEST(Run, CellFailuresAreRecorded) {
  auto c = small_config("fail");
  // Scores of the funnel overflow far out in the box, so every sample
  // beyond the rejection budget fails the batch.
  c.target = h::TargetSpec{"funnel_2d", {}, {}};
  c.proposal.lo = -2000;
  c.proposal.hi = 2000;
  const auto outcome = h::run(c);
  EXPECT_EQ(outcome.failed_cells, outcome.records.size());
  EXPECT_EQ(h::exit_code(outcome), 2);
  for (const auto& r : outcome.records) {
    EXPECT_EQ(r.status, "failed");
    EXPECT_FALSE(r.note.empty());
    EXPECT_FALSE(r.lambda_min.has_value());
  }
  EXPECT_EQ(h::read_records(slurp(outcome.records_path)), outcome.records);
}

TEST(Run, StandardizedSweep) {
  auto c = small_config("std");
  c.standardize.source = h::StandardizeSpec::Source::Snis;
  c.standardize.batch = 20000;
  c.proposal.lo = -6;
  c.proposal.hi = 6;
  const auto outcome = h::run(c);
  EXPECT_EQ(outcome.failed_cells, 0u);
  for (const auto& r : outcome.records) EXPECT_TRUE(r.standardized);
}

}  // namespace
