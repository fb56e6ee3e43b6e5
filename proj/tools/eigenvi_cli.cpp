// eigenvi command line: fit, sample, moments, evaluate, sweep.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigenvi/eigenvi.hpp"
#include "eigenvi/harness/csv.hpp"
#include "eigenvi/harness/config.hpp"
#include "eigenvi/harness/metrics.hpp"
#include "eigenvi/harness/run.hpp"

namespace {

using nlohmann::json;
namespace h = eigenvi::harness;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Flags shared by fit and sweep; each one overrides the matching config field.
struct Overrides {
  std::string config_path;
  std::string target;
  std::vector<std::string> families;
  std::vector<int> orders;
  std::vector<std::size_t> batch;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<std::size_t> kl_samples;
  std::optional<unsigned> workers;
  std::string standardize;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--target", target, "target fixture name, e.g. mixture_2d or gaussian_2d");
    app->add_option("--family", families, "basis family (hermite, legendre, fourier, laguerre)");
    app->add_option("--orders", orders, "per-dimension order sweep, applied to every dimension");
    app->add_option("--batch", batch, "batch size sweep B");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--out-dir", out_dir, "output directory");
    app->add_option("--kl-samples", kl_samples, "exact target samples for forward KL");
    app->add_option("--workers", workers, "assembly threads (0 = hardware concurrency)");
    app->add_option("--standardize", standardize, "none, snis")
        ->check(CLI::IsMember({"none", "snis"}));
  }

  h::ExperimentConfig build() const {
    h::ExperimentConfig c;
    if (!config_path.empty()) {
      c = h::load_config(config_path);
    } else {
      if (target.empty()) throw h::ConfigError("either --config or --target is required");
      if (!seed) throw h::ConfigError("--seed is required without a config file");
      c.orders = {{3}};
    }
    if (!target.empty()) {
      c.target = h::TargetSpec{target, {}, {}};
    }
    if (!families.empty()) c.families = families;
    if (!orders.empty()) {
      c.orders.clear();
      for (int k : orders) c.orders.push_back({k});
    }
    if (!batch.empty()) c.batch_sizes = batch;
    if (seed) c.seed = *seed;
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (kl_samples) c.kl_samples = *kl_samples;
    if (workers) c.assembly.workers = *workers;
    if (standardize == "none") c.standardize.source = h::StandardizeSpec::Source::None;
    if (standardize == "snis") c.standardize.source = h::StandardizeSpec::Source::Snis;
    h::validate(c);
    return c;
  }
};

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

int cmd_fit(const Overrides& o, const std::string& output) {
  const auto config = o.build();
  const auto setup = h::prepare(config);
  const int dim = setup.target->dim();
  const auto basis = h::make_basis(config, config.orders.front(), dim);
  const std::size_t batch = config.batch_sizes.empty()
                                ? config.batch_multiplier * static_cast<std::size_t>(basis.size())
                                : config.batch_sizes.front();
  eigenvi::Rng rng = eigenvi::derive_rng(config.seed, {2, 0});
  eigenvi::FitOptions options;
  options.assembly = config.assembly;
  auto fitted = eigenvi::fit(basis, *setup.fit_target, setup.proposal, batch, rng, options);
  const auto q = setup.transform ? eigenvi::pull_density(fitted.density, *setup.transform)
                                 : fitted.density;
  const auto path = output.empty() ? config.out_dir / "density.json" : std::filesystem::path(output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  eigenvi::save_density(q, path);

  const auto& d = fitted.diagnostics;
  json report = {{"density", path.string()},
                 {"lambda_min", d.lambda_min},
                 {"K", d.basis_size},
                 {"B", d.batch_size},
                 {"rejected", d.rejected},
                 {"score_evaluations", d.score_evaluations},
                 {"solver", std::string(eigenvi::to_string(d.solver_path))},
                 {"score_ms", d.score_ms},
                 {"assembly_ms", d.assembly_ms},
                 {"eigensolve_ms", d.eigensolve_ms},
                 {"warnings", d.warnings}};
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_sample(const std::string& density, std::size_t n, std::uint64_t seed, const std::string& output) {
  const auto q = eigenvi::load_density(density);
  eigenvi::Rng rng = eigenvi::make_rng(seed);
  const auto result = eigenvi::sample(q, rng, n);
  std::ofstream file;
  if (!output.empty()) {
    file.open(output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + output);
  }
  std::ostream& out = output.empty() ? std::cout : file;
  h::CsvWriter w(out);
  std::vector<std::string> header;
  for (int d = 0; d < q.dim(); ++d) header.push_back("z" + std::to_string(d + 1));
  w.row(header);
  std::vector<std::string> row(static_cast<std::size_t>(q.dim()));
  for (Eigen::Index j = 0; j < result.points.cols(); ++j) {
    for (int d = 0; d < q.dim(); ++d) row[static_cast<std::size_t>(d)] = h::format_double(result.points(d, j));
    w.row(row);
  }
  std::cerr << "tail clips: " << result.tail_clips << '\n';
  return 0;
}

int cmd_moments(const std::string& density) {
  const auto q = eigenvi::load_density(density);
  const auto m = eigenvi::moments(q);
  std::cout << json{{"mean", vector_json(m.mean)}, {"covariance", matrix_json(m.covariance)}}.dump(2)
            << '\n';
  return 0;
}

int cmd_evaluate(const std::string& density, const std::string& target_name, std::uint64_t seed,
                 std::size_t kl_samples, std::size_t fisher_samples) {
  const auto q = eigenvi::load_density(density);
  std::shared_ptr<eigenvi::SyntheticTarget> target;
  try {
    target = eigenvi::target_by_name(target_name);
  } catch (const std::invalid_argument& e) {
    throw h::ConfigError(e.what());
  }
  if (target->dim() != q.dim()) throw h::ConfigError("target and density dimensions differ");
  eigenvi::Rng kl_rng = eigenvi::derive_rng(seed, {3});
  const auto kl = h::forward_kl(*target, q, kl_samples, kl_rng);
  eigenvi::Rng fisher_rng = eigenvi::derive_rng(seed, {4});
  const auto fd = h::fisher_divergence_empirical(*target, q, target->sample(fisher_rng, fisher_samples));
  json report = {{"forward_kl", kl.estimate},       {"forward_kl_stderr", kl.standard_error},
                 {"kl_excluded", kl.excluded},      {"fisher", fd.estimate},
                 {"fisher_stderr", fd.standard_error}, {"fisher_excluded", fd.excluded}};
  std::cout << report.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const Overrides& o, bool quiet) {
  const auto config = o.build();
  const auto outcome = h::run(config, quiet ? nullptr : &std::cerr);
  std::cerr << outcome.records.size() - outcome.failed_cells << " of " << outcome.records.size()
            << " cells succeeded; records in " << outcome.records_path.string() << '\n';
  return h::exit_code(outcome);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EigenVI: variational inference by minimum eigenvectors of score-matching matrices"};
  app.require_subcommand(1);

  Overrides fit_opts;
  std::string fit_output;
  auto* fit = app.add_subcommand("fit", "fit one density and write it as JSON");
  fit_opts.attach(fit);
  fit->add_option("-o,--output", fit_output, "density JSON path (default <out-dir>/density.json)");

  std::string density;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string sample_output;
  auto* sample = app.add_subcommand("sample", "draw exact samples from a fitted density");
  sample->add_option("-d,--density", density, "density JSON")->required()->check(CLI::ExistingFile);
  sample->add_option("-n,--count", n, "number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "random seed")->required();
  sample->add_option("-o,--output", sample_output, "CSV path (default stdout)");

  auto* moments = app.add_subcommand("moments", "closed-form mean and covariance of a density");
  moments->add_option("-d,--density", density, "density JSON")->required()->check(CLI::ExistingFile);

  std::string target;
  std::size_t kl_samples = 100000;
  std::size_t fisher_samples = 10000;
  auto* evaluate = app.add_subcommand("evaluate", "forward KL and Fisher divergence against a target");
  evaluate->add_option("-d,--density", density, "density JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--target", target, "target fixture name")->required();
  evaluate->add_option("--seed", seed, "random seed")->required();
  evaluate->add_option("--kl-samples", kl_samples, "exact target samples for forward KL")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--fisher-samples", fisher_samples, "reference samples for the Fisher divergence")
      ->check(CLI::PositiveNumber);

  Overrides sweep_opts;
  bool quiet = false;
  auto* sweep = app.add_subcommand("sweep", "run a K x B sweep from a config");
  sweep_opts.attach(sweep);
  sweep->add_flag("-q,--quiet", quiet, "suppress per-cell progress");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*fit) return cmd_fit(fit_opts, fit_output);
    if (*sample) return cmd_sample(density, n, seed, sample_output);
    if (*moments) return cmd_moments(density);
    if (*evaluate) return cmd_evaluate(density, target, seed, kl_samples, fisher_samples);
    if (*sweep) return cmd_sweep(sweep_opts, quiet);
  } catch (const h::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
