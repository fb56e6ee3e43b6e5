#include "eigenvi/harness/run.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "eigenvi/harness/metrics.hpp"
#include "eigenvi/sampling.hpp"
#include "eigenvi/serialization.hpp"
#include "eigenvi/standardize.hpp"

namespace eigenvi::harness {

namespace {

using Clock = std::chrono::steady_clock;

// Stream tags for derive_rng.
constexpr std::uint64_t kStandardizeStream = 1;
constexpr std::uint64_t kScoreStream = 2;
constexpr std::uint64_t kKlStream = 3;
constexpr std::uint64_t kFisherStream = 4;
constexpr std::uint64_t kQSampleStream = 5;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string join_orders(const std::vector<int>& orders) {
  std::string s;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(orders[i]);
  }
  return s;
}

std::string join_families(const ProductBasis& basis) {
  const std::string first(to_string(basis.family(0).kind()));
  std::string s = first;
  bool mixed = false;
  for (int d = 1; d < basis.dim(); ++d) {
    const std::string name(to_string(basis.family(d).kind()));
    mixed = mixed || name != first;
    s += 'x' + name;
  }
  return mixed ? s : first;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct Reference {
  Eigen::MatrixXd kl_samples;
  Eigen::MatrixXd fisher_samples;
};

struct Cell {
  RunRecord record;
  TimingRecord timing;
};

void evaluate(const ExperimentConfig& config, const Setup& setup, const Reference& ref,
              const FitResult& fitted, int cell, Cell& out) {
  const auto start = Clock::now();
  const OfeDensity q = setup.transform ? pull_density(fitted.density, *setup.transform) : fitted.density;
  auto& r = out.record;
  r.lambda_min = fitted.diagnostics.lambda_min;

  std::vector<std::string> notes = fitted.diagnostics.warnings;
  try {
    const auto kl = forward_kl(*setup.target, q, ref.kl_samples);
    r.forward_kl = kl.estimate;
    r.forward_kl_stderr = kl.standard_error;
    r.kl_excluded = kl.excluded;
  } catch (const std::exception& e) {
    notes.push_back(std::string("forward_kl unavailable: ") + e.what());
  }
  try {
    const auto fd = fisher_divergence_empirical(*setup.target, q, ref.fisher_samples);
    r.fisher = fd.estimate;
    r.fisher_stderr = fd.standard_error;
    r.fisher_excluded = fd.excluded;
  } catch (const std::exception& e) {
    notes.push_back(std::string("fisher unavailable: ") + e.what());
  }
  if (config.q_samples > 0) {
    Rng rng = derive_rng(config.seed, {kQSampleStream, static_cast<std::uint64_t>(cell)});
    r.tail_clips = sample(q, rng, config.q_samples).tail_clips;
  }
  for (std::size_t i = 0; i < notes.size(); ++i) r.note += (i ? "; " : "") + notes[i];

  if (config.write_densities) {
    std::filesystem::create_directories(config.out_dir / "densities");
    save_density(q, config.out_dir / "densities" / ("cell_" + std::to_string(cell) + ".json"));
  }
  out.timing.metrics_ms = ms_since(start);
}

}  // namespace

Setup prepare(const ExperimentConfig& config) {
  auto target = make_target(config.target);
  const int dim = target->dim();
  std::optional<StandardizingTransform> transform;
  switch (config.standardize.source) {
    case StandardizeSpec::Source::None:
      break;
    case StandardizeSpec::Source::Fixed:
      transform = StandardizingTransform::from_mean_covariance(config.standardize.mean,
                                                               config.standardize.covariance);
      break;
    case StandardizeSpec::Source::Snis: {
      Rng rng = derive_rng(config.seed, {kStandardizeStream});
      transform = estimate_transform(*target, make_proposal(config.standardize.proposal, dim),
                                     config.standardize.batch, rng)
                      .transform;
      break;
    }
  }
  std::shared_ptr<const ScoreTarget> fit_target = target;
  if (transform) fit_target = push_target(target, *transform);
  return Setup{target, std::move(fit_target), std::move(transform),
               make_proposal(config.proposal, dim)};
}

RunOutcome run(const ExperimentConfig& config, std::ostream* log) {
  validate(config);
  const std::string hash = config_hash(config);
  std::filesystem::create_directories(config.out_dir);
  write_file(config.out_dir / "config.json", config_to_json(config) + "\n");

  RunOutcome outcome;
  std::vector<Cell> cells;

  auto fail_cell = [&](Cell& c, const std::string& why) {
    c.record.status = "failed";
    c.record.note = why;
    ++outcome.failed_cells;
    if (log) *log << "cell " << c.record.cell << " failed: " << why << '\n';
  };

  std::optional<Setup> setup;
  std::string setup_error;
  Reference ref;
  try {
    setup = prepare(config);
    Rng kl_rng = derive_rng(config.seed, {kKlStream});
    ref.kl_samples = setup->target->sample(kl_rng, config.kl_samples);
    Rng fisher_rng = derive_rng(config.seed, {kFisherStream});
    ref.fisher_samples = setup->target->sample(fisher_rng, config.fisher_samples);
  } catch (const std::exception& e) {
    setup_error = std::string("setup failed: ") + e.what();
  }

  const int dim = make_target(config.target)->dim();
  const bool shared = !config.batch_sizes.empty();
  const std::size_t groups = shared ? config.batch_sizes.size() : config.orders.size();
  FitOptions fit_options;
  fit_options.assembly = config.assembly;

  int cell_index = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    std::optional<ScoreCache> cache;
    std::string cache_error;
    const std::size_t first_k = shared ? 0 : g;
    const std::size_t last_k = shared ? config.orders.size() : g + 1;
    for (std::size_t ki = first_k; ki < last_k; ++ki) {
      Cell c;
      const ProductBasis basis = make_basis(config, config.orders[ki], dim);
      const std::size_t batch =
          shared ? config.batch_sizes[g] : config.batch_multiplier * static_cast<std::size_t>(basis.size());
      auto& r = c.record;
      r.config_hash = hash;
      r.cell = cell_index;
      r.target = make_target(config.target)->name();
      r.family = join_families(basis);
      r.orders = join_orders(basis.orders());
      r.basis_size = basis.size();
      r.batch_size = batch;
      r.standardized = config.standardize.source != StandardizeSpec::Source::None;
      c.timing.config_hash = hash;
      c.timing.cell = cell_index;
      c.timing.basis_size = basis.size();
      c.timing.batch_size = batch;

      if (!setup) {
        fail_cell(c, setup_error);
      } else {
        if (!cache && cache_error.empty()) {
          try {
            Rng rng = derive_rng(config.seed, {kScoreStream, static_cast<std::uint64_t>(g)});
            cache = draw_scores(*setup->fit_target, setup->proposal, batch, rng);
            c.timing.score_ms = cache->score_ms;
            r.score_evaluations = cache->score_evaluations;
          } catch (const std::exception& e) {
            cache_error = std::string("score evaluation failed: ") + e.what();
          }
        } else if (cache) {
          r.score_cache_reused = true;
        }
        if (!cache) {
          fail_cell(c, cache_error);
        } else {
          try {
            r.rejected = cache->rejected;
            const FitResult fitted = fit(basis, *cache, fit_options);
            c.timing.assembly_ms = fitted.diagnostics.assembly_ms;
            c.timing.eigensolve_ms = fitted.diagnostics.eigensolve_ms;
            evaluate(config, *setup, ref, fitted, cell_index, c);
          } catch (const std::exception& e) {
            r.lambda_min.reset();
            r.forward_kl.reset();
            r.forward_kl_stderr.reset();
            r.fisher.reset();
            r.fisher_stderr.reset();
            fail_cell(c, e.what());
          }
        }
      }
      if (log && r.status == "ok") {
        *log << "cell " << r.cell << " K=" << r.basis_size << " B=" << r.batch_size
             << " lambda_min=" << *r.lambda_min;
        if (r.forward_kl) *log << " KL=" << *r.forward_kl << " +- " << *r.forward_kl_stderr;
        *log << '\n';
      }
      cells.push_back(std::move(c));
      ++cell_index;
    }
  }

  for (auto& c : cells) {
    outcome.records.push_back(std::move(c.record));
    outcome.timings.push_back(c.timing);
  }
  outcome.records_path = config.out_dir / "records.csv";
  outcome.long_path = config.out_dir / "metrics_long.csv";
  outcome.timings_path = config.out_dir / "timings.csv";
  std::ostringstream records, long_form, timings;
  write_records(records, outcome.records);
  write_long(long_form, outcome.records);
  write_timings(timings, outcome.timings);
  write_file(outcome.records_path, records.str());
  write_file(outcome.long_path, long_form.str());
  write_file(outcome.timings_path, timings.str());
  return outcome;
}

int exit_code(const RunOutcome& outcome) {
  return !outcome.records.empty() && outcome.failed_cells == outcome.records.size() ? 2 : 0;
}

}  // namespace eigenvi::harness
