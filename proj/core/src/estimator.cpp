#include "eigenvi/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "eigenvi/errors.hpp"

namespace eigenvi {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Adds the contribution of samples [begin, begin + count) to the upper
// triangle of `partial`. The operation sequence for entry (j, k) depends only
// on the basis functions j and k, never on K.
void accumulate_chunk(const ProductBasis& basis, const ScoreCache& cache, Eigen::Index begin,
                      Eigen::Index count, RowMajorMatrix& partial) {
  const Eigen::Index k = basis.size();
  const Eigen::Index dim = basis.dim();
  const auto tables = basis.tabulate(cache.points.middleCols(begin, count));
  Eigen::VectorXd phi(k);
  Eigen::MatrixXd grads(k, dim);
  Eigen::MatrixXd u(k, dim);
  for (Eigen::Index b = 0; b < count; ++b) {
    basis.combine(tables, b, phi, grads);
    const auto s = cache.scores.col(begin + b);
    for (Eigen::Index d = 0; d < dim; ++d) {
      for (Eigen::Index j = 0; j < k; ++j) u(j, d) = 2.0 * grads(j, d) - phi(j) * s(d);
    }
    const double w = 1.0 / cache.proposal_density(begin + b);
    for (Eigen::Index j = 0; j < k; ++j) {
      double* row = partial.row(j).data();
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double a = w * u(j, d);
        const double* col = u.col(d).data();
        for (Eigen::Index c = j; c < k; ++c) row[c] += a * col[c];
      }
    }
  }
}

}  // namespace

ScoreCache evaluate_scores(const ScoreTarget& target, const Proposal& proposal,
                           const Eigen::Ref<const Eigen::MatrixXd>& samples,
                           const ScoreCacheOptions& options) {
  const auto start = Clock::now();
  if (samples.rows() != target.dim() || proposal.dim() != target.dim()) {
    throw DimensionMismatch("samples, proposal and target dimensions must agree");
  }
  const Eigen::Index n = samples.cols();
  ScoreCache cache;
  cache.requested = static_cast<std::size_t>(n);
  cache.points.resize(samples.rows(), n);
  cache.scores.resize(samples.rows(), n);
  cache.proposal_density.resize(n);
  Eigen::Index kept = 0;
  for (Eigen::Index b = 0; b < n; ++b) {
    const double pi = proposal.density(samples.col(b));
    if (!(pi > 0.0)) {
      throw EstimatorError("proposal density is zero at sample " + std::to_string(b) +
                           "; the importance-sampled estimator is undefined");
    }
    Eigen::VectorXd s = target.score(samples.col(b));
    ++cache.score_evaluations;
    if (s.size() != target.dim()) throw DimensionMismatch("target score has the wrong dimension");
    if (!s.allFinite()) {
      ++cache.rejected;
      continue;
    }
    cache.points.col(kept) = samples.col(b);
    cache.scores.col(kept) = s;
    cache.proposal_density(kept) = pi;
    ++kept;
  }
  if (static_cast<double>(cache.rejected) >
      options.max_reject_fraction * static_cast<double>(cache.requested)) {
    throw EstimatorError(std::to_string(cache.rejected) + " of " + std::to_string(cache.requested) +
                         " samples had non-finite scores, above the tolerated fraction");
  }
  cache.points.conservativeResize(Eigen::NoChange, kept);
  cache.scores.conservativeResize(Eigen::NoChange, kept);
  cache.proposal_density.conservativeResize(kept);
  cache.score_ms = elapsed_ms(start);
  return cache;
}

ScoreCache draw_scores(const ScoreTarget& target, const Proposal& proposal, std::size_t batch,
                       Rng& rng, const ScoreCacheOptions& options) {
  if (batch == 0) throw std::invalid_argument("batch size must be positive");
  const Eigen::MatrixXd samples = proposal.sample(rng, batch);
  return evaluate_scores(target, proposal, samples, options);
}

std::vector<Eigen::MatrixXd> feature_vectors(const ProductBasis& basis, const ScoreTarget& target,
                                             const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  if (samples.rows() != basis.dim() || target.dim() != basis.dim()) {
    throw DimensionMismatch("samples, basis and target dimensions must agree");
  }
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(samples.cols()));
  Eigen::VectorXd phi(basis.size());
  Eigen::MatrixXd grads(basis.size(), basis.dim());
  for (Eigen::Index b = 0; b < samples.cols(); ++b) {
    basis.eval_all(samples.col(b), phi, grads);
    const Eigen::VectorXd s = target.score(samples.col(b));
    out.push_back(2.0 * grads - phi * s.transpose());
  }
  return out;
}

MomentMatrix assemble_M(const ProductBasis& basis, const ScoreCache& cache,
                        const AssemblyOptions& options) {
  if (cache.dim() != basis.dim()) throw DimensionMismatch("score cache and basis dimensions differ");
  if (options.chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  for (Eigen::Index b = 0; b < cache.points.cols(); ++b) {
    if (!basis.contains(cache.points.col(b))) {
      throw DomainError("sample " + std::to_string(b) + " lies outside the basis support");
    }
    if (!(cache.proposal_density(b) > 0.0)) {
      throw EstimatorError("proposal density is zero at a cached sample");
    }
  }

  const Eigen::Index k = basis.size();
  const auto n = static_cast<Eigen::Index>(cache.size());
  const auto chunk = static_cast<Eigen::Index>(options.chunk_size);
  const Eigen::Index nchunks = (n + chunk - 1) / chunk;
  RowMajorMatrix total = RowMajorMatrix::Zero(k, k);

  auto add_upper = [&](const RowMajorMatrix& partial) {
    for (Eigen::Index j = 0; j < k; ++j) {
      total.row(j).tail(k - j) += partial.row(j).tail(k - j);
    }
  };

  unsigned workers = options.workers != 0 ? options.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<Eigen::Index>(nchunks, 1))));

  if (workers == 1) {
    RowMajorMatrix partial(k, k);
    for (Eigen::Index c = 0; c < nchunks; ++c) {
      partial.setZero();
      const Eigen::Index begin = c * chunk;
      accumulate_chunk(basis, cache, begin, std::min(chunk, n - begin), partial);
      add_upper(partial);
    }
  } else {
    // Workers pull chunks in increasing order and fold their partial into the
    // total strictly in chunk order.
    std::atomic<Eigen::Index> next_chunk{0};
    Eigen::Index next_reduce = 0;
    bool failed = false;
    std::exception_ptr error;
    std::mutex mutex;
    std::condition_variable turn;
    auto work = [&]() {
      RowMajorMatrix partial(k, k);
      for (;;) {
        const Eigen::Index c = next_chunk.fetch_add(1);
        if (c >= nchunks) return;
        try {
          partial.setZero();
          const Eigen::Index begin = c * chunk;
          accumulate_chunk(basis, cache, begin, std::min(chunk, n - begin), partial);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!error) error = std::current_exception();
          failed = true;
          turn.notify_all();
          return;
        }
        std::unique_lock lock(mutex);
        turn.wait(lock, [&] { return failed || next_reduce == c; });
        if (failed) return;
        add_upper(partial);
        ++next_reduce;
        turn.notify_all();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  MomentMatrix m;
  m.batch_size = cache.size();
  m.entries = total;
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index c = j + 1; c < k; ++c) m.entries(c, j) = m.entries(j, c);
  }
  if (!m.entries.allFinite()) throw EstimatorError("assembled matrix has non-finite entries");
  return m;
}

MomentMatrix assemble_M(const ProductBasis& basis, const ScoreTarget& target,
                        const Proposal& proposal, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                        const AssemblyOptions& options) {
  return assemble_M(basis, evaluate_scores(target, proposal, samples), options);
}

FitResult fit(const ProductBasis& basis, const ScoreCache& cache, const FitOptions& options) {
  FitDiagnostics diag;
  diag.batch_size = cache.size();
  diag.basis_size = basis.size();
  diag.rejected = cache.rejected;
  diag.score_ms = cache.score_ms;
  if (cache.size() < static_cast<std::size_t>(basis.size())) {
    diag.warnings.push_back("batch size " + std::to_string(cache.size()) +
                            " is smaller than the number of basis functions " +
                            std::to_string(basis.size()));
  }
  if (cache.rejected > 0) {
    diag.warnings.push_back(std::to_string(cache.rejected) +
                            " samples dropped for non-finite scores");
  }

  auto start = Clock::now();
  MomentMatrix m = assemble_M(basis, cache, options.assembly);
  diag.assembly_ms = elapsed_ms(start);

  start = Clock::now();
  EigenResult eig = min_eigenpair(m.entries, options.eigen);
  diag.eigensolve_ms = elapsed_ms(start);
  diag.lambda_min = eig.lambda_min;
  diag.solver_path = eig.path;

  return FitResult{OfeDensity(basis, eig.alpha), std::move(diag), std::move(m)};
}

FitResult fit(const ProductBasis& basis, const ScoreTarget& target, const Proposal& proposal,
              std::size_t batch, Rng& rng, const FitOptions& options) {
  const ScoreCache cache = draw_scores(target, proposal, batch, rng);
  FitResult result = fit(basis, cache, options);
  result.diagnostics.score_evaluations = cache.score_evaluations;
  return result;
}

}  // namespace eigenvi
