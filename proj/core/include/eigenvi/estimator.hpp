#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eigenvi/density.hpp"
#include "eigenvi/product_basis.hpp"
#include "eigenvi/proposals.hpp"
#include "eigenvi/random.hpp"
#include "eigenvi/score_target.hpp"

namespace eigenvi {

/// Proposal samples together with everything the estimator needs from the
/// target: pi(z^b) and grad log p(z^b). Scores are evaluated once when the
/// cache is built; any number of bases can then be fitted from it.
struct ScoreCache {
  Eigen::MatrixXd points;            // D x B, accepted samples only
  Eigen::VectorXd proposal_density;  // B
  Eigen::MatrixXd scores;            // D x B
  std::size_t requested = 0;         // samples offered before rejection
  std::size_t rejected = 0;          // dropped for a non-finite score
  std::size_t score_evaluations = 0;
  double score_ms = 0.0;

  int dim() const { return static_cast<int>(points.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
};

struct ScoreCacheOptions {
  /// Fraction of non-finite scores tolerated before the batch is refused.
  double max_reject_fraction = 0.01;
};

/// Evaluates target scores at the given samples. Throws EstimatorError when a
/// sample has zero proposal density or too many scores are non-finite.
ScoreCache evaluate_scores(const ScoreTarget& target, const Proposal& proposal,
                           const Eigen::Ref<const Eigen::MatrixXd>& samples,
                           const ScoreCacheOptions& options = {});

/// Draws B proposal samples, then calls evaluate_scores.
ScoreCache draw_scores(const ScoreTarget& target, const Proposal& proposal, std::size_t batch,
                       Rng& rng, const ScoreCacheOptions& options = {});

/// u_k(z) = 2 grad Phi_k(z) - Phi_k(z) grad log p(z) for every sample: one
/// K x D array per column of `samples`.
std::vector<Eigen::MatrixXd> feature_vectors(const ProductBasis& basis, const ScoreTarget& target,
                                             const Eigen::Ref<const Eigen::MatrixXd>& samples);

struct AssemblyOptions {
  /// Samples per partial matrix. Results are bitwise reproducible for a fixed
  /// chunk size whatever the number of workers.
  std::size_t chunk_size = 256;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

struct MomentMatrix {
  Eigen::MatrixXd entries;  // symmetric K x K
  std::size_t batch_size = 0;
};

/// M_jk = sum_b u_j(z^b) . u_k(z^b) / pi(z^b), with no 1/B factor. The upper
/// triangle is accumulated and mirrored, so M is exactly symmetric.
MomentMatrix assemble_M(const ProductBasis& basis, const ScoreCache& cache,
                        const AssemblyOptions& options = {});

MomentMatrix assemble_M(const ProductBasis& basis, const ScoreTarget& target,
                        const Proposal& proposal, const Eigen::Ref<const Eigen::MatrixXd>& samples,
                        const AssemblyOptions& options = {});

enum class SolverPath { Dense, Iterative, IterativeFallbackDense };

std::string_view to_string(SolverPath path);

struct EigenOptions {
  /// Largest K handled by the dense symmetric solver.
  Eigen::Index dense_limit = 2048;
  int max_iterations = 200;
  /// Relative residual ||M a - lambda a|| / ||M||_F at which inverse iteration stops.
  double tolerance = 1e-12;
};

struct EigenResult {
  double lambda_min = 0.0;
  WeightVector alpha;
  SolverPath path = SolverPath::Dense;
  int iterations = 0;
  double residual = 0.0;  // ||M a - lambda a||
};

/// Smallest eigenpair of a symmetric matrix. Dense tridiagonal solve up to
/// dense_limit; shifted inverse iteration above it, falling back to the dense
/// solver if it does not converge.
EigenResult min_eigenpair(const Eigen::MatrixXd& m, const EigenOptions& options = {});
inline EigenResult min_eigenpair(const MomentMatrix& m, const EigenOptions& options = {}) {
  return min_eigenpair(m.entries, options);
}

struct FitOptions {
  AssemblyOptions assembly;
  EigenOptions eigen;
};

struct FitDiagnostics {
  double lambda_min = 0.0;
  std::size_t batch_size = 0;
  int basis_size = 0;
  std::size_t rejected = 0;
  std::size_t score_evaluations = 0;
  double score_ms = 0.0;
  double assembly_ms = 0.0;
  double eigensolve_ms = 0.0;
  SolverPath solver_path = SolverPath::Dense;
  std::vector<std::string> warnings;
};

struct FitResult {
  OfeDensity density;
  FitDiagnostics diagnostics;
  MomentMatrix matrix;
};

/// Fits from an existing score cache; no target evaluations happen here.
FitResult fit(const ProductBasis& basis, const ScoreCache& cache, const FitOptions& options = {});

/// Draws B samples, evaluates scores once and fits.
FitResult fit(const ProductBasis& basis, const ScoreTarget& target, const Proposal& proposal,
              std::size_t batch, Rng& rng, const FitOptions& options = {});

}  // namespace eigenvi
