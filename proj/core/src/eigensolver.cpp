#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "eigenvi/errors.hpp"
#include "eigenvi/estimator.hpp"

namespace eigenvi {

std::string_view to_string(SolverPath path) {
  switch (path) {
    case SolverPath::Dense: return "dense";
    case SolverPath::Iterative: return "iterative";
    case SolverPath::IterativeFallbackDense: return "iterative_fallback_dense";
  }
  return "unknown";
}

namespace {

EigenResult dense_min_eigenpair(const Eigen::MatrixXd& m, SolverPath path) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw EstimatorError("dense eigensolver did not converge");
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  canonicalize_sign(v);
  WeightVector alpha(v);
  const double lambda = solver.eigenvalues()(0);
  const double residual = (m * alpha.values() - lambda * alpha.values()).norm();
  return EigenResult{lambda, std::move(alpha), path, 0, residual};
}

// Inverse iteration on M + delta I, which is positive definite whenever M is
// PSD. Converges to the eigenvector of the smallest eigenvalue at a rate set
// by the ratio (lambda_1 + delta) / (lambda_2 + delta).
std::optional<EigenResult> inverse_iteration(const Eigen::MatrixXd& m, const EigenOptions& options) {
  const Eigen::Index k = m.rows();
  const double scale = m.norm();
  if (scale == 0.0) return std::nullopt;
  double delta = 1e-10 * scale;
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (int attempt = 0; attempt < 8; ++attempt) {
    llt.compute(m + delta * Eigen::MatrixXd::Identity(k, k));
    if (llt.info() == Eigen::Success) break;
    delta *= 100.0;
  }
  if (llt.info() != Eigen::Success) return std::nullopt;

  // Deterministic start with weight on every coordinate.
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(k, 1.0, 2.0).normalized();
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iterations; ++it) {
    v = llt.solve(v);
    const double n = v.norm();
    if (!std::isfinite(n) || n == 0.0) return std::nullopt;
    v /= n;
    const Eigen::VectorXd mv = m * v;
    lambda = v.dot(mv);
    residual = (mv - lambda * v).norm();
    if (residual <= options.tolerance * scale) {
      canonicalize_sign(v);
      return EigenResult{lambda, WeightVector(v), SolverPath::Iterative, it, residual};
    }
  }
  return std::nullopt;
}

}  // namespace

EigenResult min_eigenpair(const Eigen::MatrixXd& m, const EigenOptions& options) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch("eigenproblem needs a nonempty square matrix");
  }
  if (!m.allFinite()) throw EstimatorError("matrix has non-finite entries");
  const double tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
  if (((m - m.transpose()).cwiseAbs().array() > tol).any()) {
    throw std::invalid_argument("matrix is not symmetric");
  }
  if (m.rows() <= options.dense_limit) return dense_min_eigenpair(m, SolverPath::Dense);
  if (auto result = inverse_iteration(m, options)) return std::move(*result);
  return dense_min_eigenpair(m, SolverPath::IterativeFallbackDense);
}

}  // namespace eigenvi
