#include "eigenvi/standardize.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "eigenvi/errors.hpp"

namespace eigenvi {

TransformEstimate estimate_transform(const ScoreTarget& target, const Proposal& proposal,
                                     std::size_t batch, Rng& rng,
                                     const StandardizeOptions& options) {
  if (batch == 0) throw std::invalid_argument("batch size must be positive");
  if (proposal.dim() != target.dim()) throw DimensionMismatch("proposal and target dimensions differ");
  const int dim = target.dim();
  const Eigen::MatrixXd z = proposal.sample(rng, batch);
  const auto n = static_cast<Eigen::Index>(batch);

  Eigen::VectorXd logw(n);
  double max_logw = -std::numeric_limits<double>::infinity();
  for (Eigen::Index b = 0; b < n; ++b) {
    const double lw = target.log_density(z.col(b)) - proposal.log_density(z.col(b));
    logw(b) = std::isnan(lw) ? -std::numeric_limits<double>::infinity() : lw;
    max_logw = std::max(max_logw, logw(b));
  }
  if (!std::isfinite(max_logw)) {
    throw EstimatorError("all importance weights vanish; the proposal misses the target");
  }
  Eigen::VectorXd w = (logw.array() - max_logw).exp();
  const double sum = w.sum();
  const double ess = sum * sum / w.squaredNorm();
  w /= sum;

  const Eigen::VectorXd mean = z * w;
  const Eigen::MatrixXd centered = z.colwise() - mean;
  Eigen::MatrixXd cov = centered * w.asDiagonal() * centered.transpose();
  cov = 0.5 * (cov + cov.transpose());
  const double ridge = options.regularization * cov.trace() / dim;
  cov.diagonal().array() += ridge;

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success || !(llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all()) {
    throw EstimatorError("estimated covariance is not positive definite after regularization");
  }
  return {StandardizingTransform(mean, llt.matrixL().toDenseMatrix()), ess};
}

StandardizedTarget::StandardizedTarget(std::shared_ptr<const ScoreTarget> base,
                                       StandardizingTransform transform)
    : base_(std::move(base)), transform_(std::move(transform)) {
  if (!base_) throw std::invalid_argument("standardized target needs a base target");
  if (base_->dim() != transform_.dim()) throw DimensionMismatch("transform and target dimensions differ");
}

double StandardizedTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& zt) const {
  return base_->log_density(transform_.from_standard(zt)) + transform_.log_abs_det();
}

Eigen::VectorXd StandardizedTarget::score(const Eigen::Ref<const Eigen::VectorXd>& zt) const {
  return transform_.push_gradient(base_->score(transform_.from_standard(zt)));
}

std::shared_ptr<StandardizedTarget> push_target(std::shared_ptr<const ScoreTarget> target,
                                                const StandardizingTransform& t) {
  return std::make_shared<StandardizedTarget>(std::move(target), t);
}

OfeDensity pull_density(const OfeDensity& qtilde, const StandardizingTransform& t) {
  return qtilde.with_transform(t);
}

}  // namespace eigenvi
