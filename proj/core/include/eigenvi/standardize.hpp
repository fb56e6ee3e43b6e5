#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Core>

#include "eigenvi/density.hpp"
#include "eigenvi/proposals.hpp"
#include "eigenvi/random.hpp"
#include "eigenvi/score_target.hpp"
#include "eigenvi/transform.hpp"

namespace eigenvi {

struct StandardizeOptions {
  /// Added to the covariance diagonal as a multiple of trace / D before the
  /// Cholesky factorization.
  double regularization = 1e-8;
};

struct TransformEstimate {
  StandardizingTransform transform;
  /// (sum w)^2 / sum w^2 of the importance weights.
  double effective_sample_size = 0.0;
};

/// Self-normalized importance sampling estimate of the target mean and
/// covariance, with weights rho(z) / pi(z) over B draws from `proposal`
/// (which lives in the original coordinates here). Throws EstimatorError when
/// every weight vanishes or the regularized covariance is not positive
/// definite.
TransformEstimate estimate_transform(const ScoreTarget& target, const Proposal& proposal,
                                     std::size_t batch, Rng& rng,
                                     const StandardizeOptions& options = {});

/// Target seen in standardized coordinates:
/// log p~(z~) = log p(L z~ + mu) + log |det L|, grad = L^T grad log p(L z~ + mu).
class StandardizedTarget final : public ScoreTarget {
 public:
  StandardizedTarget(std::shared_ptr<const ScoreTarget> base, StandardizingTransform transform);

  int dim() const override { return base_->dim(); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& zt) const override;
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& zt) const override;

  const ScoreTarget& base() const { return *base_; }
  const StandardizingTransform& transform() const { return transform_; }

 private:
  std::shared_ptr<const ScoreTarget> base_;
  StandardizingTransform transform_;
};

std::shared_ptr<StandardizedTarget> push_target(std::shared_ptr<const ScoreTarget> target,
                                                const StandardizingTransform& t);

/// Attaches t to a density fitted in standardized coordinates. Throws
/// std::logic_error if qtilde already carries a transform.
OfeDensity pull_density(const OfeDensity& qtilde, const StandardizingTransform& t);

}  // namespace eigenvi
