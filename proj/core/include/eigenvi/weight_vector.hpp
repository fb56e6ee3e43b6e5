#pragma once

#include <Eigen/Core>

namespace eigenvi {

/// Unit-norm coefficient vector over a flattened product basis.
///
/// The sign is canonical: the first entry of largest magnitude is
/// nonnegative. Construction normalizes and canonicalizes; inputs that are far
/// from unit norm are rejected so that a mis-scaled vector does not silently
/// turn into a different density.
class WeightVector {
 public:
  /// Relative deviation of the input norm from 1 above which construction fails.
  static constexpr double kNormTolerance = 1e-6;

  explicit WeightVector(Eigen::VectorXd alpha);

  /// Normalizes any nonzero vector first.
  static WeightVector from_unnormalized(const Eigen::VectorXd& v);

  Eigen::Index size() const { return alpha_.size(); }
  const Eigen::VectorXd& values() const { return alpha_; }
  double operator()(Eigen::Index i) const { return alpha_(i); }

 private:
  Eigen::VectorXd alpha_;
};

/// Flips v in place so that its first largest-magnitude entry is nonnegative.
void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v);

}  // namespace eigenvi
