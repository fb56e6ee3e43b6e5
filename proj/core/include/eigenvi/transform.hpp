#pragma once

#include <Eigen/Core>

namespace eigenvi {

/// Affine change of variables z~ = L^{-1} (z - mu), with L lower triangular and
/// L L^T = Sigma. Because L is triangular, the first r coordinates of z depend
/// only on the first r coordinates of z~, which keeps prefix marginals of a
/// transformed density in closed form.
class StandardizingTransform {
 public:
  /// Validates that L is lower triangular with a strictly positive diagonal.
  StandardizingTransform(Eigen::VectorXd location, Eigen::MatrixXd scale);

  static StandardizingTransform identity(int dim);
  /// Cholesky factor of the given covariance; throws if it is not positive
  /// definite.
  static StandardizingTransform from_mean_covariance(const Eigen::VectorXd& mean,
                                                     const Eigen::MatrixXd& covariance);

  int dim() const { return static_cast<int>(location_.size()); }
  const Eigen::VectorXd& location() const { return location_; }
  const Eigen::MatrixXd& scale() const { return scale_; }
  Eigen::MatrixXd covariance() const { return scale_ * scale_.transpose(); }

  /// z -> z~
  Eigen::VectorXd to_standard(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// z~ -> z
  Eigen::VectorXd from_standard(const Eigen::Ref<const Eigen::VectorXd>& zt) const;
  /// Column-wise from_standard.
  Eigen::MatrixXd from_standard_batch(const Eigen::Ref<const Eigen::MatrixXd>& zt) const;

  /// L^{-T} g: maps a gradient with respect to z~ to one with respect to z.
  Eigen::VectorXd pull_gradient(const Eigen::Ref<const Eigen::VectorXd>& g_standard) const;
  /// L^T g: maps a gradient with respect to z to one with respect to z~.
  Eigen::VectorXd push_gradient(const Eigen::Ref<const Eigen::VectorXd>& g) const;

  /// log |det L| = sum_d log L_dd.
  double log_abs_det() const { return log_abs_det_; }

 private:
  Eigen::VectorXd location_;
  Eigen::MatrixXd scale_;
  double log_abs_det_ = 0.0;
};

}  // namespace eigenvi
