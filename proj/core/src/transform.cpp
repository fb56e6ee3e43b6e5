#include "eigenvi/transform.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "eigenvi/errors.hpp"

namespace eigenvi {

StandardizingTransform::StandardizingTransform(Eigen::VectorXd location, Eigen::MatrixXd scale)
    : location_(std::move(location)), scale_(std::move(scale)) {
  const auto n = location_.size();
  if (n == 0) throw std::invalid_argument("transform dimension must be positive");
  if (scale_.rows() != n || scale_.cols() != n) {
    throw DimensionMismatch("transform scale must be a square matrix matching the location");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(scale_(i, i) > 0.0) || !std::isfinite(scale_(i, i))) {
      throw std::invalid_argument("transform scale must have a positive finite diagonal");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (scale_(i, j) != 0.0) throw std::invalid_argument("transform scale must be lower triangular");
    }
    log_abs_det_ += std::log(scale_(i, i));
  }
  if (!location_.allFinite() || !scale_.allFinite()) {
    throw std::invalid_argument("transform parameters must be finite");
  }
}

StandardizingTransform StandardizingTransform::identity(int dim) {
  return StandardizingTransform(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim));
}

StandardizingTransform StandardizingTransform::from_mean_covariance(const Eigen::VectorXd& mean,
                                                                    const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw DimensionMismatch("covariance shape does not match the mean");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (covariance + covariance.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("covariance is not positive definite");
  }
  Eigen::MatrixXd l = llt.matrixL();
  return StandardizingTransform(mean, std::move(l));
}

Eigen::VectorXd StandardizingTransform::to_standard(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != location_.size()) throw DimensionMismatch("point dimension differs from transform");
  return scale_.triangularView<Eigen::Lower>().solve(z - location_);
}

Eigen::VectorXd StandardizingTransform::from_standard(
    const Eigen::Ref<const Eigen::VectorXd>& zt) const {
  if (zt.size() != location_.size()) throw DimensionMismatch("point dimension differs from transform");
  return scale_.triangularView<Eigen::Lower>() * zt + location_;
}

Eigen::MatrixXd StandardizingTransform::from_standard_batch(
    const Eigen::Ref<const Eigen::MatrixXd>& zt) const {
  if (zt.rows() != location_.size()) throw DimensionMismatch("point dimension differs from transform");
  Eigen::MatrixXd out = scale_.triangularView<Eigen::Lower>() * zt;
  out.colwise() += location_;
  return out;
}

Eigen::VectorXd StandardizingTransform::pull_gradient(
    const Eigen::Ref<const Eigen::VectorXd>& g_standard) const {
  return scale_.transpose().triangularView<Eigen::Upper>().solve(g_standard);
}

Eigen::VectorXd StandardizingTransform::push_gradient(const Eigen::Ref<const Eigen::VectorXd>& g) const {
  return scale_.transpose().triangularView<Eigen::Upper>() * g;
}

}  // namespace eigenvi
