#include "eigenvi/score_target.hpp"

#include <stdexcept>

#include "eigenvi/errors.hpp"

namespace eigenvi {

FunctionTarget::FunctionTarget(int dim, LogDensityFn log_density, ScoreFn score)
    : dim_(dim), log_density_(std::move(log_density)), score_(std::move(score)) {
  if (dim_ < 1) throw std::invalid_argument("target dimension must be positive");
  if (!log_density_ || !score_) throw std::invalid_argument("target callables must be set");
}

double FunctionTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim_) throw DimensionMismatch("point dimension differs from target dimension");
  return log_density_(z);
}

Eigen::VectorXd FunctionTarget::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim_) throw DimensionMismatch("point dimension differs from target dimension");
  return score_(z);
}

}  // namespace eigenvi
