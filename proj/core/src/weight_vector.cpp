#include "eigenvi/weight_vector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eigenvi {

void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0.0) v = -v;
}

WeightVector::WeightVector(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() == 0) throw std::invalid_argument("weight vector must be nonempty");
  if (!alpha_.allFinite()) throw std::invalid_argument("weight vector has non-finite entries");
  const double norm = alpha_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("weight vector must have unit norm (got " + std::to_string(norm) + ")");
  }
  // Leave vectors that are already unit norm to round-off untouched so that
  // serialized weights reload bit-for-bit.
  if (std::abs(norm - 1.0) > 1e-13) alpha_ /= norm;
  canonicalize_sign(alpha_);
}

WeightVector WeightVector::from_unnormalized(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  return WeightVector(v / norm);
}

}  // namespace eigenvi
