#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "eigenvi/random.hpp"

namespace eigenvi {

/// Sampling distribution for the importance-weighted Fisher divergence
/// estimator. When a standardizing transform is used the proposal lives in the
/// standardized coordinates.
class Proposal {
 public:
  enum class Kind { UniformBox, IsotropicGaussian };

  static Proposal uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Proposal uniform_box(int dim, double lo, double hi);
  static Proposal isotropic_gaussian(Eigen::VectorXd mean, double variance);
  static Proposal isotropic_gaussian(int dim, double variance);

  /// Uniform on [-6, 6]^D.
  static Proposal default_uniform(int dim) { return uniform_box(dim, -6.0, 6.0); }
  /// Centered Gaussian with variance 9, for heavy-tailed targets.
  static Proposal default_gaussian(int dim) { return isotropic_gaussian(dim, 9.0); }

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(a_.size()); }
  /// Lower corner (box) or mean (Gaussian).
  const Eigen::VectorXd& lower() const { return a_; }
  const Eigen::VectorXd& upper() const { return b_; }
  const Eigen::VectorXd& mean() const { return a_; }
  double variance() const { return variance_; }

  double density(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  /// n i.i.d. draws as the columns of a D x n matrix.
  Eigen::MatrixXd sample(Rng& rng, std::size_t n) const;

  std::string describe() const;

 private:
  Proposal(Kind kind, Eigen::VectorXd a, Eigen::VectorXd b, double variance);

  Kind kind_;
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
  double variance_ = 0.0;
  double log_norm_ = 0.0;
};

double proposal_density(const Proposal& p, const Eigen::Ref<const Eigen::VectorXd>& z);
Eigen::MatrixXd proposal_sample(const Proposal& p, Rng& rng, std::size_t n);

}  // namespace eigenvi
