#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eigenvi/density.hpp"
#include "eigenvi/random.hpp"
#include "eigenvi/score_target.hpp"

namespace eigenvi {

/// Normalized target with an exact sampler, used for forward-KL evaluation.
class SyntheticTarget : public ScoreTarget {
 public:
  /// n exact draws as the columns of a D x n matrix.
  virtual Eigen::MatrixXd sample(Rng& rng, std::size_t n) const = 0;
  virtual std::string name() const = 0;
};

class GaussianTarget final : public SyntheticTarget {
 public:
  GaussianTarget(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
  static GaussianTarget standard(int dim);

  int dim() const override { return static_cast<int>(mean_.size()); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::MatrixXd sample(Rng& rng, std::size_t n) const override;
  std::string name() const override { return "gaussian"; }

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  /// Draws from N(mean, covariance) using the caller's standard normals.
  Eigen::VectorXd transform_standard(const Eigen::Ref<const Eigen::VectorXd>& eps) const {
    return mean_ + chol_ * eps;
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd chol_;  // lower Cholesky factor of covariance_
  double log_norm_ = 0.0;
};

class GaussianMixtureTarget final : public SyntheticTarget {
 public:
  GaussianMixtureTarget(std::vector<double> weights, std::vector<GaussianTarget> components,
                        std::string name = "gaussian_mixture");

  int dim() const override { return components_.front().dim(); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  /// Responsibility-weighted component scores.
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::MatrixXd sample(Rng& rng, std::size_t n) const override;
  std::string name() const override { return name_; }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<GaussianTarget>& components() const { return components_; }

 private:
  std::vector<double> weights_;
  std::vector<GaussianTarget> components_;
  std::string name_;
};

/// p(z) = N(z_1 | 0, sigma2) N(z_2 | 0, exp(z_1 / 2)). The second argument of
/// each N is a variance, so z_2 has standard deviation exp(z_1 / 4).
class FunnelTarget final : public SyntheticTarget {
 public:
  explicit FunnelTarget(double sigma2 = 1.2);

  int dim() const override { return 2; }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::MatrixXd sample(Rng& rng, std::size_t n) const override;
  std::string name() const override { return "funnel"; }

  double sigma2() const { return sigma2_; }

 private:
  double sigma2_;
};

/// Sinh-arcsinh normal: Z = sinh((asinh(Z0) + s) / tau) with Z0 ~ N(0, Sigma),
/// the inverse of S(z) = sinh(tau asinh(z) - s) applied coordinate-wise.
/// s = 0, tau = 1 gives N(0, Sigma).
class SinhArcsinhTarget final : public SyntheticTarget {
 public:
  SinhArcsinhTarget(Eigen::VectorXd skew, Eigen::VectorXd tail, Eigen::MatrixXd covariance,
                    std::string name = "sinh_arcsinh");

  int dim() const override { return static_cast<int>(skew_.size()); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::MatrixXd sample(Rng& rng, std::size_t n) const override;
  std::string name() const override { return name_; }

  const Eigen::VectorXd& skew() const { return skew_; }
  const Eigen::VectorXd& tail() const { return tail_; }
  const Eigen::MatrixXd& covariance() const { return base_.covariance(); }

 private:
  Eigen::VectorXd skew_;
  Eigen::VectorXd tail_;
  GaussianTarget base_;
  Eigen::MatrixXd precision_;
  std::string name_;
};

/// A fitted squared expansion used as a target; normalized by construction.
class ExpansionTarget final : public SyntheticTarget {
 public:
  explicit ExpansionTarget(OfeDensity q) : q_(std::move(q)) {}

  int dim() const override { return q_.dim(); }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::MatrixXd sample(Rng& rng, std::size_t n) const override;
  std::string name() const override { return "expansion"; }

  const OfeDensity& density() const { return q_; }

 private:
  OfeDensity q_;
};

/// Fixed benchmark targets.
std::shared_ptr<SyntheticTarget> standard_gaussian_target(int dim);
/// 0.4 N([-1, 1], [[2, 0.1], [0.1, 2]]) + 0.3 N([1.1, 1.1], 0.5 I) + 0.3 N([-1, -1], 0.5 I).
std::shared_ptr<SyntheticTarget> mixture_2d();
std::shared_ptr<SyntheticTarget> funnel_2d(double sigma2 = 1.2);
/// Four equal-weight components at (0, +-2) and (+-2, 0), elongated along
/// their axis with short-side variance 0.15^0.9.
std::shared_ptr<SyntheticTarget> cross_2d();
/// 0.4 N(-1.5, 0.5) + 0.6 N(1.0, 0.6) (variances).
std::shared_ptr<SyntheticTarget> bimodal_1d();
/// variant 1: s = (0.2, 0.2), tau = (1.1, 1.1); 2: s = (0.2, 0.5), tau = (1.1, 1.1);
/// 3: s = (0.2, 0.2), tau = (1.4, 1.1). Sigma = I.
std::shared_ptr<SyntheticTarget> sinh_arcsinh_2d(int variant);
/// Five-dimensional variants 1..3 sharing a coupled covariance.
std::shared_ptr<SyntheticTarget> sinh_arcsinh_5d(int variant);

/// Names accepted by target_by_name.
std::vector<std::string> fixture_names();
/// "gaussian_<D>d" for the standard normal, or any fixture name
/// ("mixture_2d", "funnel_2d", "cross_2d", "bimodal_1d",
/// "sinh_arcsinh_2d_<v>", "sinh_arcsinh_5d_<v>").
std::shared_ptr<SyntheticTarget> target_by_name(const std::string& name);

}  // namespace eigenvi
