#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Core>

namespace eigenvi {

/// A target known up to a normalizing constant: log rho(z) and the score
/// grad log p(z). The score must be the gradient of log_density.
class ScoreTarget {
 public:
  virtual ~ScoreTarget() = default;

  virtual int dim() const = 0;
  virtual double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const = 0;
  virtual Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const = 0;
};

/// Adapts a pair of callables to the ScoreTarget interface.
class FunctionTarget final : public ScoreTarget {
 public:
  using LogDensityFn = std::function<double(const Eigen::VectorXd&)>;
  using ScoreFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  FunctionTarget(int dim, LogDensityFn log_density, ScoreFn score);

  int dim() const override { return dim_; }
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const override;
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const override;

 private:
  int dim_;
  LogDensityFn log_density_;
  ScoreFn score_;
};

}  // namespace eigenvi
