#pragma once

#include <optional>

#include <Eigen/Core>

#include "eigenvi/product_basis.hpp"
#include "eigenvi/transform.hpp"
#include "eigenvi/weight_vector.hpp"

namespace eigenvi {

/// q(z) = (sum_k alpha_k Phi_k(z~))^2 / |det L| with z~ = L^{-1}(z - mu), or
/// plain (sum_k alpha_k Phi_k(z))^2 when no transform is attached.
class OfeDensity {
 public:
  OfeDensity(ProductBasis basis, WeightVector alpha,
             std::optional<StandardizingTransform> transform = std::nullopt);

  int dim() const { return basis_.dim(); }
  const ProductBasis& basis() const { return basis_; }
  const WeightVector& alpha() const { return alpha_; }
  const std::optional<StandardizingTransform>& transform() const { return transform_; }

  /// Maps an original-coordinate point to the coordinates of the basis.
  Eigen::VectorXd to_basis_coordinates(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  /// sum_k alpha_k Phi_k(zt) at a point already in basis coordinates.
  double expansion(const Eigen::Ref<const Eigen::VectorXd>& zt) const;

  /// Throws DomainError outside the support.
  double density(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// -inf at exact zeros of the expansion; throws DomainError outside the support.
  double log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  /// grad log q. Throws PoleError where the expansion vanishes.
  Eigen::VectorXd score(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  /// Copy with the transform attached; throws if one is already attached.
  OfeDensity with_transform(const StandardizingTransform& t) const;

 private:
  ProductBasis basis_;
  WeightVector alpha_;
  std::optional<StandardizingTransform> transform_;
};

double density_eval(const OfeDensity& q, const Eigen::Ref<const Eigen::VectorXd>& z);
double log_density(const OfeDensity& q, const Eigen::Ref<const Eigen::VectorXd>& z);
Eigen::VectorXd score(const OfeDensity& q, const Eigen::Ref<const Eigen::VectorXd>& z);

/// Coefficients S of the marginal over the first `keep` dimensions, in basis
/// coordinates: S[i, i'] = sum_t beta[i, t] beta[i', t], where i runs over
/// the flattened kept multi-indices and t over the contracted tail.
/// Requires 1 <= keep < dim(). The keep = 1 case is the first conditional
/// coefficient matrix of the sequential sampler and has unit trace.
Eigen::MatrixXd marginal_coefficients(const OfeDensity& q, int keep);

/// Density of the first `keep` coordinates, evaluated in original coordinates.
/// The transform (if any) restricts exactly to a prefix because L is lower
/// triangular.
class MarginalDensity {
 public:
  MarginalDensity(const OfeDensity& q, int keep);

  int dim() const { return basis_.dim(); }
  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  double density(const Eigen::Ref<const Eigen::VectorXd>& z_prefix) const;

 private:
  ProductBasis basis_;
  Eigen::MatrixXd coefficients_;
  std::optional<StandardizingTransform> transform_;
};

/// A_ij: contraction over every dimension except d (the 1-D marginal of
/// coordinate d in basis coordinates has coefficients A).
Eigen::MatrixXd dimension_coefficients(const OfeDensity& q, int d);

/// B_ijkl for dimensions d != e, returned as a (K_d K_e) x (K_d K_e) matrix
/// with row (i, k) -> i * K_e + k and column (j, l) -> j * K_e + l, so that
/// E[z_d z_e] = sum B_(ik),(jl) mu_ij mu_kl in basis coordinates.
Eigen::MatrixXd pair_coefficients(const OfeDensity& q, int d, int e);

}  // namespace eigenvi
