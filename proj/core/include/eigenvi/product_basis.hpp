#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "eigenvi/basis1d.hpp"

namespace eigenvi {

/// Cartesian product of one-dimensional families with per-dimension orders.
///
/// Multi-indices and flat indices are 1-based. Flattening is row-major: the
/// last dimension varies fastest, so for orders (3, 2) the flat order is
/// (1,1) (1,2) (2,1) (2,2) (3,1) (3,2). The sampler and moment contractions
/// rely on this layout.
class ProductBasis {
 public:
  ProductBasis(std::vector<BasisFamily> families, std::vector<int> orders);

  static ProductBasis uniform(const BasisFamily& family, int dim, int order);

  int dim() const { return static_cast<int>(families_.size()); }
  /// Total number of product functions, K = prod_d K_d.
  int size() const { return size_; }
  const std::vector<int>& orders() const { return orders_; }
  int order(int d) const { return orders_[static_cast<std::size_t>(d)]; }
  const std::vector<BasisFamily>& families() const { return families_; }
  const BasisFamily& family(int d) const { return families_[static_cast<std::size_t>(d)]; }

  int flatten(std::span<const int> multi) const;
  std::vector<int> unflatten(int flat) const;

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  /// Phi_i(z) = prod_d phi_{m_d}(z_d) with m = unflatten(i).
  double eval(int flat, const Eigen::Ref<const Eigen::VectorXd>& z) const;
  Eigen::VectorXd grad(int flat, const Eigen::Ref<const Eigen::VectorXd>& z) const;

  /// values(j) = Phi_{j+1}(z) for all j < size().
  void eval_all(const Eigen::Ref<const Eigen::VectorXd>& z, Eigen::Ref<Eigen::VectorXd> values) const;
  /// As eval_all, plus grads(j, d) = d Phi_{j+1} / d z_d. grads is K x D.
  void eval_all(const Eigen::Ref<const Eigen::VectorXd>& z, Eigen::Ref<Eigen::VectorXd> values,
                Eigen::Ref<Eigen::MatrixXd> grads) const;

  /// One-dimensional tables for a batch of points (columns of `points`):
  /// values[d] and derivs[d] are K_d x B.
  struct Tables {
    std::vector<Eigen::MatrixXd> values;
    std::vector<Eigen::MatrixXd> derivs;
  };
  Tables tabulate(const Eigen::Ref<const Eigen::MatrixXd>& points) const;

  /// Combines column b of the per-dimension tables into product values and
  /// gradients. Per-entry arithmetic depends only on the multi-index, so two
  /// bases sharing a multi-index produce bitwise-identical numbers for it.
  void combine(const Tables& tables, Eigen::Index b, Eigen::Ref<Eigen::VectorXd> values,
               Eigen::Ref<Eigen::MatrixXd> grads) const;

  bool operator==(const ProductBasis& other) const {
    return families_ == other.families_ && orders_ == other.orders_;
  }

 private:
  std::vector<BasisFamily> families_;
  std::vector<int> orders_;
  int size_ = 1;
};

/// Writes the Kronecker product of the given 1-D factors into out (row-major,
/// last factor fastest). out must have length prod_d factors[d].size().
void kron_into(std::span<const std::span<const double>> factors, std::span<double> out);

}  // namespace eigenvi
