#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "eigenvi/basis1d.hpp"

namespace eigenvi {

struct CdfGridOptions {
  /// Hermite grid half-width. It is widened automatically to cover the
  /// oscillatory region sqrt(4K + 2) of the highest basis function plus a
  /// margin of 6, keeping the node spacing of the default grid.
  double hermite_half_width = 12.0;
  /// Number of grid points for the default Hermite half-width and for the
  /// bounded supports.
  int points = 4001;
  /// Largest tolerated |Phi_kl(xi_G) - delta_kl|.
  double end_tolerance = 1e-6;
};

/// Tabulated partial integrals Phi_kl(xi_g) = int_{lo}^{xi_g} phi_k phi_l for
/// one family and order K. Storage is packed upper-triangular per grid point:
/// index(k, l) for 0 <= k <= l < K.
class CdfTable {
 public:
  static CdfTable build(const BasisFamily& family, int order, const CdfGridOptions& options = {});

  const BasisFamily& family() const { return family_; }
  int order() const { return order_; }
  const Eigen::VectorXd& grid() const { return grid_; }
  Eigen::Index grid_size() const { return grid_.size(); }

  /// Phi_{k+1, l+1}(xi_g), 0-based k, l.
  double phi(Eigen::Index g, int k, int l) const;
  /// Full K x K matrix at grid point g.
  Eigen::MatrixXd phi_matrix(Eigen::Index g) const;

  /// Weights w over packed pairs such that trace(S Phi(xi_g)) = sum_p w_p Phi_p(xi_g).
  Eigen::VectorXd packed_weights(const Eigen::Ref<const Eigen::MatrixXd>& s) const;

  /// C(xi_g) for all g given packed weights.
  Eigen::VectorXd cdf_values(const Eigen::Ref<const Eigen::VectorXd>& packed) const;

  /// C(xi) = trace(S Phi(xi)) by linear interpolation between grid points.
  double cdf(const Eigen::Ref<const Eigen::MatrixXd>& s, double xi) const;

  struct Inversion {
    double xi;
    bool clipped;  // u fell outside [C(xi_1), C(xi_G)] and was clamped
  };
  /// Solves C(xi) = u: binary search over the packed table for the bracketing
  /// cell, then linear interpolation inside it. Only O(log G) cells are
  /// touched.
  Inversion invert(const Eigen::Ref<const Eigen::VectorXd>& packed, double u) const;

 private:
  CdfTable(BasisFamily family, int order, Eigen::VectorXd grid, Eigen::MatrixXd table);

  double c_at(const Eigen::Ref<const Eigen::VectorXd>& packed, Eigen::Index g) const {
    return table_.col(g).dot(packed);
  }

  BasisFamily family_;
  int order_;
  Eigen::VectorXd grid_;
  Eigen::MatrixXd table_;  // packed pairs x grid points
};

/// Shared, lazily built table for (family, order, options). Thread-safe.
std::shared_ptr<const CdfTable> cdf_table_for(const BasisFamily& family, int order,
                                              const CdfGridOptions& options = {});

}  // namespace eigenvi
