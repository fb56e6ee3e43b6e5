#pragma once

#include <Eigen/Core>

#include "eigenvi/basis1d.hpp"
#include "eigenvi/density.hpp"

namespace eigenvi {

/// mu_ij = int z phi_i(z) phi_j(z) dz for 1 <= i, j <= order (0-based
/// storage). Closed form for the Hermite family, where it is tridiagonal with
/// mu_{j+1, j} = sqrt(j); Gauss-Legendre quadrature for the other families.
Eigen::MatrixXd position_integrals(const BasisFamily& family, int order);

/// nu_ij = int z^2 phi_i(z) phi_j(z) dz. Hermite: nu_jj = 2j - 1 and
/// nu_{j+2, j} = sqrt(j (j + 1)); quadrature otherwise.
Eigen::MatrixXd squared_position_integrals(const BasisFamily& family, int order);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// First and second moments in original coordinates. Basis-coordinate moments
/// come from contracting alpha against mu and nu; an attached transform maps
/// them through m = L m~ + mu, C = L C~ L^T.
Moments moments(const OfeDensity& q);
Eigen::VectorXd mean(const OfeDensity& q);
Eigen::MatrixXd covariance(const OfeDensity& q);

}  // namespace eigenvi
