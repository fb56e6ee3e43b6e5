#pragma once

#include <Eigen/Core>

namespace eigenvi {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b]; exact for polynomials of
/// degree 2n - 1.
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// `panels` equal sub-intervals of [a, b], each with an n-point Gauss-Legendre
/// rule.
QuadratureRule composite_gauss_legendre(int panels, int n, double a, double b);

}  // namespace eigenvi
