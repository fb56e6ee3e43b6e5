#include "eigenvi/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eigenvi {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
  if (!(a < b)) throw std::invalid_argument("quadrature interval must satisfy a < b");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  // Newton iteration on P_n from the Chebyshev-like initial guess; nodes come
  // in symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = mid - half * x;
    rule.nodes(n - 1 - i) = mid + half * x;
    rule.weights(i) = half * w;
    rule.weights(n - 1 - i) = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int n, double a, double b) {
  if (panels < 1) throw std::invalid_argument("composite rule needs at least one panel");
  QuadratureRule out{Eigen::VectorXd(panels * n), Eigen::VectorXd(panels * n)};
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = p + 1 == panels ? b : lo + width;
    const QuadratureRule r = gauss_legendre(n, lo, hi);
    out.nodes.segment(p * n, n) = r.nodes;
    out.weights.segment(p * n, n) = r.weights;
  }
  return out;
}

}  // namespace eigenvi
