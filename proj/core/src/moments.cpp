#include "eigenvi/moments.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "eigenvi/errors.hpp"
#include "eigenvi/quadrature.hpp"

namespace eigenvi {

namespace {

struct Triplet {
  Eigen::Index row;
  Eigen::Index col;
  double value;
};

QuadratureRule rule_for(const BasisFamily& family, int order) {
  switch (family.kind()) {
    case BasisKind::Legendre:
      // Integrands are polynomials of degree 2 order.
      return gauss_legendre(order + 2, -1.0, 1.0);
    case BasisKind::Fourier:
      return composite_gauss_legendre(4 * order + 16, 20, 0.0, 2.0 * std::numbers::pi);
    case BasisKind::LaguerreWeighted:
      return composite_gauss_legendre(8 * order + 64, 20, 0.0, 8.0 * order + 120.0);
    case BasisKind::HermiteWeighted:
      break;
  }
  throw std::logic_error("no quadrature rule for this family");
}

Eigen::MatrixXd weighted_gram(const BasisFamily& family, int order, int power) {
  const QuadratureRule rule = rule_for(family, order);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(order, order);
  std::vector<double> v(static_cast<std::size_t>(order));
  for (Eigen::Index n = 0; n < rule.nodes.size(); ++n) {
    const double z = rule.nodes(n);
    family.tabulate_unchecked(z, v);
    Eigen::Map<const Eigen::VectorXd> phi(v.data(), order);
    out.noalias() += (rule.weights(n) * std::pow(z, power)) * phi * phi.transpose();
  }
  return out;
}

void check_order(const BasisFamily& family, int order) {
  if (order < 1) throw IndexError("moment integrals need order >= 1");
  if (order > family.max_order()) throw CapacityError("order exceeds the family maximum");
}

std::vector<Triplet> nonzeros(const Eigen::MatrixXd& m) {
  const double cut = 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff());
  std::vector<Triplet> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > cut) out.push_back({i, j, m(i, j)});
    }
  }
  return out;
}

double contract(const Eigen::MatrixXd& a, const std::vector<Triplet>& m) {
  double s = 0.0;
  for (const auto& t : m) s += a(t.row, t.col) * t.value;
  return s;
}

}  // namespace

Eigen::MatrixXd position_integrals(const BasisFamily& family, int order) {
  check_order(family, order);
  if (family.kind() != BasisKind::HermiteWeighted) return weighted_gram(family, order, 1);
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(order, order);
  for (int j = 1; j < order; ++j) {
    // 1-based: mu_{j+1, j} = mu_{j, j+1} = sqrt(j).
    mu(j, j - 1) = mu(j - 1, j) = std::sqrt(static_cast<double>(j));
  }
  return mu;
}

Eigen::MatrixXd squared_position_integrals(const BasisFamily& family, int order) {
  check_order(family, order);
  if (family.kind() != BasisKind::HermiteWeighted) return weighted_gram(family, order, 2);
  Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(order, order);
  for (int j = 1; j <= order; ++j) {
    nu(j - 1, j - 1) = 2.0 * j - 1.0;
    if (j + 2 <= order) {
      nu(j + 1, j - 1) = nu(j - 1, j + 1) = std::sqrt(static_cast<double>(j) * (j + 1));
    }
  }
  return nu;
}

Moments moments(const OfeDensity& q) {
  const auto& basis = q.basis();
  const int dim = basis.dim();
  std::vector<std::vector<Triplet>> mu(static_cast<std::size_t>(dim));
  Eigen::VectorXd m(dim);
  Eigen::MatrixXd c(dim, dim);
  for (int d = 0; d < dim; ++d) {
    const auto& fam = basis.family(d);
    const int kd = basis.order(d);
    mu[static_cast<std::size_t>(d)] = nonzeros(position_integrals(fam, kd));
    const auto nu = nonzeros(squared_position_integrals(fam, kd));
    const Eigen::MatrixXd a = dimension_coefficients(q, d);
    m(d) = contract(a, mu[static_cast<std::size_t>(d)]);
    c(d, d) = contract(a, nu) - m(d) * m(d);
  }
  for (int d = 0; d < dim; ++d) {
    for (int e = d + 1; e < dim; ++e) {
      const Eigen::MatrixXd b = pair_coefficients(q, d, e);
      const Eigen::Index ke = basis.order(e);
      double s = 0.0;
      for (const auto& x : mu[static_cast<std::size_t>(d)]) {
        for (const auto& y : mu[static_cast<std::size_t>(e)]) {
          s += b(x.row * ke + y.row, x.col * ke + y.col) * x.value * y.value;
        }
      }
      c(d, e) = c(e, d) = s - m(d) * m(e);
    }
  }
  if (q.transform()) {
    const auto& t = *q.transform();
    return {t.scale() * m + t.location(), t.scale() * c * t.scale().transpose()};
  }
  return {m, c};
}

Eigen::VectorXd mean(const OfeDensity& q) { return moments(q).mean; }

Eigen::MatrixXd covariance(const OfeDensity& q) { return moments(q).covariance; }

}  // namespace eigenvi
