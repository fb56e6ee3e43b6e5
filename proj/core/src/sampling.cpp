#include "eigenvi/sampling.hpp"

#include <memory>
#include <random>
#include <vector>

#include "eigenvi/errors.hpp"

namespace eigenvi {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Contracts the leading index of the K_d x T coefficient block with phi:
// next(t) = sum_k phi_k coeffs(k, t).
Eigen::VectorXd contract(const Eigen::VectorXd& coeffs, Eigen::Index kd,
                         const std::vector<double>& phi) {
  const Eigen::Index t = coeffs.size() / kd;
  Eigen::Map<const RowMajorMatrix> c(coeffs.data(), kd, t);
  Eigen::Map<const Eigen::VectorXd> p(phi.data(), kd);
  return c.transpose() * p;
}

// S = C C^T / ||C||_F^2; returns false when C vanishes.
bool coefficients_from(const Eigen::VectorXd& coeffs, Eigen::Index kd, Eigen::MatrixXd& s) {
  const double norm2 = coeffs.squaredNorm();
  if (!(norm2 > 0.0)) {
    s = Eigen::MatrixXd::Identity(kd, kd) / static_cast<double>(kd);
    return false;
  }
  Eigen::Map<const RowMajorMatrix> c(coeffs.data(), kd, coeffs.size() / kd);
  s.noalias() = c * c.transpose();
  s /= norm2;
  return true;
}

}  // namespace

Eigen::MatrixXd conditional_coefficients(const OfeDensity& q,
                                         const Eigen::Ref<const Eigen::VectorXd>& prefix) {
  const auto& basis = q.basis();
  if (prefix.size() >= basis.dim()) {
    throw DimensionMismatch("conditioning prefix must be shorter than the dimension");
  }
  Eigen::VectorXd coeffs = q.alpha().values();
  for (Eigen::Index d = 0; d < prefix.size(); ++d) {
    const int kd = basis.order(static_cast<int>(d));
    std::vector<double> phi(static_cast<std::size_t>(kd));
    basis.family(static_cast<int>(d)).tabulate(prefix(d), phi);
    coeffs = contract(coeffs, kd, phi);
  }
  Eigen::MatrixXd s;
  coefficients_from(coeffs, basis.order(static_cast<int>(prefix.size())), s);
  return s;
}

SampleResult sample(const OfeDensity& q, Rng& rng, std::size_t n, const CdfGridOptions& grid) {
  const auto& basis = q.basis();
  const int dim = basis.dim();
  std::vector<std::shared_ptr<const CdfTable>> tables;
  tables.reserve(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) tables.push_back(cdf_table_for(basis.family(d), basis.order(d), grid));

  SampleResult out;
  out.points.resize(dim, static_cast<Eigen::Index>(n));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd s;
  std::vector<double> phi;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd coeffs = q.alpha().values();
    for (int d = 0; d < dim; ++d) {
      const int kd = basis.order(d);
      if (!coefficients_from(coeffs, kd, s)) ++out.degenerate_conditionals;
      const auto& table = *tables[static_cast<std::size_t>(d)];
      const auto inv = table.invert(table.packed_weights(s), uniform(rng));
      if (inv.clipped) ++out.tail_clips;
      out.points(d, static_cast<Eigen::Index>(i)) = inv.xi;
      if (d + 1 < dim) {
        phi.resize(static_cast<std::size_t>(kd));
        basis.family(d).tabulate_unchecked(inv.xi, phi);
        coeffs = contract(coeffs, kd, phi);
      }
    }
  }
  if (q.transform()) out.points = q.transform()->from_standard_batch(out.points);
  return out;
}

}  // namespace eigenvi
