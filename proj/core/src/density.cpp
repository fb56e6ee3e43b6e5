#include "eigenvi/density.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eigenvi/errors.hpp"

namespace eigenvi {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Index product_of(const std::vector<int>& orders, std::size_t from, std::size_t to) {
  Eigen::Index p = 1;
  for (std::size_t d = from; d < to; ++d) p *= orders[d];
  return p;
}

}  // namespace

OfeDensity::OfeDensity(ProductBasis basis, WeightVector alpha,
                       std::optional<StandardizingTransform> transform)
    : basis_(std::move(basis)), alpha_(std::move(alpha)), transform_(std::move(transform)) {
  if (alpha_.size() != basis_.size()) {
    throw DimensionMismatch("weight vector length " + std::to_string(alpha_.size()) +
                            " differs from basis size " + std::to_string(basis_.size()));
  }
  if (transform_ && transform_->dim() != basis_.dim()) {
    throw DimensionMismatch("transform dimension differs from basis dimension");
  }
}

Eigen::VectorXd OfeDensity::to_basis_coordinates(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from density dimension");
  Eigen::VectorXd zt = transform_ ? transform_->to_standard(z) : Eigen::VectorXd(z);
  if (!basis_.contains(zt)) throw DomainError("point outside the support of the density");
  return zt;
}

double OfeDensity::expansion(const Eigen::Ref<const Eigen::VectorXd>& zt) const {
  Eigen::VectorXd phi(basis_.size());
  basis_.eval_all(zt, phi);
  return alpha_.values().dot(phi);
}

double OfeDensity::density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  const double f = expansion(to_basis_coordinates(z));
  const double jac = transform_ ? std::exp(-transform_->log_abs_det()) : 1.0;
  return f * f * jac;
}

double OfeDensity::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  const double f = expansion(to_basis_coordinates(z));
  if (f == 0.0) return -std::numeric_limits<double>::infinity();
  const double log_jac = transform_ ? transform_->log_abs_det() : 0.0;
  return 2.0 * std::log(std::abs(f)) - log_jac;
}

Eigen::VectorXd OfeDensity::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  const Eigen::VectorXd zt = to_basis_coordinates(z);
  Eigen::VectorXd phi(basis_.size());
  Eigen::MatrixXd grads(basis_.size(), basis_.dim());
  basis_.eval_all(zt, phi, grads);
  const double f = alpha_.values().dot(phi);
  if (f == 0.0) throw PoleError("score undefined at a node of the expansion");
  Eigen::VectorXd g = (2.0 / f) * (grads.transpose() * alpha_.values());
  if (transform_) return transform_->pull_gradient(g);
  return g;
}

OfeDensity OfeDensity::with_transform(const StandardizingTransform& t) const {
  if (transform_) throw std::logic_error("density already carries a standardizing transform");
  return OfeDensity(basis_, alpha_, t);
}

double density_eval(const OfeDensity& q, const Eigen::Ref<const Eigen::VectorXd>& z) {
  return q.density(z);
}

double log_density(const OfeDensity& q, const Eigen::Ref<const Eigen::VectorXd>& z) {
  return q.log_density(z);
}

Eigen::VectorXd score(const OfeDensity& q, const Eigen::Ref<const Eigen::VectorXd>& z) {
  return q.score(z);
}

Eigen::MatrixXd marginal_coefficients(const OfeDensity& q, int keep) {
  const int dim = q.dim();
  if (keep < 1 || keep >= dim) {
    throw std::invalid_argument("marginal must keep between 1 and dim-1 leading dimensions");
  }
  const auto& orders = q.basis().orders();
  const Eigen::Index rows = product_of(orders, 0, static_cast<std::size_t>(keep));
  const Eigen::Index tail = product_of(orders, static_cast<std::size_t>(keep), orders.size());
  Eigen::Map<const RowMajorMatrix> beta(q.alpha().values().data(), rows, tail);
  return beta * beta.transpose();
}

MarginalDensity::MarginalDensity(const OfeDensity& q, int keep)
    : basis_(std::vector<BasisFamily>(q.basis().families().begin(),
                                      q.basis().families().begin() + keep),
             std::vector<int>(q.basis().orders().begin(), q.basis().orders().begin() + keep)),
      coefficients_(marginal_coefficients(q, keep)) {
  if (q.transform()) {
    const auto& t = *q.transform();
    transform_.emplace(t.location().head(keep), t.scale().topLeftCorner(keep, keep));
  }
}

double MarginalDensity::density(const Eigen::Ref<const Eigen::VectorXd>& z_prefix) const {
  if (z_prefix.size() != dim()) throw DimensionMismatch("point dimension differs from marginal");
  const Eigen::VectorXd zt = transform_ ? transform_->to_standard(z_prefix) : Eigen::VectorXd(z_prefix);
  if (!basis_.contains(zt)) throw DomainError("point outside the support of the marginal");
  Eigen::VectorXd phi(basis_.size());
  basis_.eval_all(zt, phi);
  const double value = phi.dot(coefficients_ * phi);
  return transform_ ? value * std::exp(-transform_->log_abs_det()) : value;
}

Eigen::MatrixXd dimension_coefficients(const OfeDensity& q, int d) {
  const auto& orders = q.basis().orders();
  if (d < 0 || d >= q.dim()) throw IndexError("dimension index out of range");
  const auto du = static_cast<std::size_t>(d);
  const Eigen::Index pre = product_of(orders, 0, du);
  const Eigen::Index kd = orders[du];
  const Eigen::Index post = product_of(orders, du + 1, orders.size());
  const double* alpha = q.alpha().values().data();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kd, kd);
  for (Eigen::Index p = 0; p < pre; ++p) {
    Eigen::Map<const RowMajorMatrix> x(alpha + p * kd * post, kd, post);
    a.noalias() += x * x.transpose();
  }
  return a;
}

Eigen::MatrixXd pair_coefficients(const OfeDensity& q, int d, int e) {
  const int dim = q.dim();
  if (d < 0 || e < 0 || d >= dim || e >= dim || d == e) {
    throw IndexError("pair coefficients need two distinct valid dimensions");
  }
  const auto& orders = q.basis().orders();
  const auto kd = static_cast<Eigen::Index>(orders[static_cast<std::size_t>(d)]);
  const auto ke = static_cast<Eigen::Index>(orders[static_cast<std::size_t>(e)]);
  const auto k = static_cast<Eigen::Index>(q.basis().size());
  const auto& alpha = q.alpha().values();

  // Group flat indices by their "other" coordinates and accumulate v v^T,
  // where v collects alpha over the (i, k) pair for fixed other coordinates.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(kd * ke, kd * ke);
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(dim));
  Eigen::Index s = 1;
  for (int c = dim; c-- > 0;) {
    stride[static_cast<std::size_t>(c)] = s;
    s *= orders[static_cast<std::size_t>(c)];
  }
  const Eigen::Index sd = stride[static_cast<std::size_t>(d)];
  const Eigen::Index se = stride[static_cast<std::size_t>(e)];
  Eigen::VectorXd v(kd * ke);
  for (Eigen::Index base = 0; base < k; ++base) {
    // base enumerates flat indices whose d and e components are zero.
    const Eigen::Index md = (base / sd) % kd;
    const Eigen::Index me = (base / se) % ke;
    if (md != 0 || me != 0) continue;
    for (Eigen::Index i = 0; i < kd; ++i) {
      for (Eigen::Index l = 0; l < ke; ++l) v(i * ke + l) = alpha(base + i * sd + l * se);
    }
    b.noalias() += v * v.transpose();
  }
  return b;
}

}  // namespace eigenvi
