#include "eigenvi/product_basis.hpp"

#include <string>

#include "eigenvi/errors.hpp"

namespace eigenvi {

void kron_into(std::span<const std::span<const double>> factors, std::span<double> out) {
  std::size_t len = 1;
  out[0] = 1.0;
  for (const auto& f : factors) {
    const std::size_t n = f.size();
    // Walk backwards so every out[i] is read before its slot is overwritten.
    for (std::size_t i = len; i-- > 0;) {
      const double base = out[i];
      for (std::size_t m = n; m-- > 0;) out[i * n + m] = base * f[m];
    }
    len *= n;
  }
}

ProductBasis::ProductBasis(std::vector<BasisFamily> families, std::vector<int> orders)
    : families_(std::move(families)), orders_(std::move(orders)) {
  if (families_.empty()) throw std::invalid_argument("product basis needs at least one dimension");
  if (families_.size() != orders_.size()) {
    throw DimensionMismatch("number of families and orders differ");
  }
  for (std::size_t d = 0; d < orders_.size(); ++d) {
    if (orders_[d] < 1) throw std::invalid_argument("basis orders must be positive");
    if (orders_[d] > families_[d].max_order()) {
      throw CapacityError("order " + std::to_string(orders_[d]) + " in dimension " +
                          std::to_string(d) + " exceeds the family maximum " +
                          std::to_string(families_[d].max_order()));
    }
    size_ *= orders_[d];
  }
}

ProductBasis ProductBasis::uniform(const BasisFamily& family, int dim, int order) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  return ProductBasis(std::vector<BasisFamily>(static_cast<std::size_t>(dim), family),
                      std::vector<int>(static_cast<std::size_t>(dim), order));
}

int ProductBasis::flatten(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != dim()) {
    throw DimensionMismatch("multi-index has " + std::to_string(multi.size()) +
                            " components, basis has " + std::to_string(dim()));
  }
  int flat = 0;
  for (std::size_t d = 0; d < multi.size(); ++d) {
    if (multi[d] < 1 || multi[d] > orders_[d]) {
      throw IndexError("multi-index component " + std::to_string(multi[d]) + " out of range [1, " +
                       std::to_string(orders_[d]) + "] in dimension " + std::to_string(d));
    }
    flat = flat * orders_[d] + (multi[d] - 1);
  }
  return flat + 1;
}

std::vector<int> ProductBasis::unflatten(int flat) const {
  if (flat < 1 || flat > size_) {
    throw IndexError("flat index " + std::to_string(flat) + " out of range [1, " +
                     std::to_string(size_) + "]");
  }
  std::vector<int> multi(orders_.size());
  int rest = flat - 1;
  for (std::size_t d = orders_.size(); d-- > 0;) {
    multi[d] = rest % orders_[d] + 1;
    rest /= orders_[d];
  }
  return multi;
}

bool ProductBasis::contains(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) return false;
  for (int d = 0; d < dim(); ++d) {
    if (!family(d).support().contains(z(d))) return false;
  }
  return true;
}

double ProductBasis::eval(int flat, const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from basis dimension");
  const auto multi = unflatten(flat);
  double value = 1.0;
  for (int d = 0; d < dim(); ++d) value *= family(d).eval(multi[static_cast<std::size_t>(d)], z(d));
  return value;
}

Eigen::VectorXd ProductBasis::grad(int flat, const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from basis dimension");
  const auto multi = unflatten(flat);
  Eigen::VectorXd vals(dim()), ders(dim());
  for (int d = 0; d < dim(); ++d) {
    const int k = multi[static_cast<std::size_t>(d)];
    vals(d) = family(d).eval(k, z(d));
    ders(d) = family(d).eval_grad(k, z(d));
  }
  Eigen::VectorXd g(dim());
  for (int d = 0; d < dim(); ++d) {
    double prod = ders(d);
    for (int e = 0; e < dim(); ++e) {
      if (e != d) prod *= vals(e);
    }
    g(d) = prod;
  }
  return g;
}

void ProductBasis::eval_all(const Eigen::Ref<const Eigen::VectorXd>& z,
                            Eigen::Ref<Eigen::VectorXd> values) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from basis dimension");
  if (values.size() != size_) throw DimensionMismatch("value buffer has wrong length");
  std::vector<std::vector<double>> tabs(families_.size());
  std::vector<std::span<const double>> factors;
  for (int d = 0; d < dim(); ++d) {
    auto& t = tabs[static_cast<std::size_t>(d)];
    t.resize(static_cast<std::size_t>(order(d)));
    family(d).tabulate(z(d), t);
    factors.emplace_back(t);
  }
  kron_into(factors, std::span<double>(values.data(), static_cast<std::size_t>(size_)));
}

void ProductBasis::eval_all(const Eigen::Ref<const Eigen::VectorXd>& z,
                            Eigen::Ref<Eigen::VectorXd> values,
                            Eigen::Ref<Eigen::MatrixXd> grads) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from basis dimension");
  Tables tables;
  for (int d = 0; d < dim(); ++d) {
    Eigen::MatrixXd v(order(d), 1), g(order(d), 1);
    family(d).tabulate(z(d), std::span<double>(v.data(), static_cast<std::size_t>(order(d))),
                       std::span<double>(g.data(), static_cast<std::size_t>(order(d))));
    tables.values.push_back(std::move(v));
    tables.derivs.push_back(std::move(g));
  }
  combine(tables, 0, values, grads);
}

ProductBasis::Tables ProductBasis::tabulate(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
  if (points.rows() != dim()) throw DimensionMismatch("point dimension differs from basis dimension");
  Tables tables;
  tables.values.reserve(families_.size());
  tables.derivs.reserve(families_.size());
  const auto n = static_cast<std::size_t>(points.cols());
  for (int d = 0; d < dim(); ++d) {
    const auto kd = static_cast<std::size_t>(order(d));
    Eigen::MatrixXd v(order(d), points.cols()), g(order(d), points.cols());
    for (std::size_t b = 0; b < n; ++b) {
      const auto col = static_cast<Eigen::Index>(b);
      family(d).tabulate(points(d, col), std::span<double>(v.col(col).data(), kd),
                         std::span<double>(g.col(col).data(), kd));
    }
    tables.values.push_back(std::move(v));
    tables.derivs.push_back(std::move(g));
  }
  return tables;
}

void ProductBasis::combine(const Tables& tables, Eigen::Index b, Eigen::Ref<Eigen::VectorXd> values,
                           Eigen::Ref<Eigen::MatrixXd> grads) const {
  if (values.size() != size_ || grads.rows() != size_ || grads.cols() != dim()) {
    throw DimensionMismatch("output buffers do not match the basis size");
  }
  const auto nd = families_.size();
  std::vector<std::span<const double>> vals(nd), factors(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    vals[d] = std::span<const double>(tables.values[d].col(b).data(),
                                      static_cast<std::size_t>(orders_[d]));
  }
  const auto k = static_cast<std::size_t>(size_);
  kron_into(vals, std::span<double>(values.data(), k));
  for (std::size_t d = 0; d < nd; ++d) {
    factors = vals;
    factors[d] = std::span<const double>(tables.derivs[d].col(b).data(),
                                         static_cast<std::size_t>(orders_[d]));
    kron_into(factors, std::span<double>(grads.col(static_cast<Eigen::Index>(d)).data(), k));
  }
}

}  // namespace eigenvi
