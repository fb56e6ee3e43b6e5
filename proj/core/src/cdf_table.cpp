#include "eigenvi/cdf_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "eigenvi/errors.hpp"

namespace eigenvi {

namespace {

Eigen::Index packed_size(int k) { return static_cast<Eigen::Index>(k) * (k + 1) / 2; }

Eigen::Index packed_index(int k, int l, int order) {
  if (k > l) std::swap(k, l);
  return static_cast<Eigen::Index>(k) * order - static_cast<Eigen::Index>(k) * (k - 1) / 2 + (l - k);
}

void add_products(const std::vector<double>& v, double w, Eigen::Ref<Eigen::VectorXd> acc) {
  const int k = static_cast<int>(v.size());
  Eigen::Index p = 0;
  for (int i = 0; i < k; ++i) {
    const double wi = w * v[static_cast<std::size_t>(i)];
    for (int j = i; j < k; ++j) acc(p++) += wi * v[static_cast<std::size_t>(j)];
  }
}

Eigen::VectorXd make_grid(const BasisFamily& family, int order, const CdfGridOptions& options) {
  if (options.points < 3) throw std::invalid_argument("CDF grid needs at least 3 points");
  switch (family.kind()) {
    case BasisKind::HermiteWeighted: {
      const double spacing = 2.0 * options.hermite_half_width / (options.points - 1);
      const double half =
          std::max(options.hermite_half_width, std::sqrt(4.0 * order + 2.0) + 6.0);
      const auto n = static_cast<Eigen::Index>(std::ceil(2.0 * half / spacing)) + 1;
      return Eigen::VectorXd::LinSpaced(n, -half, half);
    }
    case BasisKind::LaguerreWeighted:
      return Eigen::VectorXd::LinSpaced(options.points, 0.0, 4.0 * order + 60.0);
    default:
      return Eigen::VectorXd::LinSpaced(options.points, family.support().lo, family.support().hi);
  }
}

}  // namespace

CdfTable::CdfTable(BasisFamily family, int order, Eigen::VectorXd grid, Eigen::MatrixXd table)
    : family_(std::move(family)), order_(order), grid_(std::move(grid)), table_(std::move(table)) {}

CdfTable CdfTable::build(const BasisFamily& family, int order, const CdfGridOptions& options) {
  if (order < 1) throw IndexError("CDF table order must be >= 1");
  if (order > family.max_order()) throw CapacityError("CDF table order exceeds the family maximum");
  Eigen::VectorXd grid = make_grid(family, order, options);
  const Eigen::Index g_count = grid.size();
  const Eigen::Index pairs = packed_size(order);
  Eigen::MatrixXd table(pairs, g_count);

  // Composite Simpson per cell: (h/6) (f(a) + 4 f(m) + f(b)).
  std::vector<double> left(static_cast<std::size_t>(order)), mid(left.size()), right(left.size());
  family.tabulate_unchecked(grid(0), left);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(pairs);
  table.col(0) = acc;
  for (Eigen::Index g = 1; g < g_count; ++g) {
    const double a = grid(g - 1);
    const double b = grid(g);
    const double h = b - a;
    family.tabulate_unchecked(0.5 * (a + b), mid);
    family.tabulate_unchecked(b, right);
    add_products(left, h / 6.0, acc);
    add_products(mid, 4.0 * h / 6.0, acc);
    add_products(right, h / 6.0, acc);
    table.col(g) = acc;
    std::swap(left, right);
  }

  double worst = 0.0;
  for (int k = 0; k < order; ++k) {
    for (int l = k; l < order; ++l) {
      const double target = k == l ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(table(packed_index(k, l, order), g_count - 1) - target));
    }
  }
  if (!(worst <= options.end_tolerance)) {
    std::ostringstream msg;
    msg << "CDF table for " << to_string(family.kind()) << " order " << order
        << " misses the orthonormality check by " << worst
        << "; increase the grid points or the grid width";
    throw CdfBuildError(msg.str());
  }
  return CdfTable(family, order, std::move(grid), std::move(table));
}

double CdfTable::phi(Eigen::Index g, int k, int l) const {
  if (k < 0 || l < 0 || k >= order_ || l >= order_) throw IndexError("CDF table index out of range");
  return table_(packed_index(k, l, order_), g);
}

Eigen::MatrixXd CdfTable::phi_matrix(Eigen::Index g) const {
  Eigen::MatrixXd m(order_, order_);
  for (int k = 0; k < order_; ++k) {
    for (int l = k; l < order_; ++l) m(k, l) = m(l, k) = table_(packed_index(k, l, order_), g);
  }
  return m;
}

Eigen::VectorXd CdfTable::packed_weights(const Eigen::Ref<const Eigen::MatrixXd>& s) const {
  if (s.rows() != order_ || s.cols() != order_) {
    throw DimensionMismatch("coefficient matrix size differs from the table order");
  }
  Eigen::VectorXd w(packed_size(order_));
  Eigen::Index p = 0;
  for (int k = 0; k < order_; ++k) {
    w(p++) = s(k, k);
    for (int l = k + 1; l < order_; ++l) w(p++) = s(k, l) + s(l, k);
  }
  return w;
}

Eigen::VectorXd CdfTable::cdf_values(const Eigen::Ref<const Eigen::VectorXd>& packed) const {
  return table_.transpose() * packed;
}

double CdfTable::cdf(const Eigen::Ref<const Eigen::MatrixXd>& s, double xi) const {
  const Eigen::VectorXd w = packed_weights(s);
  const Eigen::Index last = grid_.size() - 1;
  if (xi <= grid_(0)) return c_at(w, 0);
  if (xi >= grid_(last)) return c_at(w, last);
  const auto it = std::upper_bound(grid_.data(), grid_.data() + grid_.size(), xi);
  const Eigen::Index g = (it - grid_.data()) - 1;
  const double t = (xi - grid_(g)) / (grid_(g + 1) - grid_(g));
  return (1.0 - t) * c_at(w, g) + t * c_at(w, g + 1);
}

CdfTable::Inversion CdfTable::invert(const Eigen::Ref<const Eigen::VectorXd>& packed, double u) const {
  Eigen::Index lo = 0;
  Eigen::Index hi = grid_.size() - 1;
  const double c_lo = c_at(packed, lo);
  const double c_hi = c_at(packed, hi);
  if (u <= c_lo) return {grid_(lo), u < c_lo};
  if (u >= c_hi) return {grid_(hi), true};
  // Invariant: C(lo) < u < C(hi).
  double cl = c_lo;
  double ch = c_hi;
  while (hi - lo > 1) {
    const Eigen::Index m = lo + (hi - lo) / 2;
    const double cm = c_at(packed, m);
    if (cm <= u) {
      lo = m;
      cl = cm;
    } else {
      hi = m;
      ch = cm;
    }
  }
  const double t = ch > cl ? (u - cl) / (ch - cl) : 0.5;
  return {grid_(lo) + t * (grid_(hi) - grid_(lo)), false};
}

std::shared_ptr<const CdfTable> cdf_table_for(const BasisFamily& family, int order,
                                              const CdfGridOptions& options) {
  using Key = std::tuple<BasisKind, int, double, int, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const CdfTable>> cache;
  const Key key{family.kind(), order, options.hermite_half_width, options.points,
                options.end_tolerance};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const CdfTable>(CdfTable::build(family, order, options));
  cache.emplace(key, table);
  return table;
}

}  // namespace eigenvi
