#include "eigenvi/basis1d.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "eigenvi/errors.hpp"

namespace eigenvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void tabulate_hermite(double z, std::span<double> v, std::span<double> d) {
  const std::size_t n = v.size();
  // (2 pi)^{-1/4} e^{-z^2/4}
  v[0] = std::exp(-0.25 * z * z - 0.25 * std::log(2.0 * std::numbers::pi));
  if (n > 1) v[1] = z * v[0];
  for (std::size_t j = 2; j < n; ++j) {
    const double jd = static_cast<double>(j);
    v[j] = (z * v[j - 1] - std::sqrt(jd - 1.0) * v[j - 2]) / std::sqrt(jd);
  }
  if (d.empty()) return;
  d[0] = -0.5 * z * v[0];
  for (std::size_t j = 1; j < n; ++j) {
    d[j] = -0.5 * z * v[j] + std::sqrt(static_cast<double>(j)) * v[j - 1];
  }
}

void tabulate_legendre(double x, std::span<double> v, std::span<double> d) {
  const std::size_t n = v.size();
  // Raw P_j and P'_j first, then scale by sqrt((2j+1)/2).
  double p_prev = 0.0, p = 1.0;
  double dp_prev = 0.0, dp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double scale = std::sqrt((2.0 * static_cast<double>(j) + 1.0) / 2.0);
    v[j] = scale * p;
    if (!d.empty()) d[j] = scale * dp;
    const double jd = static_cast<double>(j);
    const double p_next = ((2.0 * jd + 1.0) * x * p - jd * p_prev) / (jd + 1.0);
    const double dp_next = dp_prev + (2.0 * jd + 1.0) * p;
    p_prev = p;
    p = p_next;
    dp_prev = dp;
    dp = dp_next;
  }
}

void tabulate_fourier(double theta, std::span<double> v, std::span<double> d) {
  const std::size_t n = v.size();
  const double c0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double c = 1.0 / std::sqrt(std::numbers::pi);
  v[0] = c0;
  if (!d.empty()) d[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double m = static_cast<double>((j + 1) / 2);
    const double cs = std::cos(m * theta);
    const double sn = std::sin(m * theta);
    if (j % 2 == 1) {
      v[j] = c * cs;
      if (!d.empty()) d[j] = -c * m * sn;
    } else {
      v[j] = c * sn;
      if (!d.empty()) d[j] = c * m * cs;
    }
  }
}

void tabulate_laguerre(double z, std::span<double> v, std::span<double> d) {
  const std::size_t n = v.size();
  // psi_j = e^{-z/2} L_j(z) and lam_j = e^{-z/2} L'_j(z) obey the same linear
  // recurrences as L_j and L'_j.
  double psi_prev = 0.0, psi = std::exp(-0.5 * z);
  double lam = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    v[j] = psi;
    if (!d.empty()) d[j] = -0.5 * psi + lam;
    const double jd = static_cast<double>(j);
    const double psi_next = ((2.0 * jd + 1.0 - z) * psi - jd * psi_prev) / (jd + 1.0);
    lam = lam - psi;
    psi_prev = psi;
    psi = psi_next;
  }
}

}  // namespace

bool Support::contains(double z) const {
  if (std::isnan(z)) return false;
  switch (kind) {
    case SupportKind::RealLine:
      return std::isfinite(z);
    case SupportKind::HalfLine:
      return std::isfinite(z) && z >= lo;
    default:
      return z >= lo && z <= hi;
  }
}

bool Support::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

Support natural_support(BasisKind kind) {
  switch (kind) {
    case BasisKind::HermiteWeighted:
      return {SupportKind::RealLine, -kInf, kInf};
    case BasisKind::Legendre:
      return {SupportKind::Interval, -1.0, 1.0};
    case BasisKind::Fourier:
      return {SupportKind::Circle, 0.0, 2.0 * std::numbers::pi};
    case BasisKind::LaguerreWeighted:
      return {SupportKind::HalfLine, 0.0, kInf};
  }
  throw std::invalid_argument("unknown basis kind");
}

BasisFamily::BasisFamily(BasisKind kind, int max_order)
    : kind_(kind), support_(natural_support(kind)), max_order_(max_order) {
  if (max_order < 1) throw std::invalid_argument("max_order must be positive");
}

void BasisFamily::check(int k, double z) const {
  if (k < 1) throw IndexError("basis index must be >= 1, got " + std::to_string(k));
  if (k > max_order_) {
    throw CapacityError("basis index " + std::to_string(k) + " exceeds maximum order " +
                        std::to_string(max_order_));
  }
  if (!support_.contains(z)) {
    throw DomainError("point " + std::to_string(z) + " outside the support of the " +
                      std::string(to_string(kind_)) + " family");
  }
}

double BasisFamily::eval(int k, double z) const {
  check(k, z);
  std::vector<double> values(static_cast<std::size_t>(k));
  tabulate_unchecked(z, values);
  return values.back();
}

double BasisFamily::eval_grad(int k, double z) const {
  check(k, z);
  std::vector<double> values(static_cast<std::size_t>(k)), derivs(values.size());
  tabulate_unchecked(z, values, derivs);
  return derivs.back();
}

void BasisFamily::tabulate(double z, std::span<double> values, std::span<double> derivs) const {
  check(static_cast<int>(values.size()), z);
  tabulate_unchecked(z, values, derivs);
}

void BasisFamily::tabulate_unchecked(double z, std::span<double> values,
                                     std::span<double> derivs) const {
  if (values.empty()) return;
  if (!derivs.empty() && derivs.size() != values.size()) {
    throw std::invalid_argument("derivative buffer length differs from value buffer");
  }
  switch (kind_) {
    case BasisKind::HermiteWeighted:
      tabulate_hermite(z, values, derivs);
      break;
    case BasisKind::Legendre:
      tabulate_legendre(z, values, derivs);
      break;
    case BasisKind::Fourier:
      tabulate_fourier(z, values, derivs);
      break;
    case BasisKind::LaguerreWeighted:
      tabulate_laguerre(z, values, derivs);
      break;
  }
}

double eval_basis(const BasisFamily& family, int k, double z) { return family.eval(k, z); }

double eval_basis_grad(const BasisFamily& family, int k, double z) {
  return family.eval_grad(k, z);
}

ZPhiRecurrence recurrence_z_phi(const BasisFamily& family, int k) {
  if (family.kind() != BasisKind::HermiteWeighted) {
    throw NotImplementedError("z*phi_k recurrence is only provided for the Hermite family");
  }
  if (k < 1) throw IndexError("basis index must be >= 1");
  const double kd = static_cast<double>(k);
  ZPhiRecurrence r{{k + 1, std::sqrt(kd)}, {0, 0.0}};
  if (k > 1) r.down = {k - 1, std::sqrt(kd - 1.0)};
  return r;
}

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::HermiteWeighted:
      return "hermite";
    case BasisKind::Legendre:
      return "legendre";
    case BasisKind::Fourier:
      return "fourier";
    case BasisKind::LaguerreWeighted:
      return "laguerre";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(std::string_view name) {
  if (name == "hermite") return BasisKind::HermiteWeighted;
  if (name == "legendre") return BasisKind::Legendre;
  if (name == "fourier") return BasisKind::Fourier;
  if (name == "laguerre") return BasisKind::LaguerreWeighted;
  throw std::invalid_argument("unknown basis family '" + std::string(name) + "'");
}

}  // namespace eigenvi
