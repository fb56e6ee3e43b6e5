#include "eigenvi/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "eigenvi/errors.hpp"
#include "eigenvi/sampling.hpp"

namespace eigenvi {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

Eigen::MatrixXd standard_normals(Rng& rng, int dim, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd eps(dim, static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < eps.cols(); ++j) {
    for (Eigen::Index i = 0; i < eps.rows(); ++i) eps(i, j) = normal(rng);
  }
  return eps;
}

Eigen::MatrixXd lower_cholesky(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw std::invalid_argument("covariance must be a nonempty square matrix");
  }
  if (!cov.allFinite() || !cov.isApprox(cov.transpose(), 1e-12)) {
    throw std::invalid_argument("covariance must be finite and symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("covariance is not positive definite");
  return llt.matrixL();
}

}  // namespace

GaussianTarget::GaussianTarget(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (covariance_.rows() != mean_.size()) throw DimensionMismatch("mean and covariance sizes differ");
  chol_ = lower_cholesky(covariance_);
  log_norm_ = -0.5 * static_cast<double>(mean_.size()) * kLog2Pi -
              chol_.diagonal().array().log().sum();
}

GaussianTarget GaussianTarget::standard(int dim) {
  return GaussianTarget(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim));
}

double GaussianTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from target");
  const Eigen::VectorXd r = chol_.triangularView<Eigen::Lower>().solve(z - mean_);
  return log_norm_ - 0.5 * r.squaredNorm();
}

Eigen::VectorXd GaussianTarget::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from target");
  Eigen::VectorXd r = chol_.triangularView<Eigen::Lower>().solve(mean_ - z);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(r);
}

Eigen::MatrixXd GaussianTarget::sample(Rng& rng, std::size_t n) const {
  return (chol_ * standard_normals(rng, dim(), n)).colwise() + mean_;
}

GaussianMixtureTarget::GaussianMixtureTarget(std::vector<double> weights,
                                             std::vector<GaussianTarget> components,
                                             std::string name)
    : weights_(std::move(weights)), components_(std::move(components)), name_(std::move(name)) {
  if (components_.empty() || weights_.size() != components_.size()) {
    throw std::invalid_argument("mixture needs one weight per component and at least one component");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
  for (const auto& c : components_) {
    if (c.dim() != components_.front().dim()) throw DimensionMismatch("mixture components differ in dimension");
  }
}

double GaussianMixtureTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  std::vector<double> terms(components_.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    terms[i] = std::log(weights_[i]) + components_[i].log_density(z);
    top = std::max(top, terms[i]);
  }
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return top + std::log(s);
}

Eigen::VectorXd GaussianMixtureTarget::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  std::vector<double> terms(components_.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    terms[i] = std::log(weights_[i]) + components_[i].log_density(z);
    top = std::max(top, terms[i]);
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
  double s = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const double r = std::exp(terms[i] - top);
    if (r == 0.0) continue;
    s += r;
    g += r * components_[i].score(z);
  }
  return g / s;
}

Eigen::MatrixXd GaussianMixtureTarget::sample(Rng& rng, std::size_t n) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(dim(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd eps(dim());
  for (std::size_t j = 0; j < n; ++j) {
    const double u = uniform(rng);
    std::size_t c = 0;
    double cum = weights_[0];
    while (u >= cum && c + 1 < weights_.size()) cum += weights_[++c];
    for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = normal(rng);
    out.col(static_cast<Eigen::Index>(j)) = components_[c].transform_standard(eps);
  }
  return out;
}

FunnelTarget::FunnelTarget(double sigma2) : sigma2_(sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("funnel sigma2 must be positive");
}

double FunnelTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != 2) throw DimensionMismatch("funnel target is two-dimensional");
  const double z1 = z(0);
  const double z2 = z(1);
  return -0.5 * (kLog2Pi + std::log(sigma2_)) - 0.5 * z1 * z1 / sigma2_ - 0.5 * kLog2Pi -
         0.25 * z1 - 0.5 * z2 * z2 * std::exp(-0.5 * z1);
}

Eigen::VectorXd FunnelTarget::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != 2) throw DimensionMismatch("funnel target is two-dimensional");
  const double e = std::exp(-0.5 * z(0));
  Eigen::VectorXd g(2);
  g(0) = -z(0) / sigma2_ - 0.25 + 0.25 * z(1) * z(1) * e;
  g(1) = -z(1) * e;
  return g;
}

Eigen::MatrixXd FunnelTarget::sample(Rng& rng, std::size_t n) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(2, static_cast<Eigen::Index>(n));
  const double sd1 = std::sqrt(sigma2_);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double z1 = sd1 * normal(rng);
    out(0, j) = z1;
    out(1, j) = std::exp(0.25 * z1) * normal(rng);
  }
  return out;
}

SinhArcsinhTarget::SinhArcsinhTarget(Eigen::VectorXd skew, Eigen::VectorXd tail,
                                     Eigen::MatrixXd covariance, std::string name)
    : skew_(std::move(skew)),
      tail_(std::move(tail)),
      base_(Eigen::VectorXd::Zero(covariance.rows()), covariance),
      name_(std::move(name)) {
  if (skew_.size() != tail_.size() || skew_.size() != base_.dim()) {
    throw DimensionMismatch("skew, tail and covariance sizes differ");
  }
  if (!(tail_.array() > 0.0).all() || !skew_.allFinite() || !tail_.allFinite()) {
    throw std::invalid_argument("tail weights must be positive and all parameters finite");
  }
  precision_ = covariance.inverse();
  precision_ = 0.5 * (precision_ + precision_.transpose());
}

double SinhArcsinhTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from target");
  Eigen::VectorXd s(dim());
  double jac = 0.0;
  for (Eigen::Index d = 0; d < z.size(); ++d) {
    const double u = tail_(d) * std::asinh(z(d)) - skew_(d);
    s(d) = std::sinh(u);
    // log of tau C / sqrt(1 + z^2), with C = cosh(u).
    jac += std::log(tail_(d)) + std::log(std::cosh(u)) - 0.5 * std::log1p(z(d) * z(d));
  }
  return base_.log_density(s) + jac;
}

Eigen::VectorXd SinhArcsinhTarget::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dim()) throw DimensionMismatch("point dimension differs from target");
  Eigen::VectorXd s(dim()), c(dim()), du(dim());
  for (Eigen::Index d = 0; d < z.size(); ++d) {
    const double u = tail_(d) * std::asinh(z(d)) - skew_(d);
    s(d) = std::sinh(u);
    c(d) = std::cosh(u);
    du(d) = tail_(d) / std::sqrt(1.0 + z(d) * z(d));
  }
  const Eigen::VectorXd ps = precision_ * s;
  Eigen::VectorXd g(dim());
  for (Eigen::Index d = 0; d < z.size(); ++d) {
    g(d) = -z(d) / (1.0 + z(d) * z(d)) + s(d) / c(d) * du(d) - ps(d) * c(d) * du(d);
  }
  return g;
}

Eigen::MatrixXd SinhArcsinhTarget::sample(Rng& rng, std::size_t n) const {
  Eigen::MatrixXd z = base_.sample(rng, n);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index d = 0; d < z.rows(); ++d) {
      z(d, j) = std::sinh((std::asinh(z(d, j)) + skew_(d)) / tail_(d));
    }
  }
  return z;
}

double ExpansionTarget::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return q_.log_density(z);
}

Eigen::VectorXd ExpansionTarget::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return q_.score(z);
}

Eigen::MatrixXd ExpansionTarget::sample(Rng& rng, std::size_t n) const {
  return eigenvi::sample(q_, rng, n).points;
}

std::shared_ptr<SyntheticTarget> standard_gaussian_target(int dim) {
  return std::make_shared<GaussianTarget>(GaussianTarget::standard(dim));
}

std::shared_ptr<SyntheticTarget> mixture_2d() {
  Eigen::Matrix2d sigma;
  sigma << 2.0, 0.1, 0.1, 2.0;
  const Eigen::Matrix2d half = 0.5 * Eigen::Matrix2d::Identity();
  std::vector<GaussianTarget> comps{GaussianTarget(Eigen::Vector2d(-1.0, 1.0), sigma),
                                    GaussianTarget(Eigen::Vector2d(1.1, 1.1), half),
                                    GaussianTarget(Eigen::Vector2d(-1.0, -1.0), half)};
  return std::make_shared<GaussianMixtureTarget>(std::vector<double>{0.4, 0.3, 0.3}, std::move(comps),
                                                 "mixture_2d");
}

std::shared_ptr<SyntheticTarget> funnel_2d(double sigma2) {
  return std::make_shared<FunnelTarget>(sigma2);
}

std::shared_ptr<SyntheticTarget> cross_2d() {
  const double narrow = std::pow(0.15, 0.9);
  const Eigen::Matrix2d s1 = Eigen::Vector2d(narrow, 1.0).asDiagonal();
  const Eigen::Matrix2d s2 = Eigen::Vector2d(1.0, narrow).asDiagonal();
  std::vector<GaussianTarget> comps{GaussianTarget(Eigen::Vector2d(0.0, 2.0), s1),
                                    GaussianTarget(Eigen::Vector2d(-2.0, 0.0), s2),
                                    GaussianTarget(Eigen::Vector2d(2.0, 0.0), s2),
                                    GaussianTarget(Eigen::Vector2d(0.0, -2.0), s1)};
  return std::make_shared<GaussianMixtureTarget>(std::vector<double>(4, 0.25), std::move(comps),
                                                 "cross_2d");
}

std::shared_ptr<SyntheticTarget> bimodal_1d() {
  std::vector<GaussianTarget> comps{
      GaussianTarget(Eigen::VectorXd::Constant(1, -1.5), Eigen::MatrixXd::Constant(1, 1, 0.5)),
      GaussianTarget(Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Constant(1, 1, 0.6))};
  return std::make_shared<GaussianMixtureTarget>(std::vector<double>{0.4, 0.6}, std::move(comps),
                                                 "bimodal_1d");
}

std::shared_ptr<SyntheticTarget> sinh_arcsinh_2d(int variant) {
  Eigen::Vector2d s, tau;
  switch (variant) {
    case 1: s << 0.2, 0.2; tau << 1.1, 1.1; break;
    case 2: s << 0.2, 0.5; tau << 1.1, 1.1; break;
    case 3: s << 0.2, 0.2; tau << 1.4, 1.1; break;
    default: throw std::invalid_argument("2-D sinh-arcsinh variants are 1, 2 and 3");
  }
  return std::make_shared<SinhArcsinhTarget>(s, tau, Eigen::Matrix2d::Identity(),
                                             "sinh_arcsinh_2d_" + std::to_string(variant));
}

std::shared_ptr<SyntheticTarget> sinh_arcsinh_5d(int variant) {
  Eigen::MatrixXd sigma = 2.2 * Eigen::MatrixXd::Identity(5, 5);
  sigma(0, 1) = sigma(1, 0) = 0.3;
  sigma(0, 4) = sigma(4, 0) = 0.3;
  sigma(2, 3) = sigma(3, 2) = 0.3;
  Eigen::VectorXd s(5), tau(5);
  switch (variant) {
    case 1: s << 0.0, 0.0, 0.2, 0.2, 0.2; tau << 1.0, 1.0, 1.0, 1.0, 1.1; break;
    case 2: s << 0.0, 0.0, 0.6, 0.4, -0.5; tau << 1.0, 1.0, 1.0, 1.0, 1.1; break;
    case 3: s << 0.2, 0.2, 0.2, 0.2, 0.2; tau << 1.1, 1.1, 1.0, 1.4, 1.6; break;
    default: throw std::invalid_argument("5-D sinh-arcsinh variants are 1, 2 and 3");
  }
  return std::make_shared<SinhArcsinhTarget>(s, tau, sigma,
                                             "sinh_arcsinh_5d_" + std::to_string(variant));
}

std::vector<std::string> fixture_names() {
  return {"mixture_2d",        "funnel_2d",         "cross_2d",          "bimodal_1d",
          "sinh_arcsinh_2d_1", "sinh_arcsinh_2d_2", "sinh_arcsinh_2d_3", "sinh_arcsinh_5d_1",
          "sinh_arcsinh_5d_2", "sinh_arcsinh_5d_3"};
}

std::shared_ptr<SyntheticTarget> target_by_name(const std::string& name) {
  if (name == "mixture_2d") return mixture_2d();
  if (name == "funnel_2d") return funnel_2d();
  if (name == "cross_2d") return cross_2d();
  if (name == "bimodal_1d") return bimodal_1d();
  const auto variant_of = [&](std::string_view prefix) -> int {
    if (name.size() != prefix.size() + 1 || name.compare(0, prefix.size(), prefix) != 0) return 0;
    const char c = name.back();
    return c >= '1' && c <= '3' ? c - '0' : 0;
  };
  if (const int v = variant_of("sinh_arcsinh_2d_")) return sinh_arcsinh_2d(v);
  if (const int v = variant_of("sinh_arcsinh_5d_")) return sinh_arcsinh_5d(v);
  if (name.rfind("gaussian_", 0) == 0 && name.size() > 10 && name.back() == 'd') {
    const std::string digits = name.substr(9, name.size() - 10);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      const int dim = std::stoi(digits);
      if (dim >= 1) return standard_gaussian_target(dim);
    }
  }
  throw std::invalid_argument("unknown target '" + name + "'");
}

}  // namespace eigenvi
