#include "eigenvi/proposals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "eigenvi/errors.hpp"

namespace eigenvi {

Proposal::Proposal(Kind kind, Eigen::VectorXd a, Eigen::VectorXd b, double variance)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)), variance_(variance) {
  if (a_.size() == 0) throw std::invalid_argument("proposal dimension must be positive");
  if (kind_ == Kind::UniformBox) {
    if (b_.size() != a_.size()) throw DimensionMismatch("box bounds have different lengths");
    double log_volume = 0.0;
    for (Eigen::Index d = 0; d < a_.size(); ++d) {
      if (!(a_(d) < b_(d)) || !std::isfinite(a_(d)) || !std::isfinite(b_(d))) {
        throw std::invalid_argument("uniform box requires finite lo < hi in every dimension");
      }
      log_volume += std::log(b_(d) - a_(d));
    }
    log_norm_ = -log_volume;
  } else {
    if (!(variance_ > 0.0) || !std::isfinite(variance_)) {
      throw std::invalid_argument("Gaussian proposal variance must be positive");
    }
    log_norm_ = -0.5 * static_cast<double>(a_.size()) * std::log(2.0 * std::numbers::pi * variance_);
  }
}

Proposal Proposal::uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  return Proposal(Kind::UniformBox, std::move(lo), std::move(hi), 0.0);
}

Proposal Proposal::uniform_box(int dim, double lo, double hi) {
  return uniform_box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

Proposal Proposal::isotropic_gaussian(Eigen::VectorXd mean, double variance) {
  return Proposal(Kind::IsotropicGaussian, std::move(mean), Eigen::VectorXd(), variance);
}

Proposal Proposal::isotropic_gaussian(int dim, double variance) {
  return isotropic_gaussian(Eigen::VectorXd::Zero(dim), variance);
}

double Proposal::log_density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != a_.size()) throw DimensionMismatch("point dimension differs from proposal dimension");
  if (kind_ == Kind::UniformBox) {
    for (Eigen::Index d = 0; d < z.size(); ++d) {
      if (!(z(d) >= a_(d) && z(d) <= b_(d))) return -std::numeric_limits<double>::infinity();
    }
    return log_norm_;
  }
  return log_norm_ - 0.5 * (z - a_).squaredNorm() / variance_;
}

double Proposal::density(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return std::exp(log_density(z));
}

Eigen::MatrixXd Proposal::sample(Rng& rng, std::size_t n) const {
  const auto dim = a_.size();
  Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(n));
  if (kind_ == Kind::UniformBox) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      for (Eigen::Index d = 0; d < dim; ++d) out(d, j) = a_(d) + (b_(d) - a_(d)) * unif(rng);
    }
  } else {
    std::normal_distribution<double> normal(0.0, std::sqrt(variance_));
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      for (Eigen::Index d = 0; d < dim; ++d) out(d, j) = a_(d) + normal(rng);
    }
  }
  return out;
}

std::string Proposal::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::UniformBox) {
    os << "uniform_box(lo=[" << a_.transpose() << "], hi=[" << b_.transpose() << "])";
  } else {
    os << "isotropic_gaussian(mean=[" << a_.transpose() << "], variance=" << variance_ << ")";
  }
  return os.str();
}

double proposal_density(const Proposal& p, const Eigen::Ref<const Eigen::VectorXd>& z) {
  return p.density(z);
}

Eigen::MatrixXd proposal_sample(const Proposal& p, Rng& rng, std::size_t n) {
  return p.sample(rng, n);
}

}  // namespace eigenvi
