#include "eigenvi/harness/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eigenvi/errors.hpp"

namespace eigenvi::harness {

namespace {

MeanEstimate summarize(const std::vector<double>& values, std::size_t excluded) {
  if (values.empty()) throw std::invalid_argument("no usable samples for the estimate");
  MeanEstimate out;
  out.used = values.size();
  out.excluded = excluded;
  // Welford keeps the variance accurate when the mean dominates.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  out.estimate = mean;
  out.standard_error = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return out;
}

}  // namespace

MeanEstimate forward_kl(const ScoreTarget& p, const OfeDensity& q,
                        const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  if (samples.cols() == 0) throw std::invalid_argument("forward KL needs at least one sample");
  if (samples.rows() != p.dim() || p.dim() != q.dim()) throw DimensionMismatch("KL dimensions differ");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(samples.cols()));
  std::size_t excluded = 0;
  for (Eigen::Index s = 0; s < samples.cols(); ++s) {
    double lq;
    try {
      lq = q.log_density(samples.col(s));
    } catch (const DomainError&) {
      ++excluded;
      continue;
    }
    if (!std::isfinite(lq)) {
      ++excluded;
      continue;
    }
    terms.push_back(p.log_density(samples.col(s)) - lq);
  }
  return summarize(terms, excluded);
}

MeanEstimate forward_kl(const SyntheticTarget& p, const OfeDensity& q, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("forward KL needs at least one sample");
  return forward_kl(p, q, p.sample(rng, n));
}

MeanEstimate fisher_divergence_empirical(const ScoreTarget& p, const OfeDensity& q,
                                         const Eigen::Ref<const Eigen::MatrixXd>& samples) {
  if (samples.cols() == 0) throw std::invalid_argument("Fisher divergence needs at least one sample");
  if (samples.rows() != p.dim() || p.dim() != q.dim()) throw DimensionMismatch("dimensions differ");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(samples.cols()));
  std::size_t excluded = 0;
  for (Eigen::Index s = 0; s < samples.cols(); ++s) {
    Eigen::VectorXd sq;
    try {
      sq = q.score(samples.col(s));
    } catch (const PoleError&) {
      ++excluded;
      continue;
    } catch (const DomainError&) {
      ++excluded;
      continue;
    }
    terms.push_back((p.score(samples.col(s)) - sq).squaredNorm());
  }
  return summarize(terms, excluded);
}

}  // namespace eigenvi::harness
