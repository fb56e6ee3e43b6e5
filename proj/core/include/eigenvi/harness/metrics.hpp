#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "eigenvi/density.hpp"
#include "eigenvi/random.hpp"
#include "eigenvi/targets.hpp"

namespace eigenvi::harness {

struct MeanEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t used = 0;
  /// Samples left out: log q = -inf for KL, poles of q for Fisher, and in
  /// both cases points outside the support of q.
  std::size_t excluded = 0;
};

/// KL(p || q) = E_p[log p - log q] from the given exact target samples.
/// Throws std::invalid_argument when no sample is usable.
MeanEstimate forward_kl(const ScoreTarget& p, const OfeDensity& q,
                        const Eigen::Ref<const Eigen::MatrixXd>& samples);

/// Draws n exact samples from p, then as above. n = 0 throws.
MeanEstimate forward_kl(const SyntheticTarget& p, const OfeDensity& q, std::size_t n, Rng& rng);

/// (1/S) sum_s ||grad log p(z_s) - grad log q(z_s)||^2 over reference samples.
/// An empty sample set throws std::invalid_argument.
MeanEstimate fisher_divergence_empirical(const ScoreTarget& p, const OfeDensity& q,
                                         const Eigen::Ref<const Eigen::MatrixXd>& samples);

}  // namespace eigenvi::harness
