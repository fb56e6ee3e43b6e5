#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "eigenvi/cdf_table.hpp"
#include "eigenvi/density.hpp"
#include "eigenvi/random.hpp"

namespace eigenvi {

struct SampleResult {
  Eigen::MatrixXd points;  // D x n, original coordinates
  /// Uniform draws that fell outside the tabulated CDF range and were clamped
  /// to a grid endpoint.
  std::size_t tail_clips = 0;
  /// Conditionals whose contracted coefficients vanished; those steps fall
  /// back to the uniform mixture S = I / K_d.
  std::size_t degenerate_conditionals = 0;
};

/// Exact sequential inverse-transform sampling: z_1 ~ q(z_1), then
/// z_d ~ q(z_d | z_<d) for d = 2..D, each by inverting C(xi) = trace(S Phi(xi))
/// on a tabulated grid. Costs O(K K_1) per draw plus O(log G) table lookups.
SampleResult sample(const OfeDensity& q, Rng& rng, std::size_t n,
                    const CdfGridOptions& grid = {});

/// Conditional coefficient matrix S for dimension d = prefix.size() given the
/// first d coordinates in basis coordinates. S is K_d x K_d, symmetric PSD,
/// with unit trace; an empty prefix gives the first marginal.
Eigen::MatrixXd conditional_coefficients(const OfeDensity& q,
                                         const Eigen::Ref<const Eigen::VectorXd>& prefix);

}  // namespace eigenvi
