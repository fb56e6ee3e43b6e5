#include <cmath>

#include <gtest/gtest.h>

#include "../oracles/frozen.hpp"
#include "../oracles/oracle_math.hpp"
#include "eigenvi/errors.hpp"
#include "eigenvi/proposals.hpp"

namespace {

using eigenvi::Proposal;

TEST(Proposals, Densities) {
  EXPECT_DOUBLE_EQ(Proposal::uniform_box(2, -9, 9).density(Eigen::Vector2d(0, 0)), 1.0 / 324.0);
  EXPECT_EQ(Proposal::uniform_box(2, -1, 1).density(Eigen::Vector2d(2, 0)), 0.0);
  EXPECT_EQ(Proposal::uniform_box(2, -1, 1).log_density(Eigen::Vector2d(2, 0)), -INFINITY);
  EXPECT_NEAR(Proposal::isotropic_gaussian(1, 9.0).density(Eigen::VectorXd::Zero(1)), frozen::kGaussianVar9At0,
              1e-16);
}

TEST(Proposals, Errors) {
  EXPECT_THROW(Proposal::uniform_box(1, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Proposal::isotropic_gaussian(1, 0.0), std::invalid_argument);
  EXPECT_THROW(Proposal::uniform_box(2, -1, 1).density(Eigen::Vector3d::Zero()), eigenvi::DimensionMismatch);
}

TEST(Proposals, UniformSamplesInsideBox) {
  eigenvi::Rng rng(1);
  const auto p = Proposal::uniform_box(Eigen::Vector3d(-1, 0, 2), Eigen::Vector3d(1, 0.5, 7));
  const auto s = p.sample(rng, 10000);
  for (Eigen::Index c = 0; c < s.cols(); ++c) EXPECT_GT(p.density(s.col(c)), 0.0);
}

TEST(Proposals, GaussianMeanWithinCltBound) {
  eigenvi::Rng rng(2);
  const auto s = Proposal::isotropic_gaussian(3, 4.0).sample(rng, 100000);
  const Eigen::VectorXd m = s.rowwise().mean();
  for (int d = 0; d < 3; ++d) EXPECT_LT(std::abs(m(d)), 4 * 2 / std::sqrt(1e5));
}

TEST(Proposals, SameSeedSameStream) {
  const auto p = Proposal::isotropic_gaussian(2, 9.0);
  eigenvi::Rng a(5), b(5);
  EXPECT_EQ(p.sample(a, 100), p.sample(b, 100));
}

TEST(Proposals, IntegrateToOne) {
  const auto g = Proposal::isotropic_gaussian(Eigen::VectorXd::Constant(1, 0.5), 2.0);
  EXPECT_NEAR(oracle::integrate([&](double z) { return g.density(Eigen::VectorXd::Constant(1, z)); }, -20, 20), 1.0,
              1e-10);
  const auto g2 = Proposal::isotropic_gaussian(2, 1.5);
  EXPECT_NEAR(oracle::integrate_2d([&](double x, double y) { return g2.density(Eigen::Vector2d(x, y)); }, -12, 12,
                                   -12, 12, 6),
              1.0, 1e-8);
  const auto u = Proposal::uniform_box(2, -2, 3);
  EXPECT_NEAR(oracle::integrate_2d([&](double x, double y) { return u.density(Eigen::Vector2d(x, y)); }, -2, 3, -2,
                                   3, 6),
              1.0, 1e-12);
}

/// Largest |count - n p| / se over 50 bins for 1e6 draws.
double histogram_sup(const Proposal& p, double lo, double hi, eigenvi::Rng& rng) {
  constexpr int kBins = 50;
  constexpr double kN = 1e6;
  const auto s = p.sample(rng, static_cast<std::size_t>(kN));
  std::vector<double> count(kBins, 0.0);
  const double w = (hi - lo) / kBins;
  for (Eigen::Index c = 0; c < s.cols(); ++c) {
    const int bin = static_cast<int>(std::floor((s(0, c) - lo) / w));
    if (bin >= 0 && bin < kBins) count[static_cast<std::size_t>(bin)] += 1.0;
  }
  double worst = 0.0;
  for (int b = 0; b < kBins; ++b) {
    const double a = lo + b * w;
    const double prob =
        oracle::integrate([&](double z) { return p.density(Eigen::VectorXd::Constant(1, z)); }, a, a + w);
    const double se = std::sqrt(kN * prob * (1 - prob));
    worst = std::max(worst, std::abs(count[static_cast<std::size_t>(b)] - kN * prob) / se);
  }
  return worst;
}

// Even for a correct sampler one of 50 bins exceeds 3 standard errors with
// probability 1 - 0.9973^50 ~ 0.126. Over 20 independent histograms the
// number of such exceedances is Binomial(20, 0.126), which exceeds 7 with
// probability < 0.5%; a biased sampler pushes it toward 20. No bin may ever
// reach 5 standard errors.
void check_histogram(const Proposal& p, double lo, double hi, std::uint64_t seed) {
  int over = 0;
  for (std::uint64_t r = 0; r < 20; ++r) {
    eigenvi::Rng rng = eigenvi::derive_rng(seed, {r});
    const double worst = histogram_sup(p, lo, hi, rng);
    EXPECT_LT(worst, 5.0);
    over += worst > 3.0;
  }
  EXPECT_LE(over, 7);
}

TEST(Proposals, HistogramMatchesDensity) {
  check_histogram(Proposal::isotropic_gaussian(1, 9.0), -9, 9, 101);
  check_histogram(Proposal::uniform_box(1, -6, 6), -6, 6, 102);
}

}  // namespace
