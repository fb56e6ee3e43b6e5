#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "../oracles/frozen.hpp"
#include "../oracles/oracle_math.hpp"
#include "eigenvi/density.hpp"
#include "eigenvi/errors.hpp"
#include "eigenvi/moments.hpp"
#include "eigenvi/sampling.hpp"
#include "eigenvi/serialization.hpp"
#include "test_util.hpp"

namespace {

using namespace eigenvi;

ProductBasis hermite(int dim, int order) { return ProductBasis::uniform(BasisFamily::hermite(), dim, order); }

OfeDensity random_density(const ProductBasis& b, Rng& rng) {
  return OfeDensity(b, WeightVector(testutil::random_unit(rng, b.size())));
}

Eigen::VectorXd v1(double z) { return Eigen::VectorXd::Constant(1, z); }

TEST(Density, GaussianBase) {
  const OfeDensity q(hermite(1, 1), WeightVector(Eigen::VectorXd::Ones(1)));
  EXPECT_NEAR(q.density(v1(0.0)), frozen::kPhi1At0Squared, 1e-16);
  for (double z : {-2.0, 0.3, 4.0}) EXPECT_NEAR(q.score(v1(z))(0), -z, 1e-14);
}

TEST(Density, TransformedGaussian) {
  const OfeDensity q(hermite(1, 1), WeightVector(Eigen::VectorXd::Ones(1)),
                     StandardizingTransform(v1(3.0), Eigen::MatrixXd::Constant(1, 1, std::sqrt(0.125))));
  EXPECT_NEAR(q.density(v1(3.0)), frozen::kN3EighthAt3, 1e-14);
  EXPECT_NEAR(q.score(v1(3.5))(0), -0.5 / 0.125, 1e-12);
}

TEST(Density, NormalizationOneD) {
  Rng rng(1);
  for (int order : {2, 6, 8}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto q = random_density(hermite(1, order), rng);
      const double mass = oracle::integrate([&](double z) { return q.density(v1(z)); }, -10, 10);
      EXPECT_NEAR(mass, 1.0, 1e-8);
    }
  }
}

TEST(Density, NormalizationTwoD) {
  Rng rng(2);
  for (int order : {3, 5}) {
    const auto q = random_density(hermite(2, order), rng);
    const double mass =
        oracle::integrate_2d([&](double x, double y) { return q.density(Eigen::Vector2d(x, y)); }, -12, 12, -12, 12, 6);
    EXPECT_NEAR(mass, 1.0, 1e-8);
  }
  const ProductBasis lb({BasisFamily::legendre(), BasisFamily::fourier()}, {4, 5});
  const auto q = random_density(lb, rng);
  EXPECT_NEAR(oracle::integrate_2d([&](double x, double y) { return q.density(Eigen::Vector2d(x, y)); }, -1, 1, 0,
                                   2 * std::numbers::pi, 6),
              1.0, 1e-8);
}

TEST(Density, ScoreMatchesFiniteDifferences) {
  Rng rng(3);
  const auto q = random_density(hermite(2, 4), rng);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int n = 0; n < 100; ++n) {
    const Eigen::Vector2d z(u(rng), u(rng));
    if (std::abs(q.expansion(z)) < 1e-3) continue;  // steep near nodes
    const auto fd = testutil::fd_gradient([&](const Eigen::VectorXd& x) { return q.log_density(x); }, z, 1e-6);
    EXPECT_LT(testutil::rel_err(q.score(z), fd), 1e-6);
  }
}

TEST(Density, PolesAndZeros) {
  Eigen::VectorXd e2 = Eigen::VectorXd::Zero(2);
  e2(1) = 1.0;
  const OfeDensity q(hermite(1, 2), WeightVector(e2));
  EXPECT_THROW(q.score(v1(0.0)), PoleError);
  EXPECT_EQ(q.log_density(v1(0.0)), -INFINITY);
  EXPECT_EQ(q.density(v1(0.0)), 0.0);
  const OfeDensity l(ProductBasis::uniform(BasisFamily::legendre(), 1, 2), WeightVector(e2));
  EXPECT_THROW(l.density(v1(1.5)), DomainError);
}

TEST(Density, MarginalOfSeparableIsFactor) {
  Rng rng(4);
  const Eigen::VectorXd a = testutil::random_unit(rng, 3), b = testutil::random_unit(rng, 4);
  Eigen::VectorXd beta(12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) beta(i * 4 + j) = a(i) * b(j);
  const OfeDensity q(ProductBasis(std::vector<BasisFamily>(2, BasisFamily::hermite()), {3, 4}), WeightVector(beta));
  const OfeDensity qa(hermite(1, 3), WeightVector(a));
  const MarginalDensity m(q, 1);
  EXPECT_NEAR(m.coefficients().trace(), 1.0, 1e-14);
  EXPECT_LT((m.coefficients() - a * a.transpose()).norm(), 1e-15);
  for (double z : {-1.0, 0.2, 2.2}) EXPECT_NEAR(m.density(v1(z)), qa.density(v1(z)), 1e-15);
}

TEST(Density, MarginalMatchesQuadrature) {
  Rng rng(5);
  const auto q = random_density(hermite(2, 3), rng);
  const MarginalDensity m(q, 1);
  EXPECT_NEAR(marginal_coefficients(q, 1).trace(), 1.0, 1e-14);
  for (int n = 0; n < 20; ++n) {
    const double x = -4.0 + 8.0 * n / 19.0;
    const double oracle_value =
        oracle::integrate([&](double y) { return q.density(Eigen::Vector2d(x, y)); }, -14, 14);
    EXPECT_NEAR(m.density(v1(x)), oracle_value, 1e-8);
  }

  // Three dimensions with a transform: the 2-D prefix marginal.
  const auto t = StandardizingTransform::from_mean_covariance(
      Eigen::Vector3d(1, -1, 0.5), (Eigen::Matrix3d() << 2, 0.3, 0.1, 0.3, 1, 0.2, 0.1, 0.2, 0.5).finished());
  const auto q3 = random_density(hermite(3, 3), rng).with_transform(t);
  const MarginalDensity m2(q3, 2);
  for (const auto& p : {Eigen::Vector2d(1.0, -1.0), Eigen::Vector2d(0.0, 0.2), Eigen::Vector2d(2.5, -2.0)}) {
    const double oracle_value =
        oracle::integrate([&](double w) { return q3.density(Eigen::Vector3d(p(0), p(1), w)); }, -12, 12);
    EXPECT_NEAR(m2.density(p), oracle_value, 1e-8);
  }
}

TEST(CdfTable, HermiteExamples) {
  const auto t = CdfTable::build(BasisFamily::hermite(), 2);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(0, 0) = 1.0;
  EXPECT_NEAR(t.cdf(s, 0.0), 0.5, 1e-12);
  // Linear interpolation between nodes costs about h^2 / 8 * max|pdf'|.
  EXPECT_NEAR(t.cdf(s, 1.959964), frozen::kNormalCdf1959964, 1e-6);
  // At the nodes themselves only the Simpson error remains.
  for (Eigen::Index g = 0; g < t.grid_size(); g += 250)
    EXPECT_NEAR(t.phi(g, 0, 0), oracle::normal_cdf(t.grid()(g)), 1e-10);
  const auto end = t.phi_matrix(t.grid_size() - 1);
  EXPECT_NEAR(end(0, 1), 0.0, 1e-12);
  EXPECT_LT((end - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CdfTable, TableInvariants) {
  for (auto kind : {BasisKind::HermiteWeighted, BasisKind::Legendre, BasisKind::Fourier, BasisKind::LaguerreWeighted}) {
    const auto t = CdfTable::build(BasisFamily(kind), 8);
    const auto& g = t.grid();
    for (Eigen::Index i = 1; i < g.size(); ++i) ASSERT_LT(g(i - 1), g(i));
    EXPECT_LT((t.phi_matrix(g.size() - 1) - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-6);
    // Cauchy-Schwarz bounds |Phi_kl| by 1; the quadrature may overshoot by
    // at most the end tolerance.
    for (Eigen::Index i = 0; i < g.size(); i += 97)
      EXPECT_LE(t.phi_matrix(i).cwiseAbs().maxCoeff(), 1.0 + 1e-6);
  }
}

TEST(CdfTable, HermiteGridWidensWithOrder) {
  const auto t = CdfTable::build(BasisFamily::hermite(), 64);
  EXPECT_GE(t.grid()(t.grid_size() - 1), std::sqrt(4.0 * 64 + 2));
  EXPECT_LT((t.phi_matrix(t.grid_size() - 1) - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CdfTable, CoarseGridFailsToBuild) {
  CdfGridOptions coarse;
  coarse.points = 5;
  EXPECT_THROW(CdfTable::build(BasisFamily::hermite(), 10, coarse), CdfBuildError);
}

TEST(CdfTable, CacheReturnsSharedInstance) {
  const auto a = cdf_table_for(BasisFamily::hermite(), 4);
  const auto b = cdf_table_for(BasisFamily::hermite(), 4);
  EXPECT_EQ(a.get(), b.get());
}

TEST(Sampling, StandardNormal) {
  Rng rng(6);
  const OfeDensity q(hermite(1, 1), WeightVector(Eigen::VectorXd::Ones(1)));
  const auto s = sample(q, rng, 100000).points;
  const double m = s.mean();
  const double var = (s.array() - m).square().sum() / (s.cols() - 1);
  EXPECT_LT(std::abs(m), 0.02);
  EXPECT_LT(std::abs(var - 1.0), 0.03);
}

TEST(Sampling, TwoTermMean) {
  Rng rng(7);
  const OfeDensity q(hermite(1, 2), WeightVector(Eigen::Vector2d(1, 1) / std::numbers::sqrt2));
  EXPECT_LT(std::abs(sample(q, rng, 100000).points.mean() - 1.0), 0.02);
}

TEST(Sampling, SeparableHasNoCorrelation) {
  Rng rng(8);
  const Eigen::VectorXd a = testutil::random_unit(rng, 3), b = testutil::random_unit(rng, 3);
  Eigen::VectorXd beta(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) beta(i * 3 + j) = a(i) * b(j);
  const OfeDensity q(hermite(2, 3), WeightVector(beta));
  const Eigen::MatrixXd s = sample(q, rng, 100000).points;
  const Eigen::MatrixXd c = s.colwise() - s.rowwise().mean();
  const Eigen::Matrix2d cov = c * c.transpose() / (s.cols() - 1);
  EXPECT_LT(std::abs(cov(0, 1) / std::sqrt(cov(0, 0) * cov(1, 1))), 0.01);
}

TEST(Sampling, KolmogorovSmirnov) {
  Rng rng(9);
  const auto q = random_density(hermite(1, 6), rng);
  const auto r = sample(q, rng, 100000);
  std::vector<double> xs(r.points.data(), r.points.data() + r.points.size());
  std::sort(xs.begin(), xs.end());
  // Oracle CDF by adaptive quadrature of the density, accumulated piecewise.
  double ks = 0.0, cdf = oracle::integrate([&](double z) { return q.density(v1(z)); }, -30, xs.front());
  double prev = xs.front();
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cdf += oracle::integrate([&](double z) { return q.density(v1(z)); }, prev, xs[i], 3);
    prev = xs[i];
    ks = std::max({ks, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
  }
  EXPECT_LT(ks, frozen::kKsCritical1e5);
}

TEST(Sampling, ConditionalCoefficientsAreNormalizedAndPsd) {
  Rng rng(10);
  const auto q = random_density(hermite(3, 4), rng);
  std::normal_distribution<double> g;
  for (int n = 0; n < 50; ++n) {
    for (int d = 0; d < 3; ++d) {
      Eigen::VectorXd prefix(d);
      for (int i = 0; i < d; ++i) prefix(i) = 2 * g(rng);
      const auto s = conditional_coefficients(q, prefix);
      EXPECT_NEAR(s.trace(), 1.0, 1e-10);
      EXPECT_LT((s - s.transpose()).norm(), 1e-15);
      EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues().minCoeff(), -1e-10);
    }
  }
}

TEST(Sampling, MomentsMatchTwoD) {
  Rng rng(11);
  const auto t = StandardizingTransform::from_mean_covariance(
      Eigen::Vector2d(-1, 2), (Eigen::Matrix2d() << 2, 0.5, 0.5, 1).finished());
  const auto q = random_density(hermite(2, 4), rng).with_transform(t);
  const auto r = sample(q, rng, 100000);
  const auto m = moments(q);
  const Eigen::VectorXd emp = r.points.rowwise().mean();
  for (int d = 0; d < 2; ++d)
    EXPECT_LT(std::abs(emp(d) - m.mean(d)), 4 * std::sqrt(m.covariance(d, d) / 1e5));
  EXPECT_EQ(r.tail_clips, 0u);
}

TEST(Sampling, BoundedFamilies) {
  Rng rng(12);
  const ProductBasis b({BasisFamily::legendre(), BasisFamily::fourier(), BasisFamily::laguerre()}, {3, 3, 3});
  const auto q = random_density(b, rng);
  const auto r = sample(q, rng, 2000);
  for (Eigen::Index c = 0; c < r.points.cols(); ++c) EXPECT_TRUE(b.contains(r.points.col(c)));
}

TEST(Moments, HermiteIntegrals) {
  const auto mu = position_integrals(BasisFamily::hermite(), 4);
  const auto nu = squared_position_integrals(BasisFamily::hermite(), 4);
  EXPECT_EQ(mu(1, 0), 1.0);
  EXPECT_EQ(mu(2, 1), std::sqrt(2.0));
  EXPECT_EQ(mu(0, 0), 0.0);
  EXPECT_EQ(nu(0, 0), 1.0);
  EXPECT_EQ(nu(1, 1), 3.0);
  EXPECT_EQ(nu(2, 0), std::sqrt(2.0));
  // Quadrature oracle for the closed forms.
  const auto h = BasisFamily::hermite();
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      EXPECT_NEAR(mu(i - 1, j - 1), oracle::integrate([&](double z) { return z * h.eval(i, z) * h.eval(j, z); }, -30, 30),
                  1e-10);
      EXPECT_NEAR(nu(i - 1, j - 1),
                  oracle::integrate([&](double z) { return z * z * h.eval(i, z) * h.eval(j, z); }, -30, 30), 1e-10);
    }
}

TEST(Moments, WorkedExamples) {
  const OfeDensity base(hermite(1, 1), WeightVector(Eigen::VectorXd::Ones(1)));
  EXPECT_NEAR(mean(base)(0), 0.0, 1e-15);
  EXPECT_NEAR(covariance(base)(0, 0), 1.0, 1e-15);
  const OfeDensity two(hermite(1, 2), WeightVector(Eigen::Vector2d(1, 1) / std::numbers::sqrt2));
  EXPECT_NEAR(mean(two)(0), 1.0, 1e-14);
  EXPECT_NEAR(covariance(two)(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(oracle::integrate([&](double z) { return z * two.density(v1(z)); }, -30, 30), 1.0, 1e-10);
}

double moment_2d(const OfeDensity& q, int px, int py) {
  return oracle::integrate_2d(
      [&](double x, double y) { return std::pow(x, px) * std::pow(y, py) * q.density(Eigen::Vector2d(x, y)); }, -14,
      14, -14, 14, 6);
}

TEST(Moments, RandomDensitiesMatchQuadrature) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = random_density(hermite(1, 2 + trial % 6), rng);
    const auto m = moments(q);
    const double m1 = oracle::integrate([&](double z) { return z * q.density(v1(z)); }, -30, 30);
    const double m2 = oracle::integrate([&](double z) { return z * z * q.density(v1(z)); }, -30, 30);
    EXPECT_NEAR(m.mean(0), m1, 1e-6);
    EXPECT_NEAR(m.covariance(0, 0), m2 - m1 * m1, 1e-6);
  }
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = random_density(hermite(2, 2 + trial % 3), rng);
    const auto m = moments(q);
    const double ex = moment_2d(q, 1, 0), ey = moment_2d(q, 0, 1);
    EXPECT_NEAR(m.mean(0), ex, 1e-6);
    EXPECT_NEAR(m.mean(1), ey, 1e-6);
    EXPECT_NEAR(m.covariance(0, 0), moment_2d(q, 2, 0) - ex * ex, 1e-6);
    EXPECT_NEAR(m.covariance(1, 1), moment_2d(q, 0, 2) - ey * ey, 1e-6);
    EXPECT_NEAR(m.covariance(0, 1), moment_2d(q, 1, 1) - ex * ey, 1e-6);
    EXPECT_EQ(m.covariance(0, 1), m.covariance(1, 0));
  }
}

TEST(Moments, SeparableHasZeroCrossCovariance) {
  Rng rng(14);
  const Eigen::VectorXd a = testutil::random_unit(rng, 3), b = testutil::random_unit(rng, 4);
  Eigen::VectorXd beta(12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) beta(i * 4 + j) = a(i) * b(j);
  const OfeDensity q(ProductBasis(std::vector<BasisFamily>(2, BasisFamily::hermite()), {3, 4}), WeightVector(beta));
  EXPECT_NEAR(covariance(q)(0, 1), 0.0, 1e-14);
  EXPECT_NEAR(mean(q)(0), mean(OfeDensity(hermite(1, 3), WeightVector(a)))(0), 1e-14);
}

TEST(Moments, OtherFamiliesMatchQuadrature) {
  Rng rng(15);
  for (auto kind : {BasisKind::Legendre, BasisKind::Fourier, BasisKind::LaguerreWeighted}) {
    const auto q = random_density(ProductBasis::uniform(BasisFamily(kind), 1, 5), rng);
    const auto& s = q.basis().family(0).support();
    const double hi = kind == BasisKind::LaguerreWeighted ? 200.0 : s.hi;
    const double m1 = oracle::integrate([&](double z) { return z * q.density(v1(z)); }, s.lo, hi);
    const double m2 = oracle::integrate([&](double z) { return z * z * q.density(v1(z)); }, s.lo, hi);
    const auto m = moments(q);
    EXPECT_NEAR(m.mean(0), m1, 1e-6) << to_string(kind);
    EXPECT_NEAR(m.covariance(0, 0), m2 - m1 * m1, 1e-6) << to_string(kind);
  }
}

TEST(Moments, TransformPushesMoments) {
  const auto t = StandardizingTransform::from_mean_covariance(
      Eigen::Vector2d(3, -1), (Eigen::Matrix2d() << 4, 1, 1, 2).finished());
  const OfeDensity q(hermite(2, 2), WeightVector(Eigen::Vector4d(1, 0, 0, 0)), t);
  const auto m = moments(q);
  EXPECT_LT((m.mean - Eigen::Vector2d(3, -1)).norm(), 1e-14);
  EXPECT_LT((m.covariance - t.covariance()).norm(), 1e-14);
}

TEST(Serialization, RoundTripIsBitExact) {
  Rng rng(16);
  const auto t = StandardizingTransform::from_mean_covariance(
      Eigen::Vector2d(0.1, 1.0 / 3.0), (Eigen::Matrix2d() << 2, 0.7, 0.7, 1).finished());
  const ProductBasis b({BasisFamily::hermite(), BasisFamily::legendre(12)}, {4, 3});
  const auto q = random_density(b, rng).with_transform(t);
  const auto back = density_from_json(density_to_json(q));
  EXPECT_EQ(back.alpha().values(), q.alpha().values());
  EXPECT_EQ(back.basis(), q.basis());
  EXPECT_EQ(back.transform()->location(), t.location());
  EXPECT_EQ(back.transform()->scale(), t.scale());
  EXPECT_EQ(density_to_json(back), density_to_json(q));
  const auto plain = random_density(hermite(1, 3), rng);
  EXPECT_FALSE(density_from_json(density_to_json(plain)).transform().has_value());
}

TEST(Serialization, RejectsBadDocuments) {
  EXPECT_THROW(density_from_json("{"), std::invalid_argument);
  EXPECT_THROW(density_from_json(R"({"format":"eigenvi.density","schema_version":2})"), std::invalid_argument);
  EXPECT_THROW(
      density_from_json(
          R"({"format":"eigenvi.density","schema_version":1,"dim":1,"basis":[{"family":"hermite","order":2,"max_order":64}],"alpha":[1.0],"transform":null})"),
      std::invalid_argument);
}

}  // namespace
