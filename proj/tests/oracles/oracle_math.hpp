#pragma once

// Reference implementations that share no code with the library: explicit
// power-sum Hermite polynomials in 50-digit arithmetic, adaptive
// Gauss-Kronrod quadrature from Boost, and closed-form Gaussian quantities.

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

/// He_n(z) = n! sum_m (-1)^m z^{n-2m} / (m! (n-2m)! 2^m).
inline mp hermite_he(int n, const mp& z) {
  mp sum = 0;
  mp nfact = boost::math::factorial<mp>(static_cast<unsigned>(n));
  for (int m = 0; 2 * m <= n; ++m) {
    mp term = pow(z, n - 2 * m) /
              (boost::math::factorial<mp>(static_cast<unsigned>(m)) *
               boost::math::factorial<mp>(static_cast<unsigned>(n - 2 * m)) * pow(mp(2), m));
    sum += (m % 2 ? -term : term);
  }
  return nfact * sum;
}

/// Normalized weighted Hermite function, 1-based: phi_{n+1}(z) =
/// (sqrt(2 pi) n!)^{-1/2} exp(-z^2 / 4) He_n(z).
inline mp hermite_phi(int k, const mp& z) {
  const int n = k - 1;
  const mp two_pi = 2 * boost::math::constants::pi<mp>();
  return exp(-z * z / 4) * hermite_he(n, z) /
         sqrt(sqrt(two_pi) * boost::math::factorial<mp>(static_cast<unsigned>(n)));
}

/// Central difference of hermite_phi with step h, evaluated in 50 digits.
inline mp hermite_phi_fd(int k, const mp& z, const mp& h) {
  return (hermite_phi(k, z + h) - hermite_phi(k, z - h)) / (2 * h);
}

/// P_n via the explicit sum 2^{-n} sum_m (-1)^m C(n, m) C(2n - 2m, n) x^{n-2m}.
inline mp legendre_p(int n, const mp& x) {
  mp sum = 0;
  for (int m = 0; 2 * m <= n; ++m) {
    mp term = boost::math::binomial_coefficient<mp>(static_cast<unsigned>(n), static_cast<unsigned>(m)) *
              boost::math::binomial_coefficient<mp>(static_cast<unsigned>(2 * n - 2 * m),
                                                    static_cast<unsigned>(n)) *
              pow(x, n - 2 * m);
    sum += (m % 2 ? -term : term);
  }
  return sum / pow(mp(2), n);
}

/// Adaptive 61-point Gauss-Kronrod integral of f over [a, b] in double.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        unsigned depth = 15) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, 1e-13, &err);
}

/// Nested adaptive integration over [ax, bx] x [ay, by].
inline double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                           double ay, double by, unsigned depth = 10) {
  return integrate([&](double x) { return integrate([&](double y) { return f(x, y); }, ay, by, depth); },
                   ax, bx, depth);
}

inline double normal_cdf(double x) { return 0.5 * boost::math::erfc(-x / std::numbers::sqrt2); }

inline double normal_pdf(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

/// KL(N(m1, v1) || N(m2, v2)) for scalars.
inline double gaussian_kl(double m1, double v1, double m2, double v2) {
  return 0.5 * (v1 / v2 + (m1 - m2) * (m1 - m2) / v2 - 1.0 + std::log(v2 / v1));
}

/// Asymptotic Kolmogorov critical value c / sqrt(n) with P(sqrt(n) D > c) =
/// level, from the alternating series 2 sum (-1)^{k-1} exp(-2 k^2 c^2),
/// solved by bisection.
inline double ks_critical(double level, double n) {
  auto tail = [](double c) {
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) s += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * c * c);
    return s;
  };
  double lo = 0.5, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / std::sqrt(n);
}

}  // namespace oracle
