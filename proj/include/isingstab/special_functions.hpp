#pragma once

// Chi-square distribution function and the central mass of the standard
// Gaussian.

#include <cmath>
#include <limits>

#include "isingstab/errors.hpp"

namespace isingstab {

namespace detail {

inline constexpr int kGammaMaxIterations = 1'000'000;
inline constexpr double kGammaEps = 1e-16;

// log of x^a e^-x / Gamma(a)
inline double gamma_log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

// P(a, x) by the power series, valid for x < a + 1.
inline double lower_gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < kGammaMaxIterations; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return std::exp(gamma_log_prefactor(a, x) + std::log(sum));
}

// Q(a, x) by the modified Lentz continued fraction, valid for x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(gamma_log_prefactor(a, x) + std::log(h));
}

}  // namespace detail

/// Regularised lower incomplete gamma P(a, x) for a > 0, x >= 0. Results
/// that underflow come back as exactly 0 and results within an ulp of 1 as 1.
inline double regularized_lower_gamma(double a, double x) {
  detail::require(a > 0.0, "incomplete gamma needs a > 0");
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  double p;
  if (x < a + 1.0) {
    p = detail::lower_gamma_series(a, x);
  } else {
    p = 1.0 - detail::upper_gamma_fraction(a, x);
  }
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

/// Chi-square CDF with `dof` degrees of freedom; 0 for x < 0.
inline double chi_square_cdf(double dof, double x) {
  detail::require(dof >= 1.0, "chi-square needs dof >= 1");
  if (x <= 0.0 || std::isnan(x)) return 0.0;
  return regularized_lower_gamma(0.5 * dof, 0.5 * x);
}

/// Mass of the standard Gaussian on [-delta, delta].
inline double gaussian_central_mass(double delta) {
  detail::require(delta >= 0.0, "gaussian_central_mass needs delta >= 0");
  return std::erf(delta / std::sqrt(2.0));
}

/// Standard Gaussian CDF.
inline double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace isingstab
