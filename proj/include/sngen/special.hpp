#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sngen::special {

namespace detail {

inline constexpr int kMaxIterations = 10000;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// P(a, x) by its power series; converges quickly for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the Legendre continued fraction (modified Lentz); for x >= a + 1.
inline double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Regularized lower incomplete gamma function P(a, x).
inline double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_fraction(a, x);
}

/// Regularized upper incomplete gamma function Q(a, x) = 1 - P(a, x).
inline double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: shape must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_fraction(a, x);
}

/// Density of Gamma(a, 1) at x.
inline double gamma_density(double a, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
}

/// Inverse of P(a, .): returns x with P(a, x) = u for u in (0, 1).
///
/// Newton iteration inside a maintained bracket; any step that leaves the
/// bracket, or fails to shrink it, is replaced by bisection (geometric when
/// the bracket spans many orders of magnitude). Relative tolerance 1e-10.
inline double gamma_p_inverse(double a, double u) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p_inverse: shape must be positive");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("gamma_p_inverse: probability must be in (0, 1)");
  constexpr double kTol = 1e-10;

  // Starting point (Wilson-Hilferty for a > 1, small-x power law otherwise).
  double x;
  if (a > 1.0) {
    const double pp = u < 0.5 ? u : 1.0 - u;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (u < 0.5) z = -z;
    x = std::max(1e-3, a * std::pow(1.0 - 1.0 / (9.0 * a) - z / (3.0 * std::sqrt(a)), 3.0));
  } else {
    const double t = 1.0 - a * (0.253 + a * 0.12);
    x = u < t ? std::pow(u / t, 1.0 / a) : 1.0 - std::log(1.0 - (u - t) / (1.0 - t));
  }
  if (!(x > 0.0) || !std::isfinite(x)) x = a;

  // Bracket the root.
  double lo = 0.0;
  double hi = std::max(1.0, x);
  while (gamma_p(a, hi) < u) {
    lo = hi;
    hi *= 2.0;
  }
  if (x <= lo || x >= hi) x = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;

  for (int iter = 0; iter < 1000; ++iter) {
    const double f = gamma_p(a, x) - u;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = gamma_density(a, x);
    double next = slope > 0.0 ? x - f / slope : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) {
      // Bisect; use the geometric midpoint when the bracket spans decades.
      if (lo == 0.0) {
        next = hi / 16.0;
      } else if (hi / lo > 4.0) {
        next = std::sqrt(lo * hi);
      } else {
        next = 0.5 * (lo + hi);
      }
    }
    if (std::fabs(next - x) <= kTol * std::fabs(next) || hi - lo <= kTol * hi) return next;
    x = next;
  }
  return x;
}

/// Standard normal cumulative distribution function.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace sngen::special
