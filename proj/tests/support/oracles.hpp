#pragma once

// Independent reference computations for tests. Nothing here calls into the
// corrwalk numerical routines it is used to check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace corrwalk::oracle {

// Normal integral by the odd-power series
//   Phi(x) = 1/2 + phi(x) (x + x^3/3 + x^5/(3*5) + ...),
// summed in long double. Good to ~1e-15 for |x| <= 8.
inline double normal_cdf(double x) {
  if (x > 8.0) return 1.0 - normal_cdf(-x);
  if (x < -8.0) {
    // Continued fraction for the Mills ratio in the far tail.
    long double t = 0.0L;
    for (int k = 200; k >= 1; --k) t = k / (static_cast<long double>(-x) + t);
    const long double phi = std::exp(-0.5L * x * x) / std::sqrt(2.0L * std::numbers::pi_v<long double>);
    return static_cast<double>(phi / (static_cast<long double>(-x) + t));
  }
  long double term = x, sum = x;
  const long double x2 = static_cast<long double>(x) * x;
  for (int k = 1; k < 500; ++k) {
    term *= x2 / (2 * k + 1);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  const long double phi = std::exp(-0.5L * x2) / std::sqrt(2.0L * std::numbers::pi_v<long double>);
  return static_cast<double>(0.5L + phi * sum);
}

// Quantile by bisection on the series CDF.
inline double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double bvn_density(double x, double y, double r) {
  const double s = 1.0 - r * r;
  return std::exp(-(x * x - 2.0 * r * x * y + y * y) / (2.0 * s)) /
         (2.0 * std::numbers::pi * std::sqrt(s));
}

// P(Z1 <= h, Z2 <= k): adaptive Gauss-Kronrod in x of phi(x) Phi((k - r x)/sqrt(1-r^2)),
// the inner integral of the bivariate density done by the series CDF.
inline double bvn_cdf_conditional(double h, double k, double r) {
  const double s = std::sqrt(1.0 - r * r);
  auto f = [&](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) * normal_cdf((k - r * x) / s);
  };
  using boost::math::quadrature::gauss_kronrod;
  const double lower = std::min(-12.0, h - 1.0);
  // Split at the ridge x = k / r where the inner CDF switches on.
  double mid = h;
  if (r != 0.0) mid = std::clamp(k / r, lower, h);
  double total = 0.0;
  if (mid > lower) total += gauss_kronrod<double, 61>::integrate(f, lower, mid, 12, 1e-13);
  if (h > mid) total += gauss_kronrod<double, 61>::integrate(f, mid, h, 12, 1e-13);
  return total;
}

// Nested adaptive 2-D quadrature of the bivariate density over (-inf, h] x (-inf, k].
inline double bvn_cdf_2d(double h, double k, double r) {
  using boost::math::quadrature::gauss_kronrod;
  const double lo_x = std::min(-12.0, h - 1.0);
  const double lo_y = std::min(-12.0, k - 1.0);
  auto inner = [&](double x) {
    auto g = [&](double y) { return bvn_density(x, y, r); };
    return gauss_kronrod<double, 31>::integrate(g, lo_y, k, 10, 1e-13);
  };
  return gauss_kronrod<double, 31>::integrate(inner, lo_x, h, 10, 1e-12);
}

// Gamma(x) as the Euler integral, split at t = 1.
inline double gamma(double x) {
  auto f = [&](double t) { return t > 0.0 ? std::exp((x - 1.0) * std::log(t) - t) : 0.0; };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, 1.0, 1e-15) + es.integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-15);
}

// Integral over v in [1/2, 1] of (1-H) 2^{3-2H} (2v-1)^n (1-v)^{1-2H}.
inline double mixture_correlation_integral(std::int64_t n, double hurst) {
  const double c = (1.0 - hurst) * std::exp2(3.0 - 2.0 * hurst);
  // Substitute w = 1 - v so the endpoint singularity sits at w = 0.
  auto f = [&](double w) {
    return c * std::pow(1.0 - 2.0 * w, static_cast<double>(n)) * std::pow(w, 1.0 - 2.0 * hurst);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, 0.0, 0.5, 1e-14);
}

inline double median_orthant(double r) { return 0.25 + std::asin(r) / (2.0 * std::numbers::pi); }

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace corrwalk::oracle
