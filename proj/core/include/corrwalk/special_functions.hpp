#pragma once

// Normal distribution helpers and log-Gamma. Everything here is pure and
// reentrant.

namespace corrwalk {

/// Standard normal CDF. Saturates to 0/1 in the far tails; the lower tail is
/// computed through erfc so small probabilities keep their relative accuracy.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x), accurate for large positive x.
double std_normal_sf(double x);

/// Standard normal quantile z(p). Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// P(Z1 <= h, Z2 <= k) for a standard bivariate normal pair with
/// correlation r, |r| < 1.
///
/// Genz's (2004) refinement of the Drezner-Wesolowsky integration: a
/// Gauss-Legendre rule in the arcsine of the correlation for |r| < 0.925 and
/// an asymptotic expansion plus correction integral otherwise. Absolute
/// error is near double precision; in the joint lower tail every term is
/// positive so relative accuracy is kept as well.
double bvn_cdf(double h, double k, double r);

/// log Gamma(x) for x > 0.
double ln_gamma(double x);

}  // namespace corrwalk
