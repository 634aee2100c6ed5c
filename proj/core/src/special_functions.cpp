#include "corrwalk/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "corrwalk/errors.hpp"

namespace corrwalk {

InfeasibleTargetError::InfeasibleTargetError(double target, double sigma_max)
    : NumericError("correlation target " + std::to_string(target) +
                   " exceeds attainable maximum " + std::to_string(sigma_max)),
      target_(target),
      sigma_max_(sigma_max) {}

InfeasibleUniformError::InfeasibleUniformError(double u, double sigma_max)
    : NumericError("uniform draw u=" + std::to_string(u) +
                   " has no solution (sigma_max=" + std::to_string(sigma_max) + ")"),
      u_(u),
      sigma_max_(sigma_max) {}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lower-tail quantile for 0 < p <= 0.5: Wichura's AS241 (PPND16) followed by
// one Halley step against the erfc-based CDF.
double lower_quantile(double p) {
  const double q = p - 0.5;
  double x;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    x = q *
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
  } else {
    double r = std::sqrt(-std::log(p));
    if (r <= 5.0) {
      r -= 1.6;
      x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
    } else {
      r -= 5.0;
      x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
    }
    x = -x;
  }
  const double e = std_normal_cdf(x) - p;
  const double u = e * std::sqrt(kTwoPi) * std::exp(0.5 * x * x);
  if (std::isfinite(u)) x -= u / (1.0 + 0.5 * x * u);
  return x;
}

// Gauss-Legendre half-rules (positive abscissae on [-1, 1]) used by the
// Genz integration; order grows with |r|.
constexpr std::array<double, 3> kW6 = {0.1713244923791705, 0.3607615730481384,
                                       0.4679139345726904};
constexpr std::array<double, 3> kX6 = {0.9324695142031522, 0.6612093864662647,
                                       0.2386191860831970};
constexpr std::array<double, 6> kW12 = {0.04717533638651177, 0.1069393259953183,
                                        0.1600783285433464,  0.2031674267230659,
                                        0.2334925365383547,  0.2491470458134029};
constexpr std::array<double, 6> kX12 = {0.9815606342467191, 0.9041172563704750,
                                        0.7699026741943050, 0.5873179542866171,
                                        0.3678314989981802, 0.1252334085114692};
constexpr std::array<double, 10> kW20 = {
    0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
    0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
    0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
    0.1527533871307259};
constexpr std::array<double, 10> kX20 = {
    0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
    0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
    0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
    0.07652652113349733};

template <std::size_t N, typename F>
double gl_sum(const std::array<double, N>& w, const std::array<double, N>& x, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += w[i] * (f(1.0 - x[i]) + f(1.0 + x[i]));
  return s;
}

template <typename F>
double gl_integrate(double abs_r, F&& f) {
  if (abs_r < 0.3) return gl_sum(kW6, kX6, f);
  if (abs_r < 0.75) return gl_sum(kW12, kX12, f);
  return gl_sum(kW20, kX20, f);
}

// P(X > h, Y > k), Genz (2004) BVNU.
double bvn_upper(double h, double k, double r) {
  if (r == 0.0) return std_normal_sf(h) * std_normal_sf(k);
  double hk = h * k;
  double bvn = 0.0;
  if (std::fabs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = 0.5 * std::asin(r);
    bvn = gl_integrate(std::fabs(r), [&](double x) {
      const double sn = std::sin(asr * x);
      return std::exp((sn * hk - hs) / (1.0 - sn * sn));
    });
    return bvn * asr / kTwoPi + std_normal_sf(h) * std_normal_sf(k);
  }
  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  const double as = (1.0 - r) * (1.0 + r);
  double a = std::sqrt(as);
  const double bs = (h - k) * (h - k);
  double asr = -0.5 * (bs / as + hk);
  const double c = (4.0 - hk) / 8.0;
  const double d = (12.0 - hk) / 80.0;
  if (asr > -100.0) {
    bvn = a * std::exp(asr) *
          (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
  }
  if (hk > -100.0) {
    const double b = std::sqrt(bs);
    const double sp = std::sqrt(kTwoPi) * std_normal_cdf(-b / a);
    bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
  }
  a *= 0.5;
  const double corr = gl_integrate(1.0, [&](double x) {
    const double xs = (a * x) * (a * x);
    const double e = -0.5 * (bs / xs + hk);
    if (e <= -100.0) return 0.0;
    const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
    const double rs = std::sqrt(1.0 - xs);
    const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
    return std::exp(e) * (sp - ep);
  });
  bvn = (a * corr - bvn) / kTwoPi;
  if (r > 0.0) return bvn + std_normal_sf(std::max(h, k));
  if (h >= k) return -bvn;
  const double l = h < 0.0 ? std_normal_cdf(k) - std_normal_cdf(h)
                           : std_normal_sf(h) - std_normal_sf(k);
  return l - bvn;
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
  }
  if (p <= 0.5) return lower_quantile(p);
  // 1 - p is exact for p in [0.5, 1).
  return -lower_quantile(1.0 - p);
}

double bvn_cdf(double h, double k, double r) {
  if (!(std::fabs(r) < 1.0)) {
    throw DomainError("bvn_cdf: correlation must satisfy |r| < 1, got " + std::to_string(r));
  }
  if (std::isnan(h) || std::isnan(k)) throw DomainError("bvn_cdf: NaN limit");
  if (h == -INFINITY || k == -INFINITY) return 0.0;
  if (h == INFINITY) return std_normal_cdf(k);
  if (k == INFINITY) return std_normal_cdf(h);
  // Upper tails: use complementary forms so the O(1) part is not computed as
  // a difference of numbers near one.
  constexpr double kTail = 8.0;
  if (h > kTail && k > kTail) {
    return std::clamp(1.0 - std_normal_sf(h) - std_normal_sf(k) + bvn_upper(h, k, r), 0.0, 1.0);
  }
  if (h > kTail) return std::clamp(std_normal_cdf(k) - bvn_upper(h, -k, -r), 0.0, 1.0);
  if (k > kTail) return std::clamp(std_normal_cdf(h) - bvn_upper(-h, k, -r), 0.0, 1.0);
  return std::clamp(bvn_upper(-h, -k, r), 0.0, 1.0);
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: x must be positive, got " + std::to_string(x));
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace corrwalk
