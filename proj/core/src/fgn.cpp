#include "corrwalk/fgn.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "corrwalk/errors.hpp"
#include "corrwalk/special_functions.hpp"

namespace corrwalk {

namespace {

void require_open_unit(double hurst, const char* where) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw DomainError(std::string(where) + ": Hurst exponent must lie in (0, 1), got " +
                      std::to_string(hurst));
  }
}

void require_persistent(double hurst, const char* where) {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    throw DomainError(std::string(where) + ": Hurst exponent must lie in (1/2, 1), got " +
                      std::to_string(hurst));
  }
}

}  // namespace

HurstModel::HurstModel(double hurst)
    : hurst_(hurst), delta1_(0.0), scale_(0.0), brownian_(false) {
  require_persistent(hurst, "HurstModel");
  delta1_ = one_step_fgn_correlation(hurst);
  scale_ = scaling_constant(hurst);
}

HurstModel HurstModel::brownian() { return HurstModel(0.5, 0.0, 1.0, true); }

double fbm_covariance(double s, double t, double hurst) {
  require_open_unit(hurst, "fbm_covariance");
  if (!(s >= 0.0 && t >= 0.0)) {
    throw DomainError("fbm_covariance: times must be nonnegative");
  }
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::fabs(t - s), two_h));
}

double fgn_autocovariance(std::int64_t lag, double hurst) {
  require_open_unit(hurst, "fgn_autocovariance");
  if (lag < 0) throw DomainError("fgn_autocovariance: lag must be nonnegative");
  const double two_h = 2.0 * hurst;
  const double m = static_cast<double>(lag);
  return 0.5 * (std::pow(m + 1.0, two_h) + std::pow(std::fabs(m - 1.0), two_h) -
                2.0 * std::pow(m, two_h));
}

double one_step_fgn_correlation(double hurst) {
  if (!(hurst > 0.0 && hurst <= 1.0)) {
    throw DomainError("one_step_fgn_correlation: Hurst exponent must lie in (0, 1]");
  }
  return 0.5 * (std::exp2(2.0 * hurst) - 2.0);
}

double scaling_constant(double hurst) {
  require_persistent(hurst, "scaling_constant");
  return std::sqrt(hurst * (2.0 * hurst - 1.0) / std::exp(ln_gamma(3.0 - 2.0 * hurst)));
}

double theoretical_mixture_correlation(std::int64_t n, double hurst) {
  require_persistent(hurst, "theoretical_mixture_correlation");
  if (n < 1) throw DomainError("theoretical_mixture_correlation: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double two_minus = 2.0 - 2.0 * hurst;
  return std::exp(std::log(two_minus) + ln_gamma(nd + 1.0) + ln_gamma(two_minus) -
                  ln_gamma(nd + 1.0 + two_minus));
}

}  // namespace corrwalk
