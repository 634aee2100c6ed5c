#pragma once

#include <cstdint>

namespace corrwalk {

/// Hurst exponent together with the constants the construction derives from
/// it: the lag-1 fGn correlation and the scaling constant of the limit.
///
/// The supported range is the open interval (1/2, 1). H = 1/2 is available
/// only through `brownian()`, which stands for the independent +-1 walk with
/// classical Donsker scaling (delta1 = 0, scaling factor 1).
class HurstModel {
 public:
  /// Throws DomainError unless 1/2 < H < 1.
  explicit HurstModel(double hurst);

  static HurstModel brownian();

  double hurst() const noexcept { return hurst_; }
  /// One-step fGn correlation (2^{2H} - 2) / 2.
  double delta1() const noexcept { return delta1_; }
  /// Multiplier applied to the normalized sum: a_H, or 1 for `brownian()`.
  double scale() const noexcept { return scale_; }
  bool is_brownian() const noexcept { return brownian_; }

 private:
  HurstModel(double hurst, double delta1, double scale, bool brownian)
      : hurst_(hurst), delta1_(delta1), scale_(scale), brownian_(brownian) {}

  double hurst_;
  double delta1_;
  double scale_;
  bool brownian_;
};

/// fBm covariance 1/2 (t^{2H} + s^{2H} - |t - s|^{2H}); s, t >= 0, 0 < H < 1.
double fbm_covariance(double s, double t, double hurst);

/// fGn autocovariance at integer lag m >= 0 (unit variance at m = 0).
double fgn_autocovariance(std::int64_t lag, double hurst);

/// Lag-1 fGn correlation; strictly increasing in H, equal to 1 at H = 1.
double one_step_fgn_correlation(double hurst);

/// a_H = sqrt(H (2H - 1) / Gamma(3 - 2H)); requires 1/2 < H < 1.
double scaling_constant(double hurst);

/// Lag-n correlation of the persistence mixture,
/// (2 - 2H) Gamma(n + 1) Gamma(2 - 2H) / Gamma(n + 3 - 2H), evaluated in log
/// space. Requires n >= 1 and 1/2 < H < 1.
double theoretical_mixture_correlation(std::int64_t n, double hurst);

}  // namespace corrwalk
