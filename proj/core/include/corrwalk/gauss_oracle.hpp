#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "corrwalk/fgn.hpp"
#include "corrwalk/rng.hpp"
#include "corrwalk/walk.hpp"

namespace corrwalk {

/// Dense factorizations are capped at this dimension.
inline constexpr std::int64_t kMaxOracleSteps = 4096;

/// n x n fGn covariance (Toeplitz, unit diagonal).
Eigen::MatrixXd fgn_covariance_matrix(double hurst, std::int64_t n);
/// Covariance of (B(t_1), ..., B(t_n)) on t_k = k / n.
Eigen::MatrixXd fbm_covariance_matrix(double hurst, std::int64_t n);

/// Lower Cholesky factor of the fGn covariance. Immutable once built; on
/// failure 1e-12 is added to the diagonal once and the factorization retried.
class FgnFactor {
 public:
  FgnFactor(double hurst, std::int64_t n);

  /// Process-wide cache keyed by (H, n).
  static std::shared_ptr<const FgnFactor> cached(double hurst, std::int64_t n);

  double hurst() const noexcept { return hurst_; }
  std::int64_t size() const noexcept { return n_; }
  bool jittered() const noexcept { return jittered_; }
  const Eigen::MatrixXd& lower() const noexcept { return lower_; }

  /// Unit-variance fGn sample: L z with z iid N(0, 1) from `rng`.
  Eigen::VectorXd sample(Rng& rng) const;

 private:
  double hurst_;
  std::int64_t n_;
  bool jittered_ = false;
  Eigen::MatrixXd lower_;
};

/// Exact fBm on t_k = k / N, k = 0..N (N + 1 values, first 0). 0 < H < 1.
std::vector<double> cholesky_fbm(double hurst, std::int64_t steps, std::uint64_t seed);
std::vector<double> cholesky_fbm(const FgnFactor& factor, std::uint64_t seed);

/// Thresholds exact fGn at z(p): Y = +1 when Z <= z(p), else -1.
Trajectory dichotomized_gaussian_walk(const HurstModel& model, double p, std::int64_t steps,
                                      std::uint64_t seed);
Trajectory dichotomized_gaussian_walk(const FgnFactor& factor, const HurstModel& model,
                                      double p, std::uint64_t seed);

}  // namespace corrwalk
