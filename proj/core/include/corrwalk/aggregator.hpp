#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corrwalk/fgn.hpp"
#include "corrwalk/p_sampler.hpp"
#include "corrwalk/walk.hpp"

namespace corrwalk {

/// Running sum of per-trajectory standardized levels
/// (X_k - k (2p - 1)) / sqrt(4 p (1 - p)), k = 0..N.
///
/// Entries are combined pairwise (binary-counter order), so the result is a
/// fixed function of the insertion sequence.
class PathAccumulator {
 public:
  explicit PathAccumulator(std::int64_t steps);

  std::int64_t steps() const noexcept { return steps_; }
  std::int64_t count() const noexcept { return count_; }

  /// Standardizes by the trajectory's own p. Throws DomainError on a length
  /// mismatch.
  void accumulate(const Trajectory& trajectory);
  /// Adds an already standardized level sequence of length steps + 1.
  void accumulate_standardized(std::span<const double> levels);

  /// Collapsed sum, length steps + 1.
  std::vector<double> sums() const;

 private:
  void push(std::vector<double> entry);

  std::int64_t steps_;
  std::int64_t count_ = 0;
  std::vector<std::vector<double>> stack_;
  std::vector<bool> occupied_;
};

/// Standardized levels of one trajectory (length N + 1, first entry 0).
std::vector<double> standardized_levels(const Trajectory& trajectory);

struct RunStats {
  std::uint64_t total_resamples = 0;
  std::uint64_t max_resamples = 0;
  std::uint64_t clamped = 0;
  std::uint64_t at_floor = 0;
  double p_mean = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double rho_mean = 0.0;
  double sigma_max = 0.0;
  double u_max = 0.0;
};

struct RunMeta {
  std::uint64_t seed = 0;
  WalkMode mode = WalkMode::paper;
  InfeasiblePolicy policy = InfeasiblePolicy::resample;
  bool shared_p = false;
  RunStats stats;
};

struct AggregatedPath {
  double hurst = 0.5;
  std::int64_t steps = 0;
  std::int64_t paths = 0;
  std::vector<double> times;   ///< k / N, k = 0..N
  std::vector<double> values;  ///< values[0] == 0
  RunMeta meta;
};

/// values[k] = scale * sums[k] / (N^H sqrt(M)), where scale is a_H (or 1 for
/// the Brownian model). Throws DomainError when M == 0.
AggregatedPath finalize(const std::vector<double>& sums, const HurstModel& model,
                        std::int64_t paths, std::int64_t steps);
AggregatedPath finalize(const PathAccumulator& acc, const HurstModel& model,
                        std::int64_t paths, std::int64_t steps);

struct GenerateOptions {
  HurstModel model;
  std::int64_t steps = 1024;
  std::int64_t paths = 256;
  WalkMode mode = WalkMode::paper;
  InfeasiblePolicy policy = InfeasiblePolicy::resample;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// One PSample shared by all trajectories instead of one per trajectory.
  bool shared_p = false;
};

/// Trajectories per reduction block; blocks are the unit of parallel work.
inline constexpr std::int64_t kReductionBlock = 64;

/// Full pipeline: per-trajectory parameters, streaming walks, blocked
/// reduction, normalization. Trajectory i draws from the stream
/// derive_seed(seed, i); output bits do not depend on `workers`.
AggregatedPath generate_fbm(const GenerateOptions& options);

}  // namespace corrwalk
