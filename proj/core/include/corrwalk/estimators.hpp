#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace corrwalk {

/// Discrete-second-derivative Hurst estimate:
///   V(d) = mean_k (x[k + 2d] - 2 x[k + d] + x[k])^2,  H = 1/2 log2(V(2) / V(1)).
/// Requires at least 16 samples; throws NumericError for a path with no
/// second-difference energy (e.g. a straight line).
double dsod_hurst(std::span<const double> path);

/// Aggregated-variance estimate: OLS slope s of log Var(block means of the
/// increments) on log m over m = 1, 2, 4, ..., N/16, H = 1 + s/2. A path with
/// constant increments returns 1. Requires at least 256 samples.
double aggregated_variance_hurst(std::span<const double> path);

/// Biased sample autocorrelations at lags 1..max_lag; requires
/// x.size() >= 10 max_lag.
std::vector<double> empirical_acf(std::span<const double> x, std::int64_t max_lag);

std::vector<double> path_increments(std::span<const double> path);

struct EstimateReport {
  double h_dsod = 0.0;
  std::optional<double> h_aggvar;
  std::vector<double> acf;  ///< increment autocorrelations at lags 1..L
  std::int64_t n_used = 0;  ///< number of path samples
  std::vector<std::string> notes;
};

/// Runs every estimator that the path length supports.
EstimateReport estimate_report(std::span<const double> path, std::int64_t max_lag = 10);

// Statistical helpers used by the validation harness.

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Sample mean with a non-overlapping batch-means standard error, which
/// stays honest for autocorrelated chains as long as batches are long
/// compared with the correlation time.
MeanEstimate batch_means(std::span<const double> x, std::int64_t batches = 100);

/// Bartlett's large-sample standard error of the lag-h sample
/// autocorrelation for a process with autocorrelation function `acf`.
double bartlett_acf_standard_error(const std::function<double(std::int64_t)>& acf,
                                   std::int64_t lag, std::int64_t n,
                                   std::int64_t truncation = 10'000);

struct NormalityTest {
  double statistic = 0.0;
  double p_value = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

/// Jarque-Bera test (chi-square with 2 degrees of freedom).
NormalityTest jarque_bera(std::span<const double> x);

/// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

double sample_mean(std::span<const double> x);
double sample_variance(std::span<const double> x);

}  // namespace corrwalk
