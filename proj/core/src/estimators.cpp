#include "corrwalk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "corrwalk/errors.hpp"

namespace corrwalk {

namespace {

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

double second_difference_energy(std::span<const double> path, std::size_t dilation) {
  const std::size_t terms = path.size() - 2 * dilation;
  double sum = 0.0;
  for (std::size_t k = 0; k < terms; ++k) {
    const double d = path[k + 2 * dilation] - 2.0 * path[k + dilation] + path[k];
    sum += d * d;
  }
  return sum / static_cast<double>(terms);
}

}  // namespace

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw InsufficientDataError("sample_mean: empty input");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw InsufficientDataError("sample_variance: need at least 2 values");
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

std::vector<double> path_increments(std::span<const double> path) {
  std::vector<double> out;
  if (path.size() < 2) return out;
  out.resize(path.size() - 1);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) out[k] = path[k + 1] - path[k];
  return out;
}

double dsod_hurst(std::span<const double> path) {
  if (path.size() < 16) {
    throw InsufficientDataError("dsod_hurst: need at least 16 samples, got " +
                                std::to_string(path.size()));
  }
  const double v1 = second_difference_energy(path, 1);
  const double v2 = second_difference_energy(path, 2);
  const double floor = 1e-24 * std::max(1.0, max_abs(path) * max_abs(path));
  if (!(v1 > floor) || !(v2 > 0.0)) {
    throw NumericError("dsod_hurst: degenerate path (no second-difference energy)");
  }
  return 0.5 * std::log2(v2 / v1);
}

double aggregated_variance_hurst(std::span<const double> path) {
  if (path.size() < 256) {
    throw InsufficientDataError("aggregated_variance_hurst: need at least 256 samples, got " +
                                std::to_string(path.size()));
  }
  const std::vector<double> inc = path_increments(path);
  const std::size_t n = inc.size();
  const double scale = max_abs(inc);
  const double zero = (1e-12 * scale) * (1e-12 * scale);

  std::vector<double> log_m, log_var;
  bool all_zero = true;
  bool any_zero = false;
  std::vector<double> means;
  for (std::size_t m = 1; m <= n / 16; m *= 2) {
    const std::size_t blocks = n / m;
    means.assign(blocks, 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += inc[b * m + i];
      means[b] = s / static_cast<double>(m);
    }
    const double var = sample_variance(means);
    if (var <= zero) {
      any_zero = true;
      continue;
    }
    all_zero = false;
    log_m.push_back(std::log(static_cast<double>(m)));
    log_var.push_back(std::log(var));
  }
  // Constant increments: no variance at any scale, the fully persistent limit.
  if (all_zero) return 1.0;
  if (any_zero || log_m.size() < 2) {
    throw NumericError("aggregated_variance_hurst: degenerate block variances");
  }
  const double mx = sample_mean(log_m);
  const double my = sample_mean(log_var);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < log_m.size(); ++i) {
    sxy += (log_m[i] - mx) * (log_var[i] - my);
    sxx += (log_m[i] - mx) * (log_m[i] - mx);
  }
  return 1.0 + 0.5 * (sxy / sxx);
}

std::vector<double> empirical_acf(std::span<const double> x, std::int64_t max_lag) {
  if (max_lag < 1) throw DomainError("empirical_acf: max_lag must be >= 1");
  if (static_cast<std::int64_t>(x.size()) < 10 * max_lag) {
    throw InsufficientDataError("empirical_acf: need at least " + std::to_string(10 * max_lag) +
                                " samples, got " + std::to_string(x.size()));
  }
  const double m = sample_mean(x);
  const std::size_t n = x.size();
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  std::vector<double> out(static_cast<std::size_t>(max_lag), 0.0);
  if (c0 == 0.0) return out;
  for (std::int64_t h = 1; h <= max_lag; ++h) {
    double c = 0.0;
    for (std::size_t t = 0; t + static_cast<std::size_t>(h) < n; ++t) {
      c += (x[t] - m) * (x[t + static_cast<std::size_t>(h)] - m);
    }
    out[static_cast<std::size_t>(h - 1)] = c / c0;
  }
  return out;
}

EstimateReport estimate_report(std::span<const double> path, std::int64_t max_lag) {
  EstimateReport r;
  r.n_used = static_cast<std::int64_t>(path.size());
  r.h_dsod = dsod_hurst(path);
  if (path.size() >= 256) {
    try {
      r.h_aggvar = aggregated_variance_hurst(path);
    } catch (const NumericError& e) {
      r.notes.emplace_back(std::string("aggregated-variance estimate unavailable: ") + e.what());
    }
  } else {
    r.notes.emplace_back("aggregated-variance estimate needs at least 256 samples");
  }
  const std::vector<double> inc = path_increments(path);
  const std::int64_t lag =
      std::min<std::int64_t>(max_lag, static_cast<std::int64_t>(inc.size()) / 10);
  if (lag < max_lag) {
    r.notes.emplace_back("autocorrelations truncated to lag " + std::to_string(lag));
  }
  if (lag >= 1) r.acf = empirical_acf(inc, lag);
  return r;
}

MeanEstimate batch_means(std::span<const double> x, std::int64_t batches) {
  if (batches < 2 || static_cast<std::int64_t>(x.size()) < 2 * batches) {
    throw InsufficientDataError("batch_means: too few samples for the batch count");
  }
  const std::size_t len = x.size() / static_cast<std::size_t>(batches);
  std::vector<double> means(static_cast<std::size_t>(batches));
  for (std::size_t b = 0; b < means.size(); ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += x[b * len + i];
    means[b] = s / static_cast<double>(len);
  }
  MeanEstimate out;
  out.mean = sample_mean(means);
  out.standard_error = std::sqrt(sample_variance(means) / static_cast<double>(batches));
  return out;
}

double bartlett_acf_standard_error(const std::function<double(std::int64_t)>& acf,
                                   std::int64_t lag, std::int64_t n, std::int64_t truncation) {
  if (lag < 1 || n < 1) throw DomainError("bartlett_acf_standard_error: lag and n must be >= 1");
  auto r = [&](std::int64_t k) { return k == 0 ? 1.0 : acf(std::llabs(k)); };
  const double rh = r(lag);
  double sum = 0.0;
  for (std::int64_t k = 1; k <= truncation; ++k) {
    const double term = r(k + lag) + r(k - lag) - 2.0 * rh * r(k);
    sum += term * term;
    if (k > 4 * lag && std::fabs(term) < 1e-12) break;
  }
  return std::sqrt(sum / static_cast<double>(n));
}

NormalityTest jarque_bera(std::span<const double> x) {
  if (x.size() < 8) throw InsufficientDataError("jarque_bera: need at least 8 values");
  const double n = static_cast<double>(x.size());
  const double m = sample_mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  NormalityTest t;
  t.skewness = m3 / std::pow(m2, 1.5);
  t.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  t.statistic = n / 6.0 * (t.skewness * t.skewness + 0.25 * t.excess_kurtosis * t.excess_kurtosis);
  t.p_value = std::exp(-0.5 * t.statistic);
  return t;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InsufficientDataError("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace corrwalk
