#include "corrwalk/gauss_oracle.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "corrwalk/errors.hpp"
#include "corrwalk/link.hpp"
#include "corrwalk/special_functions.hpp"

namespace corrwalk {

namespace {

void check_dimension(std::int64_t n) {
  if (n < 1 || n > kMaxOracleSteps) {
    throw DomainError("gauss oracle: dimension must lie in [1, " +
                      std::to_string(kMaxOracleSteps) + "], got " + std::to_string(n));
  }
}

}  // namespace

Eigen::MatrixXd fgn_covariance_matrix(double hurst, std::int64_t n) {
  check_dimension(n);
  std::vector<double> acv(static_cast<std::size_t>(n));
  for (std::int64_t m = 0; m < n; ++m) acv[static_cast<std::size_t>(m)] = fgn_autocovariance(m, hurst);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = acv[static_cast<std::size_t>(std::abs(i - j))];
  }
  return c;
}

Eigen::MatrixXd fbm_covariance_matrix(double hurst, std::int64_t n) {
  check_dimension(n);
  Eigen::MatrixXd c(n, n);
  const double dn = static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      c(i, j) = fbm_covariance(static_cast<double>(i + 1) / dn, static_cast<double>(j + 1) / dn, hurst);
    }
  }
  return c;
}

FgnFactor::FgnFactor(double hurst, std::int64_t n) : hurst_(hurst), n_(n) {
  Eigen::MatrixXd cov = fgn_covariance_matrix(hurst, n);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov.diagonal().array() += 1e-12;
    llt.compute(cov);
    jittered_ = true;
    if (llt.info() != Eigen::Success) {
      throw NumericError("FgnFactor: Cholesky factorization failed for H=" +
                         std::to_string(hurst) + ", n=" + std::to_string(n) +
                         " after 1e-12 diagonal jitter");
    }
  }
  lower_ = llt.matrixL();
}

std::shared_ptr<const FgnFactor> FgnFactor::cached(double hurst, std::int64_t n) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint64_t, std::int64_t>, std::shared_ptr<const FgnFactor>> cache;
  std::uint64_t bits;
  std::memcpy(&bits, &hurst, sizeof bits);
  const auto key = std::make_pair(bits, n);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const FgnFactor>(hurst, n);
  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(built)).first->second;
}

Eigen::VectorXd FgnFactor::sample(Rng& rng) const {
  Eigen::VectorXd z(n_);
  for (Eigen::Index i = 0; i < n_; ++i) z(i) = rng.normal();
  return lower_.triangularView<Eigen::Lower>() * z;
}

std::vector<double> cholesky_fbm(double hurst, std::int64_t steps, std::uint64_t seed) {
  return cholesky_fbm(*FgnFactor::cached(hurst, steps), seed);
}

std::vector<double> cholesky_fbm(const FgnFactor& factor, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::VectorXd noise = factor.sample(rng);
  const double scale = std::pow(static_cast<double>(factor.size()), -factor.hurst());
  std::vector<double> path(static_cast<std::size_t>(factor.size() + 1), 0.0);
  double level = 0.0;
  for (Eigen::Index k = 0; k < noise.size(); ++k) {
    level += noise(k);
    path[static_cast<std::size_t>(k + 1)] = level * scale;
  }
  return path;
}

Trajectory dichotomized_gaussian_walk(const HurstModel& model, double p, std::int64_t steps,
                                      std::uint64_t seed) {
  return dichotomized_gaussian_walk(*FgnFactor::cached(model.hurst(), steps), model, p, seed);
}

Trajectory dichotomized_gaussian_walk(const FgnFactor& factor, const HurstModel& model,
                                      double p, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("dichotomized_gaussian_walk: p must lie in (0, 1)");
  if (factor.hurst() != model.hurst()) {
    throw DomainError("dichotomized_gaussian_walk: factor and model disagree on H");
  }
  const LinkPoint link = link_point(p, model);
  Trajectory out;
  out.psample.p = p;
  out.psample.rho = link.rho;
  out.psample.target = link.sigma1;

  Rng rng(seed);
  const Eigen::VectorXd z = factor.sample(rng);
  const double threshold = std_normal_quantile(p);
  out.increments.resize(static_cast<std::size_t>(z.size()));
  out.levels.resize(static_cast<std::size_t>(z.size()));
  std::int64_t level = 0;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const std::int8_t y = z(k) <= threshold ? 1 : -1;
    level += y;
    out.increments[static_cast<std::size_t>(k)] = y;
    out.levels[static_cast<std::size_t>(k)] = level;
  }
  return out;
}

}  // namespace corrwalk
