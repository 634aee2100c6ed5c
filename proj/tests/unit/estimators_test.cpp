#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "corrwalk/errors.hpp"
#include "corrwalk/estimators.hpp"
#include "corrwalk/gauss_oracle.hpp"
#include "corrwalk/p_sampler.hpp"
#include "corrwalk/rng.hpp"
#include "corrwalk/walk.hpp"
#include "oracles.hpp"

namespace cw = corrwalk;

namespace {

std::vector<double> gaussian_walk(std::size_t n, std::uint64_t seed) {
  cw::Rng rng(seed);
  std::vector<double> path(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) path[k] = path[k - 1] + rng.normal();
  return path;
}

double mean_estimate(double h, double (*estimator)(std::span<const double>)) {
  const auto f = cw::FgnFactor::cached(h, 4096);
  double s = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) s += estimator(cw::cholesky_fbm(*f, seed));
  return s / 30.0;
}

double mean_estimate_brownian(double (*estimator)(std::span<const double>)) {
  double s = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) s += estimator(gaussian_walk(4096, seed));
  return s / 30.0;
}

}  // namespace

TEST(Dsod, LinearPathIsDegenerate) {
  std::vector<double> line(100);
  std::iota(line.begin(), line.end(), 0.0);
  EXPECT_THROW(cw::dsod_hurst(line), cw::NumericError);
  EXPECT_THROW(cw::dsod_hurst(std::vector<double>(50, 3.0)), cw::NumericError);
}

TEST(Dsod, TooShort) {
  EXPECT_THROW(cw::dsod_hurst(std::vector<double>(15, 1.0)), cw::InsufficientDataError);
}

TEST(Dsod, AffineInvariant) {
  const auto x = cw::cholesky_fbm(0.7, 512, 4);
  const double h = cw::dsod_hurst(x);
  for (auto [a, b] : {std::pair{3.0, 2.0}, {-1.0, -0.5}, {10.0, 0.1}}) {
    std::vector<double> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = a + b * x[k];
    EXPECT_NEAR(cw::dsod_hurst(y), h, 1e-12) << a << ' ' << b;
  }
}

TEST(Dsod, ExactQuadraticFormRatio) {
  const std::vector<double> x{0, 1, 3, 2, 5, 4, 4, 7, 6, 9, 8, 8, 10, 12, 11, 13, 15};
  double v1 = 0, v2 = 0;
  for (std::size_t k = 0; k + 2 < x.size(); ++k) v1 += std::pow(x[k + 2] - 2 * x[k + 1] + x[k], 2);
  for (std::size_t k = 0; k + 4 < x.size(); ++k) v2 += std::pow(x[k + 4] - 2 * x[k + 2] + x[k], 2);
  v1 /= static_cast<double>(x.size() - 2);
  v2 /= static_cast<double>(x.size() - 4);
  EXPECT_NEAR(cw::dsod_hurst(x), 0.5 * std::log2(v2 / v1), 1e-14);
}

TEST(Dsod, CholeskyPathsAtSevenTenths) {
  EXPECT_NEAR(mean_estimate(0.7, cw::dsod_hurst), 0.7, 0.03);
}

TEST(Dsod, BrownianPaths) { EXPECT_NEAR(mean_estimate_brownian(cw::dsod_hurst), 0.5, 0.03); }

TEST(AggregatedVariance, BrownianPaths) {
  EXPECT_NEAR(mean_estimate_brownian(cw::aggregated_variance_hurst), 0.5, 0.05);
}

TEST(AggregatedVariance, CholeskyPathsStronglyPersistent) {
  EXPECT_NEAR(mean_estimate(0.85, cw::aggregated_variance_hurst), 0.85, 0.05);
}

TEST(AggregatedVariance, ConstantIncrementsGiveOne) {
  std::vector<double> line(1000);
  for (std::size_t k = 0; k < line.size(); ++k) line[k] = 0.25 * static_cast<double>(k);
  EXPECT_EQ(cw::aggregated_variance_hurst(line), 1.0);
}

TEST(AggregatedVariance, TooShort) {
  EXPECT_THROW(cw::aggregated_variance_hurst(std::vector<double>(255, 0.0)),
               cw::InsufficientDataError);
}

TEST(Estimators, BiasAcrossHurstGrid) {
  for (int i = 0; i < 8; ++i) {
    const double h = 0.55 + 0.05 * i;
    const double dsod = mean_estimate(h, cw::dsod_hurst);
    const double agg = mean_estimate(h, cw::aggregated_variance_hurst);
    EXPECT_LE(std::fabs(dsod - h), 0.03) << "dsod at " << h << " -> " << dsod;
    EXPECT_LE(std::fabs(agg - h), 0.05) << "aggregated variance at " << h << " -> " << agg;
  }
}

namespace {

// Plug-in value of the regression with exact expected block variances,
// E[S_m^2] = nb/(nb-1) (m^{2H-2} - N^{2H-2}) for nb = N/m blocks of unit fGn.
double aggregated_variance_expectation(double h, std::size_t n) {
  std::vector<double> lx, ly;
  for (std::size_t m = 1; m <= n / 16; m *= 2) {
    const double nb = static_cast<double>(n / m);
    const double v = nb / (nb - 1.0) *
                     (std::pow(double(m), 2 * h - 2) - std::pow(double(n), 2 * h - 2));
    lx.push_back(std::log(double(m)));
    ly.push_back(std::log(v));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return 1.0 + 0.5 * sxy / sxx;
}

}  // namespace

TEST(AggregatedVariance, FiniteSampleBiasIsStructural) {
  const double plug_in = aggregated_variance_expectation(0.9, 4096);
  EXPECT_LT(plug_in, 0.9 - 0.05);
  EXPECT_NEAR(mean_estimate(0.9, cw::aggregated_variance_hurst), plug_in, 0.02);
}

TEST(EmpiricalAcf, WhiteNoise) {
  cw::Rng rng(8);
  std::vector<double> x(1'000'000);
  for (double& v : x) v = rng.bernoulli(0.5) ? 1.0 : -1.0;
  const auto r = cw::empirical_acf(x, 10);
  ASSERT_EQ(r.size(), 10u);
  for (double v : r) EXPECT_NEAR(v, 0.0, 4.0 / std::sqrt(1e6));
}

TEST(EmpiricalAcf, FixedPersistenceChain) {
  const cw::HurstModel m(0.7);
  cw::PSample ps;
  ps.p = 0.5;
  ps.rho = 0.75;
  cw::WalkStepper st(cw::WalkMode::enriquez, ps, m);
  cw::Rng rng(9);
  std::vector<double> x(1'000'000);
  for (double& v : x) v = st.step(rng) ? 1.0 : -1.0;
  const auto r = cw::empirical_acf(x, 5);
  for (std::int64_t n = 1; n <= 5; ++n) {
    const double se = cw::bartlett_acf_standard_error(
        [](std::int64_t k) { return std::pow(0.5, double(k)); }, n, 1'000'000);
    EXPECT_NEAR(r[n - 1], std::pow(0.5, double(n)), 4.0 * se) << n;
  }
}

TEST(EmpiricalAcf, ConstantSeriesAndErrors) {
  EXPECT_EQ(cw::empirical_acf(std::vector<double>(40, 2.0), 3), std::vector<double>(3, 0.0));
  EXPECT_THROW(cw::empirical_acf(std::vector<double>(29, 0.0), 3), cw::InsufficientDataError);
  EXPECT_THROW(cw::empirical_acf(std::vector<double>(29, 0.0), 0), cw::DomainError);
}

TEST(EmpiricalAcf, BiasedNormalization) {
  const std::vector<double> x{1, -1, 1, -1, 1, -1, 1, -1, 1, -1};
  const auto r = cw::empirical_acf(x, 1);
  EXPECT_NEAR(r[0], -0.9, 1e-14);
}

TEST(EstimateReport, ShortPathNotes) {
  const auto x = cw::cholesky_fbm(0.7, 63, 1);
  const auto r = cw::estimate_report(x, 10);
  EXPECT_EQ(r.n_used, 64);
  EXPECT_FALSE(r.h_aggvar.has_value());
  EXPECT_EQ(r.acf.size(), 6u);
  EXPECT_EQ(r.notes.size(), 2u);
  EXPECT_TRUE(std::isfinite(r.h_dsod));
}

TEST(EstimateReport, FullPath) {
  const auto x = cw::cholesky_fbm(0.8, 2048, 2);
  const auto r = cw::estimate_report(x, 10);
  ASSERT_TRUE(r.h_aggvar.has_value());
  EXPECT_TRUE(r.notes.empty());
  EXPECT_EQ(r.acf.size(), 10u);
  for (double v : r.acf) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_EQ(r.h_dsod, cw::dsod_hurst(x));
}

TEST(Helpers, MeanAndVariance) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_EQ(cw::sample_mean(x), 2.5);
  EXPECT_NEAR(cw::sample_variance(x), 5.0 / 3.0, 1e-15);
  EXPECT_THROW(cw::sample_mean(std::vector<double>{}), cw::InsufficientDataError);
  EXPECT_THROW(cw::sample_variance(std::vector<double>{1.0}), cw::InsufficientDataError);
}

TEST(Helpers, BatchMeans) {
  std::vector<double> x(1000);
  std::iota(x.begin(), x.end(), 0.0);
  const auto b = cw::batch_means(x, 10);
  EXPECT_NEAR(b.mean, 499.5, 1e-12);
  // Batch means 49.5, 149.5, ...: sd = 100 sqrt(55/6), se = sd / sqrt(10).
  EXPECT_NEAR(b.standard_error, 100.0 * std::sqrt(55.0 / 6.0) / std::sqrt(10.0), 1e-9);
  EXPECT_THROW(cw::batch_means(std::vector<double>(5, 1.0), 10), cw::InsufficientDataError);
}

TEST(Helpers, BartlettStandardError) {
  auto zero = [](std::int64_t) { return 0.0; };
  EXPECT_NEAR(cw::bartlett_acf_standard_error(zero, 3, 100), 0.1, 1e-15);
  const double phi = 0.6;
  auto geometric = [phi](std::int64_t k) { return std::pow(phi, double(k)); };
  for (std::int64_t h : {1, 2, 5}) {
    const double p2 = phi * phi, p2h = std::pow(p2, double(h));
    const double closed = (1 + p2) * (1 - p2h) / (1 - p2) - 2.0 * h * p2h;
    EXPECT_NEAR(cw::bartlett_acf_standard_error(geometric, h, 1000), std::sqrt(closed / 1000.0),
                1e-10)
        << h;
  }
}

TEST(Helpers, JarqueBera) {
  cw::Rng rng(10);
  std::vector<double> normal(10000), expo(10000);
  for (double& v : normal) v = rng.normal();
  for (double& v : expo) v = -std::log(1.0 - rng.uniform());
  const auto a = cw::jarque_bera(normal);
  EXPECT_GT(a.p_value, 0.01);
  EXPECT_NEAR(a.skewness, 0.0, 0.1);
  const auto b = cw::jarque_bera(expo);
  EXPECT_LT(b.p_value, 1e-10);
  EXPECT_NEAR(b.skewness, 2.0, 0.3);
  EXPECT_NEAR(b.excess_kurtosis, 6.0, 2.0);
}

TEST(Helpers, KsDistance) {
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_NEAR(cw::ks_distance({0.5}, uniform), 0.5, 1e-15);
  EXPECT_NEAR(cw::ks_distance({0.25, 0.75}, uniform), 0.25, 1e-15);
  cw::Rng rng(11);
  std::vector<double> u(100000);
  for (double& v : u) v = rng.uniform();
  EXPECT_LT(cw::ks_distance(u, uniform), 1.63 / std::sqrt(1e5));
}

TEST(Helpers, PathIncrements) {
  EXPECT_EQ(cw::path_increments(std::vector<double>{0, 1, 3, 2}), (std::vector<double>{1, 2, -1}));
  EXPECT_TRUE(cw::path_increments(std::vector<double>{4}).empty());
}
