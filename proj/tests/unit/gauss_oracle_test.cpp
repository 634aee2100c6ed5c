#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "corrwalk/errors.hpp"
#include "corrwalk/fgn.hpp"
#include "corrwalk/gauss_oracle.hpp"
#include "corrwalk/link.hpp"
#include "oracles.hpp"

namespace cw = corrwalk;

namespace {

// Mean and standard error of iid observations.
struct Summary {
  double mean = 0.0;
  double se = 0.0;
};

Summary summarize(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double s = 0.0, ss = 0.0;
  for (double v : x) s += v;
  const double m = s / n;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace

TEST(CovarianceMatrix, FgnToeplitz) {
  const auto c = cw::fgn_covariance_matrix(0.7, 32);
  ASSERT_EQ(c.rows(), 32);
  for (int i = 0; i < 32; ++i) {
    EXPECT_EQ(c(i, i), 1.0);
    for (int j = 0; j < 32; ++j) {
      ASSERT_EQ(c(i, j), c(j, i));
      ASSERT_EQ(c(i, j), cw::fgn_autocovariance(std::abs(i - j), 0.7));
    }
  }
}

TEST(CovarianceMatrix, FbmOnUnitGrid) {
  const auto c = cw::fbm_covariance_matrix(0.8, 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      ASSERT_NEAR(c(i, j), cw::fbm_covariance((i + 1) / 10.0, (j + 1) / 10.0, 0.8), 1e-15);
    }
  }
  EXPECT_NEAR(c(9, 9), 1.0, 1e-15);
}

TEST(CovarianceMatrix, DimensionBounds) {
  EXPECT_THROW(cw::fgn_covariance_matrix(0.7, 0), cw::DomainError);
  EXPECT_THROW(cw::fgn_covariance_matrix(0.7, cw::kMaxOracleSteps + 1), cw::DomainError);
  EXPECT_THROW(cw::FgnFactor(0.7, cw::kMaxOracleSteps + 1), cw::DomainError);
  EXPECT_THROW(cw::cholesky_fbm(0.7, 5000, 1), cw::DomainError);
}

TEST(FgnFactor, ReconstructsCovariance) {
  for (double h : {0.3, 0.5, 0.7, 0.95}) {
    const cw::FgnFactor f(h, 128);
    const Eigen::MatrixXd l = f.lower();
    const Eigen::MatrixXd diff = l * l.transpose() - cw::fgn_covariance_matrix(h, 128);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12) << h;
    EXPECT_TRUE(l.isLowerTriangular());
  }
}

TEST(FgnFactor, CacheSharesFactor) {
  const auto a = cw::FgnFactor::cached(0.7, 64);
  const auto b = cw::FgnFactor::cached(0.7, 64);
  const auto c = cw::FgnFactor::cached(0.71, 64);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_NE(a.get(), c.get());
  EXPECT_EQ(a->size(), 64);
  EXPECT_EQ(a->hurst(), 0.7);
}

TEST(CholeskyFbm, ShapeAndDeterminism) {
  const auto a = cw::cholesky_fbm(0.7, 100, 3);
  ASSERT_EQ(a.size(), 101u);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a, cw::cholesky_fbm(0.7, 100, 3));
  EXPECT_NE(a, cw::cholesky_fbm(0.7, 100, 4));
}

TEST(CholeskyFbm, BrownianIncrementsUncorrelated) {
  const auto f = cw::FgnFactor::cached(0.5, 2);
  std::vector<double> prod, sq;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    const auto x = cw::cholesky_fbm(*f, s);
    const double d1 = x[1] - x[0], d2 = x[2] - x[1];
    prod.push_back(d1 * d2 * 2.0);
    sq.push_back(d1 * d1 * 2.0);
  }
  const Summary c = summarize(prod);
  EXPECT_NEAR(c.mean, 0.0, 3.0 * c.se);
  const Summary v = summarize(sq);
  EXPECT_NEAR(v.mean, 1.0, 3.0 * v.se);
}

TEST(CholeskyFbm, TwoPointCovariance) {
  for (double h : {0.6, 0.75, 0.9}) {
    const auto f = cw::FgnFactor::cached(h, 2);
    std::vector<double> cross, end;
    for (std::uint64_t s = 0; s < 100000; ++s) {
      const auto x = cw::cholesky_fbm(*f, 1'000'000 + s);
      cross.push_back(x[1] * x[2]);
      end.push_back(x[2] * x[2]);
    }
    const Summary c = summarize(cross);
    EXPECT_NEAR(c.mean, cw::fbm_covariance(0.5, 1.0, h), 3.0 * c.se) << h;
    const Summary v = summarize(end);
    EXPECT_NEAR(v.mean, 1.0, 3.0 * v.se) << h;
  }
}

TEST(CholeskyFbm, CovarianceMatrixEntrywise) {
  const double h = 0.7;
  const int n = 16;
  const int draws = 100000;
  const auto f = cw::FgnFactor::cached(h, n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n), sum2 = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < draws; ++s) {
    const auto x = cw::cholesky_fbm(*f, static_cast<std::uint64_t>(s));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double v = x[i + 1] * x[j + 1];
        sum(i, j) += v;
        sum2(i, j) += v * v;
      }
    }
  }
  const auto ref = cw::fbm_covariance_matrix(h, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double m = sum(i, j) / draws;
      const double se = std::sqrt((sum2(i, j) / draws - m * m) / (draws - 1));
      ASSERT_NEAR(m, ref(i, j), 4.0 * se) << i << ',' << j;
    }
  }
}

TEST(DichotomizedWalk, MarginalAndLinkCorrelations) {
  const cw::HurstModel m(0.7);
  const double p = 0.3;
  const double mu = 2 * p - 1;
  const auto f = cw::FgnFactor::cached(0.7, 1024);
  std::vector<double> ones, lag1, lag2;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto t = cw::dichotomized_gaussian_walk(*f, m, p, s);
    ASSERT_EQ(t.increments.size(), 1024u);
    double up = 0, c1 = 0, c2 = 0;
    for (std::size_t k = 0; k < t.increments.size(); ++k) {
      up += t.increments[k] == 1;
      if (k + 1 < t.increments.size()) c1 += t.increments[k] * t.increments[k + 1];
      if (k + 2 < t.increments.size()) c2 += t.increments[k] * t.increments[k + 2];
      if (k > 0) ASSERT_EQ(t.levels[k] - t.levels[k - 1], t.increments[k]);
    }
    ones.push_back(up / 1024.0);
    lag1.push_back((c1 / 1023.0 - mu * mu) / (1 - mu * mu));
    lag2.push_back((c2 / 1022.0 - mu * mu) / (1 - mu * mu));
  }
  const Summary marginal = summarize(ones);
  EXPECT_NEAR(marginal.mean, p, 3.0 * marginal.se);
  const Summary r1 = summarize(lag1);
  EXPECT_NEAR(r1.mean, cw::n_step_correlation(p, m, 1), 4.0 * r1.se);
  const Summary r2 = summarize(lag2);
  const double exact2 = cw::phi_from_tetrachoric(p, cw::fgn_autocovariance(2, 0.7));
  EXPECT_NEAR(r2.mean, exact2, 4.0 * r2.se);
  RecordProperty("lag2_gap_to_nstep", std::to_string(r2.mean - cw::n_step_correlation(p, m, 2)));
}

TEST(DichotomizedWalk, Deterministic) {
  const cw::HurstModel m(0.8);
  const auto a = cw::dichotomized_gaussian_walk(m, 0.4, 200, 9);
  const auto b = cw::dichotomized_gaussian_walk(m, 0.4, 200, 9);
  EXPECT_EQ(a.increments, b.increments);
  EXPECT_EQ(a.psample.p, 0.4);
  EXPECT_THROW(cw::dichotomized_gaussian_walk(m, 0.0, 200, 9), cw::DomainError);
  EXPECT_THROW(cw::dichotomized_gaussian_walk(m, 0.4, 5000, 9), cw::DomainError);
}
