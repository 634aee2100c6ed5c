#include "corrwalk/link.hpp"

#include <cmath>
#include <string>

#include "corrwalk/errors.hpp"
#include "corrwalk/special_functions.hpp"

namespace corrwalk {

namespace {

void require_probability(double p, const char* where) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(where) + ": p must lie in (0, 1), got " + std::to_string(p));
  }
}

void require_correlation(double delta, const char* where) {
  if (!(std::fabs(delta) < 1.0)) {
    throw DomainError(std::string(where) + ": correlation must satisfy |delta| < 1");
  }
}

// Phi2(z(q), z(q), delta) for the lower-side margin q = min(p, 1 - p).
// Both the phi coefficient and the persistence are symmetric under
// p -> 1 - p, so working with q keeps the small-probability side exact.
double lower_side_orthant(double q, double delta) {
  const double z = std_normal_quantile(q);
  return bvn_cdf(z, z, delta);
}

double lower_side(double p) { return p <= 0.5 ? p : 1.0 - p; }

}  // namespace

double phi_from_tetrachoric(double p, double delta) {
  require_probability(p, "phi_from_tetrachoric");
  require_correlation(delta, "phi_from_tetrachoric");
  if (delta == 0.0) return 0.0;
  const double q = lower_side(p);
  return (lower_side_orthant(q, delta) - q * q) / (q * (1.0 - q));
}

double phi_from_tetrachoric(double p_j, double p_k, double delta) {
  require_probability(p_j, "phi_from_tetrachoric");
  require_probability(p_k, "phi_from_tetrachoric");
  require_correlation(delta, "phi_from_tetrachoric");
  const double joint =
      bvn_cdf(std_normal_quantile(p_j), std_normal_quantile(p_k), delta);
  return (joint - p_j * p_k) / std::sqrt(p_j * (1.0 - p_j) * p_k * (1.0 - p_k));
}

double persistence_from_p(double p, const HurstModel& model) {
  require_probability(p, "persistence_from_p");
  const double q = lower_side(p);
  if (model.delta1() == 0.0) return 2.0 * q * q - 2.0 * q + 1.0;
  return 2.0 * lower_side_orthant(q, model.delta1()) - 2.0 * q + 1.0;
}

double n_step_correlation(double p, const HurstModel& model, std::int64_t n) {
  require_probability(p, "n_step_correlation");
  if (n < 1) throw DomainError("n_step_correlation: n must be >= 1");
  if (n == 1) return phi_from_tetrachoric(p, model.delta1());
  const double q = lower_side(p);
  const double orthant =
      model.delta1() == 0.0 ? q * q : lower_side_orthant(q, model.delta1());
  // With a = 4 (q - Phi2) and b = 4 q (1 - q):
  //   (2 rho - 1)^n - (2q - 1)^2 = (1 - a)^n - (1 - b) = b + expm1(n log1p(-a)).
  const double a = 4.0 * (q - orthant);
  const double b = 4.0 * q * (1.0 - q);
  return (b + std::expm1(static_cast<double>(n) * std::log1p(-a))) / b;
}

LinkPoint link_point(double p, const HurstModel& model) {
  return LinkPoint{p, persistence_from_p(p, model), n_step_correlation(p, model, 1)};
}

FeasibleRange feasible_p_range(const HurstModel& model, std::int64_t n) {
  if (n < 1) throw DomainError("feasible_p_range: n must be >= 1");

  constexpr int kGrid = 2001;
  constexpr double kLogitSpan = 27.6;  // p from ~1e-12 to 1 - 1e-12
  auto p_of = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  auto value = [&](double p) { return n_step_correlation(p, model, n); };
  auto feasible = [&](double p) {
    const double v = value(p);
    return v >= 0.0 && v <= 1.0;
  };
  auto refine_edge = [&](double t_in, double t_out) {
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (t_in + t_out);
      (feasible(p_of(mid)) ? t_in : t_out) = mid;
    }
    return p_of(t_in);
  };

  std::vector<double> ts(kGrid), vals(kGrid);
  std::vector<bool> ok(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    ts[i] = -kLogitSpan + 2.0 * kLogitSpan * i / (kGrid - 1);
    vals[i] = value(p_of(ts[i]));
    ok[i] = vals[i] >= 0.0 && vals[i] <= 1.0;
  }

  FeasibleRange out;
  int best = -1;
  for (int i = 0; i < kGrid;) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < kGrid && ok[j + 1]) ++j;
    PInterval iv;
    iv.lower = i == 0 ? 0.0 : refine_edge(ts[i], ts[i - 1]);
    iv.upper = j == kGrid - 1 ? 1.0 : refine_edge(ts[j], ts[j + 1]);
    out.intervals.push_back(iv);
    for (int k = i; k <= j; ++k) {
      if (best < 0 || vals[k] > vals[best]) best = k;
    }
    i = j + 1;
  }
  if (out.intervals.empty()) {
    throw NumericError("feasible_p_range: no p in (0, 1) yields a correlation in [0, 1]");
  }
  out.p_lower = out.intervals.front().lower;
  out.p_upper = out.intervals.back().upper;

  // Golden-section refinement of the maximum between the neighbours of the
  // best grid point, restricted to feasible values.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = p_of(ts[std::max(best - 1, 0)]);
  double b = p_of(ts[std::min(best + 1, kGrid - 1)]);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = value(c), fd = value(d);
  for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = value(d);
    }
  }
  double p_star = 0.5 * (a + b);
  double s_star = value(p_star);
  if (vals[best] > s_star) {
    p_star = p_of(ts[best]);
    s_star = vals[best];
  }
  // The median is the analytic candidate for n = 1; keep it if it is at
  // least as large as the numerical optimum.
  const double s_half = value(0.5);
  if (s_half >= s_star && s_half <= 1.0) {
    p_star = 0.5;
    s_star = s_half;
  }
  out.p_at_max = p_star;
  out.sigma_max = s_star;
  return out;
}

}  // namespace corrwalk
