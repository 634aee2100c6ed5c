#pragma once

#include <cstdint>
#include <vector>

#include "corrwalk/fgn.hpp"

namespace corrwalk {

/// A marginal probability together with the persistence and lag-1 phi
/// coefficient it induces for a given Hurst model.
struct LinkPoint {
  double p;
  double rho;
  double sigma1;
};

/// Phi coefficient of two equal-margin (p) dichotomized standard normals
/// with latent (tetrachoric) correlation delta:
/// (Phi2(z(p), z(p), delta) - p^2) / (p (1 - p)).
/// Evaluated on the p <= 1/2 side, the other side following by reflection.
double phi_from_tetrachoric(double p, double delta);

/// Phi coefficient for unequal margins; diagnostic use only.
double phi_from_tetrachoric(double p_j, double p_k, double delta);

/// Persistence rho(p) = 2 Phi2(z(p), z(p), delta1) - 2p + 1.
double persistence_from_p(double p, const HurstModel& model);

/// The n-step correlation ((2 rho - 1)^n - (2p - 1)^2) / (4 p (1 - p)).
/// May be negative for n >= 2; callers gate on feasible_p_range.
double n_step_correlation(double p, const HurstModel& model, std::int64_t n);

LinkPoint link_point(double p, const HurstModel& model);

struct PInterval {
  double lower;
  double upper;
};

struct FeasibleRange {
  /// Maximal p-intervals on which 0 <= n_step_correlation <= 1. An endpoint
  /// reported as 0 or 1 means the interval is open there.
  std::vector<PInterval> intervals;
  double p_lower = 0.0;
  double p_upper = 1.0;
  double sigma_max = 0.0;
  double p_at_max = 0.5;
};

/// Scans p over (0, 1) on a logit grid, refines interval endpoints by
/// bisection and the maximum by golden-section search. Throws NumericError
/// if no feasible p exists.
FeasibleRange feasible_p_range(const HurstModel& model, std::int64_t n = 1);

}  // namespace corrwalk
