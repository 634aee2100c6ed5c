#include "corrwalk/p_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corrwalk {

std::string_view to_string(InfeasiblePolicy policy) {
  switch (policy) {
    case InfeasiblePolicy::resample:
      return "resample";
    case InfeasiblePolicy::clamp_to_half:
      return "clamp";
    case InfeasiblePolicy::error:
      return "error";
  }
  return "unknown";
}

std::optional<InfeasiblePolicy> parse_infeasible_policy(std::string_view text) {
  if (text == "resample") return InfeasiblePolicy::resample;
  if (text == "clamp" || text == "clamp-to-half") return InfeasiblePolicy::clamp_to_half;
  if (text == "error") return InfeasiblePolicy::error;
  return std::nullopt;
}

double target_from_uniform(double u, const HurstModel& model) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("target_from_uniform: u must lie in [0, 1), got " + std::to_string(u));
  }
  const double exponent = 1.0 / (2.0 - 2.0 * model.hurst());
  return -std::expm1(exponent * std::log1p(-u));
}

double feasibility_threshold(const HurstModel& model, double sigma_max) {
  return -std::expm1((2.0 - 2.0 * model.hurst()) * std::log1p(-sigma_max));
}

double solve_p(double target, const HurstModel& model) {
  return solve_p(target, model, feasible_p_range(model, 1).sigma_max);
}

double solve_p(double target, const HurstModel& model, double sigma_max) {
  if (!(target >= 0.0)) throw DomainError("solve_p: target must be nonnegative");
  if (target > sigma_max) throw InfeasibleTargetError(target, sigma_max);
  if (target == sigma_max) return 0.5;

  auto sigma = [&](double p) { return n_step_correlation(p, model, 1); };
  if (sigma(kSolveFloor) >= target) return kSolveFloor;

  // sigma1 is increasing on (0, 1/2]; bisect in log p so tiny p resolve to
  // full relative precision.
  double lo = std::log(kSolveFloor);
  double hi = std::log(0.5);
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (sigma(std::exp(mid)) < target ? lo : hi) = mid;
  }
  const double p = std::min(0.5, std::exp(0.5 * (lo + hi)));
  const double residual = std::fabs(sigma(p) - target);
  if (!(residual <= kRootTolerance)) {
    throw NumericError("solve_p: bracket failure, residual " + std::to_string(residual) +
                       " at target " + std::to_string(target));
  }
  return p;
}

double density_p(double p, const HurstModel& model) {
  if (!(p > 0.0 && p <= 0.5)) {
    throw DomainError("density_p: p must lie in the branch (0, 1/2], got " + std::to_string(p));
  }
  const double h = model.hurst();
  auto sigma = [&](double x) { return n_step_correlation(x, model, 1); };
  const double s = sigma(p);
  if (!(s < 1.0)) throw DomainError("density_p: sigma1(p) must be below 1");

  // Step 1e-6, shrunk near p = 0 so both probes stay inside (0, 1).
  const double step = std::min(1e-6, 0.25 * p);
  auto central = [&](double dx) { return (sigma(p + dx) - sigma(p - dx)) / (2.0 * dx); };
  const double dsigma = (4.0 * central(0.5 * step) - central(step)) / 3.0;
  const double dv = 0.5 * dsigma;
  const double v = 0.5 * (s + 1.0);
  return (1.0 - h) * std::exp2(3.0 - 2.0 * h) * std::pow(1.0 - v, 1.0 - 2.0 * h) * dv;
}

PSampler::PSampler(const HurstModel& model, InfeasiblePolicy policy)
    : model_(model), policy_(policy), sigma_max_(0.0), u_max_(0.0) {
  if (!model.is_brownian()) {
    sigma_max_ = feasible_p_range(model, 1).sigma_max;
    u_max_ = feasibility_threshold(model, sigma_max_);
  }
}

std::optional<PSample> PSampler::from_uniform(double u) const {
  if (model_.is_brownian()) {
    // Independent walk: no persistence mixture to sample.
    return PSample{u, 0.0, 0.5, 0.5, 0, false, false};
  }
  PSample s;
  s.u = u;
  s.target = target_from_uniform(u, model_);
  if (s.target <= sigma_max_) {
    s.p = solve_p(s.target, model_, sigma_max_);
    s.at_floor = s.p == kSolveFloor;
    s.rho = persistence_from_p(s.p, model_);
    return s;
  }
  switch (policy_) {
    case InfeasiblePolicy::resample:
      return std::nullopt;
    case InfeasiblePolicy::clamp_to_half:
      s.p = 0.5;
      s.rho = persistence_from_p(0.5, model_);
      s.clamped = true;
      return s;
    case InfeasiblePolicy::error:
      break;
  }
  throw InfeasibleUniformError(u, sigma_max_);
}

}  // namespace corrwalk
