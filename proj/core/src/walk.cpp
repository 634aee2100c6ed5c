#include "corrwalk/walk.hpp"

#include <cmath>

namespace corrwalk {

std::string_view to_string(WalkMode mode) {
  switch (mode) {
    case WalkMode::paper:
      return "paper";
    case WalkMode::matched:
      return "matched";
    case WalkMode::enriquez:
      return "enriquez";
  }
  return "unknown";
}

std::optional<WalkMode> parse_walk_mode(std::string_view text) {
  if (text == "paper") return WalkMode::paper;
  if (text == "matched") return WalkMode::matched;
  if (text == "enriquez") return WalkMode::enriquez;
  return std::nullopt;
}

WalkStepper::WalkStepper(WalkMode mode, const PSample& psample, const HurstModel& model)
    : verbatim_(false), p_(psample.p), rho_(psample.rho) {
  if (model.is_brownian()) {
    p_ = 0.5;
    rho_ = 0.0;
    after_one_ = after_zero_ = marginal_ = 0.5;
    return;
  }
  switch (mode) {
    case WalkMode::paper:
      verbatim_ = true;
      marginal_ = p_;
      after_one_ = rho_ + (1.0 - rho_) * p_;
      after_zero_ = (1.0 - rho_) * p_;
      break;
    case WalkMode::matched: {
      const double sigma = n_step_correlation(p_, model, 1);
      marginal_ = p_;
      after_one_ = p_ + (1.0 - p_) * sigma;
      after_zero_ = p_ * (1.0 - sigma);
      break;
    }
    case WalkMode::enriquez:
      p_ = 0.5;
      marginal_ = 0.5;
      after_one_ = rho_;
      after_zero_ = 1.0 - rho_;
      break;
  }
}

double enriquez_persistence(double u, const HurstModel& model) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("enriquez_persistence: u must lie in [0, 1)");
  const double exponent = 1.0 / (2.0 - 2.0 * model.hurst());
  return 1.0 - 0.5 * std::exp(exponent * std::log1p(-u));
}

Trajectory generate_trajectory(const WalkConfig& config, std::uint64_t seed) {
  return generate_trajectory(config, PSampler(config.model, config.policy), seed);
}

Trajectory generate_trajectory(const WalkConfig& config, const PSampler& sampler,
                               std::uint64_t seed) {
  if (config.steps < 1) throw DomainError("generate_trajectory: steps must be >= 1");
  Rng rng(seed);
  Trajectory out;
  out.psample = draw_walk_parameters(config.mode, sampler, rng);
  WalkStepper stepper(config.mode, out.psample, config.model);
  const auto n = static_cast<std::size_t>(config.steps);
  out.increments.resize(n);
  out.levels.resize(n);
  std::int64_t level = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::int8_t y = stepper.step(rng) ? 1 : -1;
    level += y;
    out.increments[k] = y;
    out.levels[k] = level;
  }
  return out;
}

double chain_lag_correlation(WalkMode mode, double value, const HurstModel& model,
                             std::int64_t n) {
  if (n < 0) throw DomainError("chain_lag_correlation: n must be >= 0");
  if (model.is_brownian()) return n == 0 ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  switch (mode) {
    case WalkMode::paper:
      return std::pow(persistence_from_p(value, model), nd);
    case WalkMode::matched:
      return std::pow(n_step_correlation(value, model, 1), nd);
    case WalkMode::enriquez:
      return std::pow(2.0 * value - 1.0, nd);
  }
  return 0.0;
}

}  // namespace corrwalk
