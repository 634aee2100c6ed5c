#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "corrwalk/fgn.hpp"
#include "corrwalk/p_sampler.hpp"
#include "corrwalk/rng.hpp"

namespace corrwalk {

/// How a single +-1 trajectory is generated.
///  - paper:    xi(i) = xi(i-1) B_rho + (1 - B_rho) B_p, B_rho ~ Ber(rho(p)).
///              The chain's lag-n correlation is rho(p)^n.
///  - matched:  same PSample, two-state chain whose lag-1 correlation is
///              exactly sigma1(p).
///  - enriquez: p = 1/2, persistence drawn from
///              (1 - H) 2^{3-2H} (1 - rho)^{1-2H} on [1/2, 1].
enum class WalkMode { paper, matched, enriquez };

std::string_view to_string(WalkMode mode);
std::optional<WalkMode> parse_walk_mode(std::string_view text);

struct WalkConfig {
  std::int64_t steps = 1;
  WalkMode mode = WalkMode::paper;
  HurstModel model;
  InfeasiblePolicy policy = InfeasiblePolicy::resample;
};

struct Trajectory {
  PSample psample;
  std::vector<std::int8_t> increments;  ///< +-1
  std::vector<std::int64_t> levels;     ///< levels[k-1] = X_k, X_0 = 0 implied
};

/// One step of the two-draw recursion on {0, 1}. B_p is only drawn when B_rho
/// is 0, which leaves the law unchanged.
template <UniformSource Source>
bool next_increment(bool previous, double p, double rho, Source& source) {
  if (static_cast<double>(source()) < rho) return previous;
  return static_cast<double>(source()) < p;
}

/// Streaming generator of one trajectory's bits. Holds only the previous
/// bit, so memory per trajectory is constant.
class WalkStepper {
 public:
  /// Paper and matched modes use psample.p and psample.rho; enriquez uses
  /// psample.rho as the persistence with p = 1/2. For a Brownian model all
  /// modes reduce to iid Ber(1/2).
  WalkStepper(WalkMode mode, const PSample& psample, const HurstModel& model);

  template <UniformSource Source>
  bool step(Source& source);

  /// Probability of a 1 given the previous bit (for the one-uniform modes).
  double p_one_after_one() const noexcept { return after_one_; }
  double p_one_after_zero() const noexcept { return after_zero_; }
  double marginal() const noexcept { return marginal_; }

 private:
  bool verbatim_;  // two-draw recursion with separate B_rho / B_p draws
  double p_;
  double rho_;
  double after_one_;
  double after_zero_;
  double marginal_;
  bool started_ = false;
  bool previous_ = false;
};

template <UniformSource Source>
bool WalkStepper::step(Source& source) {
  if (!started_) {
    started_ = true;
    previous_ = static_cast<double>(source()) < marginal_;
    return previous_;
  }
  if (verbatim_) {
    previous_ = next_increment(previous_, p_, rho_, source);
  } else {
    previous_ = static_cast<double>(source()) < (previous_ ? after_one_ : after_zero_);
  }
  return previous_;
}

/// Draws the per-trajectory parameters for `mode`: a PSample from `sampler`
/// (paper, matched) or an inverted persistence draw (enriquez).
template <UniformSource Source>
PSample draw_walk_parameters(WalkMode mode, const PSampler& sampler, Source& source);

/// Persistence draw for the enriquez mode: rho = 1 - (1/2)(1 - u)^{1/(2-2H)}.
double enriquez_persistence(double u, const HurstModel& model);

Trajectory generate_trajectory(const WalkConfig& config, std::uint64_t seed);
/// Same, reusing a prebuilt sampler (must match config.model/policy).
Trajectory generate_trajectory(const WalkConfig& config, const PSampler& sampler,
                               std::uint64_t seed);

/// Exact lag-n correlation of the stationary chain. `value` is p for the
/// paper and matched modes and the persistence rho for enriquez.
double chain_lag_correlation(WalkMode mode, double value, const HurstModel& model,
                             std::int64_t n);

template <UniformSource Source>
PSample draw_walk_parameters(WalkMode mode, const PSampler& sampler, Source& source) {
  const HurstModel& model = sampler.model();
  if (mode != WalkMode::enriquez || model.is_brownian()) return sampler.sample(source);
  PSample s;
  s.u = static_cast<double>(source());
  s.target = target_from_uniform(s.u, model);
  s.p = 0.5;
  s.rho = enriquez_persistence(s.u, model);
  return s;
}

}  // namespace corrwalk
