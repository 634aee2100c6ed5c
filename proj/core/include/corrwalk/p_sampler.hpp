#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "corrwalk/errors.hpp"
#include "corrwalk/fgn.hpp"
#include "corrwalk/link.hpp"
#include "corrwalk/rng.hpp"

namespace corrwalk {

/// What to do with a uniform whose target exceeds the attainable lag-1 phi
/// coefficient.
enum class InfeasiblePolicy { resample, clamp_to_half, error };

std::string_view to_string(InfeasiblePolicy policy);
/// Accepts "resample", "clamp", "clamp-to-half" and "error".
std::optional<InfeasiblePolicy> parse_infeasible_policy(std::string_view text);

struct PSample {
  double u = 0.0;       ///< accepted uniform draw
  double target = 0.0;  ///< 1 - (1 - u)^{1/(2-2H)}
  double p = 0.5;       ///< solved marginal probability, in (0, 1/2]
  double rho = 0.5;     ///< persistence_from_p(p)
  std::uint64_t resampled_count = 0;
  bool clamped = false;   ///< clamp-to-half policy was applied
  bool at_floor = false;  ///< target below the bracket floor's correlation
};

/// Lower end of the root bracket. The solver bisects in log p, so the floor
/// can sit far below where Phi2 loses relative accuracy (~1e-150).
inline constexpr double kSolveFloor = 1e-100;
/// Tolerance on |sigma1(p) - target| accepted by solve_p.
inline constexpr double kRootTolerance = 1e-10;

/// 1 - (1 - u)^{1/(2 - 2H)} for 0 <= u < 1.
double target_from_uniform(double u, const HurstModel& model);

/// Largest uniform whose target is attainable: 1 - (1 - sigma_max)^{2 - 2H}.
double feasibility_threshold(const HurstModel& model, double sigma_max);

/// Unique p in (0, 1/2] with n_step_correlation(p, model, 1) == target.
/// Throws InfeasibleTargetError when target > sigma_max.
double solve_p(double target, const HurstModel& model);
double solve_p(double target, const HurstModel& model, double sigma_max);

/// Density of p on the (0, 1/2] branch:
/// (1 - H) 2^{3-2H} (1 - v)^{1-2H} dv/dp with v = (sigma1(p) + 1) / 2 and
/// dv/dp from a Richardson-extrapolated central difference.
double density_p(double p, const HurstModel& model);

/// Precomputes the feasible range once and draws PSamples.
class PSampler {
 public:
  PSampler(const HurstModel& model, InfeasiblePolicy policy);

  const HurstModel& model() const noexcept { return model_; }
  InfeasiblePolicy policy() const noexcept { return policy_; }
  double sigma_max() const noexcept { return sigma_max_; }
  double u_max() const noexcept { return u_max_; }

  /// Draws one PSample. The number of uniforms consumed is
  /// resampled_count + 1, which keeps fixed-seed runs deterministic.
  template <UniformSource Source>
  PSample sample(Source& source) const;

  /// Maps one uniform, applying the policy on infeasible values. Returns
  /// nullopt when the policy is `resample` and u is infeasible.
  std::optional<PSample> from_uniform(double u) const;

 private:
  HurstModel model_;
  InfeasiblePolicy policy_;
  double sigma_max_;
  double u_max_;
};

template <UniformSource Source>
PSample PSampler::sample(Source& source) const {
  constexpr std::uint64_t kMaxDraws = 100'000'000;
  for (std::uint64_t count = 0; count < kMaxDraws; ++count) {
    if (auto s = from_uniform(static_cast<double>(source()))) {
      s->resampled_count = count;
      return *s;
    }
  }
  throw NumericError("PSampler: no feasible uniform after 1e8 draws");
}

/// One-shot sampling; constructs a PSampler (and its feasible range) per call.
template <UniformSource Source>
PSample sample_p(Source& source, const HurstModel& model, InfeasiblePolicy policy) {
  return PSampler(model, policy).sample(source);
}

}  // namespace corrwalk
