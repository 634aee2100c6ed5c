#include "corrwalk/aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "corrwalk/errors.hpp"

namespace corrwalk {

PathAccumulator::PathAccumulator(std::int64_t steps) : steps_(steps) {
  if (steps < 1) throw DomainError("PathAccumulator: steps must be >= 1");
}

void PathAccumulator::push(std::vector<double> entry) {
  std::size_t level = 0;
  while (level < occupied_.size() && occupied_[level]) {
    const auto& other = stack_[level];
    for (std::size_t k = 0; k < entry.size(); ++k) entry[k] = other[k] + entry[k];
    occupied_[level] = false;
    ++level;
  }
  if (level == occupied_.size()) {
    stack_.emplace_back();
    occupied_.push_back(false);
  }
  stack_[level] = std::move(entry);
  occupied_[level] = true;
  ++count_;
}

void PathAccumulator::accumulate(const Trajectory& trajectory) {
  if (static_cast<std::int64_t>(trajectory.increments.size()) != steps_) {
    throw DomainError("accumulate: trajectory has " +
                      std::to_string(trajectory.increments.size()) + " steps, expected " +
                      std::to_string(steps_));
  }
  push(standardized_levels(trajectory));
}

void PathAccumulator::accumulate_standardized(std::span<const double> levels) {
  if (static_cast<std::int64_t>(levels.size()) != steps_ + 1) {
    throw DomainError("accumulate: expected " + std::to_string(steps_ + 1) + " levels");
  }
  push(std::vector<double>(levels.begin(), levels.end()));
}

std::vector<double> PathAccumulator::sums() const {
  std::vector<double> out(static_cast<std::size_t>(steps_ + 1), 0.0);
  bool first = true;
  for (std::size_t level = 0; level < stack_.size(); ++level) {
    if (!occupied_[level]) continue;
    const auto& s = stack_[level];
    if (first) {
      out = s;
      first = false;
    } else {
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = s[k] + out[k];
    }
  }
  return out;
}

namespace {

// (X_k - k (2p - 1)) / sqrt(4p(1-p)) == (ones_k - p k) / sqrt(p (1 - p)),
// which avoids cancelling two O(k) terms when p is tiny.
class Standardizer {
 public:
  explicit Standardizer(double p) : p_(p), inv_scale_(1.0 / std::sqrt(p * (1.0 - p))) {}
  double operator()(std::int64_t ones, std::int64_t k) const {
    return (static_cast<double>(ones) - p_ * static_cast<double>(k)) * inv_scale_;
  }

 private:
  double p_;
  double inv_scale_;
};

}  // namespace

std::vector<double> standardized_levels(const Trajectory& trajectory) {
  const Standardizer standardize(trajectory.psample.p);
  std::vector<double> out(trajectory.increments.size() + 1, 0.0);
  std::int64_t ones = 0;
  for (std::size_t k = 0; k < trajectory.increments.size(); ++k) {
    ones += trajectory.increments[k] > 0 ? 1 : 0;
    out[k + 1] = standardize(ones, static_cast<std::int64_t>(k + 1));
  }
  return out;
}

AggregatedPath finalize(const std::vector<double>& sums, const HurstModel& model,
                        std::int64_t paths, std::int64_t steps) {
  if (paths < 1) throw DomainError("finalize: at least one trajectory is required");
  if (steps < 1 || static_cast<std::int64_t>(sums.size()) != steps + 1) {
    throw DomainError("finalize: sums must have steps + 1 entries");
  }
  AggregatedPath out;
  out.hurst = model.hurst();
  out.steps = steps;
  out.paths = paths;
  const double norm = model.scale() / (std::pow(static_cast<double>(steps), model.hurst()) *
                                       std::sqrt(static_cast<double>(paths)));
  out.times.resize(sums.size());
  out.values.resize(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k) {
    out.times[k] = static_cast<double>(k) / static_cast<double>(steps);
    out.values[k] = sums[k] * norm;
  }
  out.values[0] = 0.0;
  return out;
}

AggregatedPath finalize(const PathAccumulator& acc, const HurstModel& model,
                        std::int64_t paths, std::int64_t steps) {
  if (acc.steps() != steps) throw DomainError("finalize: accumulator length mismatch");
  return finalize(acc.sums(), model, paths, steps);
}

namespace {

struct BlockResult {
  std::vector<double> sums;
  std::exception_ptr error;
};

RunStats summarize(const std::vector<PSample>& samples, const PSampler& sampler) {
  RunStats s;
  s.sigma_max = sampler.sigma_max();
  s.u_max = sampler.u_max();
  if (samples.empty()) return s;
  s.p_min = std::numeric_limits<double>::infinity();
  s.p_max = -std::numeric_limits<double>::infinity();
  for (const auto& ps : samples) {
    s.total_resamples += ps.resampled_count;
    s.max_resamples = std::max(s.max_resamples, ps.resampled_count);
    s.clamped += ps.clamped ? 1 : 0;
    s.at_floor += ps.at_floor ? 1 : 0;
    s.p_mean += ps.p;
    s.rho_mean += ps.rho;
    s.p_min = std::min(s.p_min, ps.p);
    s.p_max = std::max(s.p_max, ps.p);
  }
  s.p_mean /= static_cast<double>(samples.size());
  s.rho_mean /= static_cast<double>(samples.size());
  return s;
}

}  // namespace

AggregatedPath generate_fbm(const GenerateOptions& options) {
  if (options.steps < 2) throw DomainError("generate_fbm: steps must be >= 2");
  if (options.paths < 1) throw DomainError("generate_fbm: paths must be >= 1");
  const std::int64_t steps = options.steps;
  const std::int64_t paths = options.paths;
  const HurstModel& model = options.model;
  const PSampler sampler(model, options.policy);

  std::vector<PSample> samples(static_cast<std::size_t>(paths));
  std::optional<PSample> shared;
  if (options.shared_p) {
    Rng rng(derive_seed(options.seed, std::numeric_limits<std::uint64_t>::max()));
    shared = draw_walk_parameters(options.mode, sampler, rng);
  }

  auto run_block = [&](std::int64_t block) {
    BlockResult result;
    try {
      PathAccumulator acc(steps);
      std::vector<double> levels(static_cast<std::size_t>(steps + 1));
      const std::int64_t first = block * kReductionBlock;
      const std::int64_t last = std::min(paths, first + kReductionBlock);
      for (std::int64_t i = first; i < last; ++i) {
        Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(i)));
        const PSample ps = shared ? *shared : draw_walk_parameters(options.mode, sampler, rng);
        samples[static_cast<std::size_t>(i)] = ps;
        WalkStepper stepper(options.mode, ps, model);
        const Standardizer standardize(stepper.marginal());
        std::int64_t ones = 0;
        levels[0] = 0.0;
        for (std::int64_t k = 1; k <= steps; ++k) {
          ones += stepper.step(rng) ? 1 : 0;
          levels[static_cast<std::size_t>(k)] = standardize(ones, k);
        }
        acc.accumulate_standardized(levels);
      }
      result.sums = acc.sums();
    } catch (...) {
      result.error = std::current_exception();
    }
    return result;
  };

  const std::int64_t blocks = (paths + kReductionBlock - 1) / kReductionBlock;
  const auto workers = static_cast<std::int64_t>(std::max(1u, options.workers));
  std::vector<double> total(static_cast<std::size_t>(steps + 1), 0.0);
  std::vector<BlockResult> wave;

  // Blocks run in waves of `workers`; the single reducer folds each wave in
  // block order, so the floating-point schedule is fixed.
  for (std::int64_t start = 0; start < blocks; start += workers) {
    const std::int64_t count = std::min(workers, blocks - start);
    wave.assign(static_cast<std::size_t>(count), BlockResult{});
    if (count == 1) {
      wave[0] = run_block(start);
    } else {
      std::vector<std::jthread> threads;
      threads.reserve(static_cast<std::size_t>(count));
      for (std::int64_t j = 0; j < count; ++j) {
        threads.emplace_back([&, j] { wave[static_cast<std::size_t>(j)] = run_block(start + j); });
      }
    }
    for (auto& r : wave) {
      if (r.error) std::rethrow_exception(r.error);
      for (std::size_t k = 0; k < total.size(); ++k) total[k] += r.sums[k];
    }
  }

  AggregatedPath out = finalize(total, model, paths, steps);
  out.meta.seed = options.seed;
  out.meta.mode = options.mode;
  out.meta.policy = options.policy;
  out.meta.shared_p = options.shared_p;
  out.meta.stats = summarize(samples, sampler);
  return out;
}

}  // namespace corrwalk
