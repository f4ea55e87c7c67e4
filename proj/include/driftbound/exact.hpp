#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "driftbound/core.hpp"

namespace driftbound {

// Law of an integer-valued X_n: sorted support, masses, and the total mass
// pruned away so far.
struct DistVector {
  std::vector<std::int64_t> support;
  std::vector<double> mass;
  std::int64_t time = 0;
  double dropped_mass = 0.0;

  static DistVector point(std::int64_t state, std::int64_t time = 0);

  double total_mass() const;          // sum of mass, compensated
  double probability(std::int64_t state) const;
};

struct PropagateOptions {
  double prune_threshold = 1e-18;
  // Maximum support size and maximum |state|; exceeding either throws
  // ResourceError. Also the magnitude assumed for pruned mass in moment().
  std::int64_t state_cap = 1'000'000;
};

// Visits the laws at times init.time .. init.time + horizon in order. Each
// step sums contributions per target state with compensated summation and
// prunes entries below the threshold into dropped_mass.
void propagate_each(const Kernel& kernel, const DistVector& init, std::int64_t horizon,
                    const std::function<void(const DistVector&)>& visit,
                    const PropagateOptions& options = {});

std::vector<DistVector> propagate(const Kernel& kernel, const DistVector& init,
                                  std::int64_t horizon, const PropagateOptions& options = {});

struct MomentResult {
  double value = 0.0;         // sum over the kept support
  double dropped_upper = 0.0;  // worst case extra from dropped mass at |x| <= state_cap
  double upper() const { return value + dropped_upper; }
};

// sum mass_i ((x_i)^+)^r, or |x_i|^r with positive_part = false.
MomentResult moment(const DistVector& dist, double r, bool positive_part,
                    double state_cap = 1e6);

struct StationaryLaw {
  DistVector law;           // pi(0..n_max)
  double kept_mass = 0;     // sum pi(0..n_max)
  double tail_low = 0;      // bracket on sum_{n > n_max} pi(n)
  double tail_high = 0;
  double bracket_width() const { return tail_high - tail_low; }
};

// Stationary law of build_reset_walk(eps) by the excursion product
//   pi(n) = pi(0) prod_{x=1}^{n-1} (1 - (1+eps)/(x+1)),  n >= 1,
// normalized by the mean return time. Writing w(n) for the product,
// eps w(n) = n w(n) - (n+1) w(n+1), so sum_{n >= N} w(n) = N w(N)/eps and
// pi(0) = eps/(1+eps). The tail bracket is that closed form widened by the
// accumulated rounding of the product. Requires 0 < eps < 1, n_max >= 10.
StationaryLaw stationary_reset_walk(double epsilon, std::int64_t n_max);

// Threshold Z(n, x): increments with Delta <= Z are excluded from both the
// drift and the moment (truncated conditions).
using Truncation = std::function<double(std::int64_t n, std::int64_t x)>;

struct Witness {
  std::int64_t time = -1;
  std::int64_t state = 0;
  double value = 0;
};

struct ConditionReport {
  DriftParams params;
  std::int64_t horizon = 0;
  bool truncated = false;
  std::size_t states_checked = 0;
  std::size_t drift_states_checked = 0;  // states with x > J

  std::optional<Witness> max_drift;   // argmax of drift over {x > J}
  std::optional<Witness> max_moment;  // argmax of conditional p-th moment
  std::optional<Witness> first_drift_violation;
  std::optional<Witness> first_moment_violation;

  bool pass_c1 = true;
  bool pass_c2 = true;
  bool pass() const { return pass_c1 && pass_c2; }
};

// Relative slack granted to the comparisons drift <= -a and moment <= V.
inline constexpr double kConditionTolerance = 1e-12;

// Checks both conditions exactly over every (n, x) with 0 <= n < horizon and
// x reachable from the kernel's initial state with positive probability.
ConditionReport drift_report(const Kernel& kernel, const DriftParams& params,
                             std::int64_t horizon,
                             const std::optional<Truncation>& truncation = std::nullopt);

}  // namespace driftbound
