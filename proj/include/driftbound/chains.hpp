#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "driftbound/core.hpp"

namespace driftbound {

// Time-inhomogeneous chain whose marginal is {0 w.p. 2/3, n w.p. 1/3} for
// n >= 2, so E(X_n) = n/3 while the drift above 0 is at most -1.
//
// X_0 = 0 and X_1 = 1 w.p. 1/3, else 0, so E(X_n) = n/3 from n = 0 on. At
// time 1 state 1 resets to 0 (drift -1) and 0 moves to 2 w.p. 1/2. For n >= 2:
//   from 0:      n+1 w.p. 1/n, stay w.p. 1 - 1/n
//   from x >= 2: x+1 w.p. 1 - 2/x, 0 w.p. 2/x
// (on the reachable set x == n, so 2/x == 2/n). State 1 always resets to 0;
// negative states are absorbing and unreachable.
Kernel build_sudan();

// Chain that lines up all jumps out of 0 to land at the fixed time M:
// for 0 <= n < M, x > 0 decrements; x == 0 jumps to 2(M-n) w.p. (M-n)^-2.
// Frozen (identity) for n >= M. Throws ParameterError for M < 2.
Kernel build_amassed(std::int64_t M);

// Concatenates amassing windows M_1, M_2, ...: window k occupies times
// [T_k, T_k + M_k) with T_k = M_1 + ... + M_{k-1}. Positive states keep
// decrementing across windows; frozen after the last window.
Kernel build_amassed_concat(const std::vector<std::int64_t>& windows);

// Time-homogeneous reset walk: 0 -> 1 surely; from x > 0 up to x+1 w.p.
// 1 - (1+eps)/(x+1), else reset to 0. Throws ParameterError unless
// 0 < eps < 1.
Kernel build_reset_walk(double epsilon);

// Nonnegative reset chain with positive increments bounded by 1 and drift
// exactly -a above J = floor(a): below or at J the chain steps up by one;
// above J it steps up w.p. 1 - (1+a)/(x+1) and resets to 0 otherwise.
// Coincides with build_reset_walk(a) for a < 1.
Kernel build_positive_part_walk(double a);

// Point mass kernel: every state stays put.
Kernel build_identity(std::int64_t initial_state = 0);

// Martingale with increments +up w.p. q and -down w.p. 1-q, down = up q/(1-q).
struct TwoPointMartingale {
  std::int64_t up = 1;
  double q = 0.5;

  // Throws ParameterError unless up >= 1, 0 < q < 1 and down is a positive
  // integer.
  Kernel kernel(std::int64_t initial_state = 0) const;
  std::int64_t down() const;
  // E|increment|^p.
  double moment(double p) const;
};

// Designed martingale for the line-crossing inequality: +3 w.p. 1/4, -1 w.p. 3/4.
TwoPointMartingale theorem4_martingale();
// Heavy-increment martingale for the level-hitting lemma: +7 w.p. 1/8, -1 w.p. 7/8.
TwoPointMartingale lemma8_martingale();
// Fair +-1 walk.
TwoPointMartingale fair_walk();

// E[Y^p] for Y = U^{-1/alpha} - 1 (Lomax, unit scale): Gamma(p+1) Gamma(alpha-p) / Gamma(alpha).
// Throws ParameterError for p >= alpha.
double lomax_moment(double alpha, double p);

struct DriftWalkSpec {
  double a = 1.0;
  double J = 0.0;
  double alpha = 3.5;  // jump tail index
  double scale = 1.0;  // jump scale (>= 0)
  // Conditional increment mean at or below J.
  std::optional<double> reentry_mean;  // default: +a
  std::optional<double> reflect_at;    // optional floor
  std::optional<double> initial_state;  // default: J
};

struct DriftWalk {
  Sampler sampler;
  DriftParams params;        // a, J, p, r and the certified V
  bool drift_certified = true;  // false when a floor may weaken the drift
  double compensator_above = 0;
  double compensator_below = 0;
};

// Heavy-tailed walk: increment = scale*Y - c with Y Lomax(alpha); above J the
// compensator c is scale/(alpha-1) + a so the conditional mean is exactly -a,
// at or below J it is scale/(alpha-1) - reentry_mean. The returned V bounds
// E|increment|^p by Minkowski:
//   V = ((scale^p E Y^p)^{1/p} + max|c|)^p.
// Throws ParameterError for alpha <= p (infinite moment) or bad ranges.
DriftWalk build_drift_walk(const DriftWalkSpec& spec, double p, double r = 1.0);

}  // namespace driftbound
