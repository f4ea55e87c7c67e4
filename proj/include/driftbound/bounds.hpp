#pragma once

#include <cstdint>
#include <optional>

#include "driftbound/core.hpp"

namespace driftbound {

// (p-1)^p, valid for p >= 2. Throws ParameterError below 2.
double burkholder_constant(double p);

// Every intermediate constant of the explicit moment-bound chain for the
// normalized case a = 1, J = 0.
struct BoundBreakdown {
  double p = 0, V = 0, r = 0;
  double c_p = 0;             // (p-1)^p
  double B = 0;               // 2^p (1 + V)
  double b = 0;               // 2^p (B + (1 + B)^p)
  double c_prime = 0;         // c_p b (1 + 1/c_p)^p
  double C_prime = 0;         // max(1, c')
  double c_2 = 0;             // c_p b (4^p + 4^{p-r} r/(p-r))
  double c_3 = 0;             // 3^r 4^p b (c_p b + p/(p-r) + 3^r)
  double zeta_p_half = 0;     // zeta(p/2)
  double c_4 = 0;             // C' c_3 zeta(p/2)
  double K = 0;               // 2^{p/2} c_2 C' + c_4
  double zeta_p_minus_r = 0;  // zeta(p-r)
  double c_final = 0;         // K zeta(p-r)
};

// Constants of the martingale line-crossing bound for a given increment
// moment bound b. Fills c_p, c', C', c_2, c_3, zeta(p/2), c_4 and K of the
// breakdown; B, b-recentering and the final zeta(p-r) step are left zero.
BoundBreakdown martingale_constants(double b, double p, double r);

// Throws ParameterError unless p > 2, 0 < r < p - 1 and V > 0; throws
// OverflowError naming the first constant that is not finite.
BoundBreakdown theorem1_constants(double p, double V, double r);

// J + a^r c(p, 1, V/a^p, 0, r): bound on E[(X_n^+)^r] for all n when X_0 <= J.
double theorem1_bound(const DriftParams& params);

// theorem1_bound with r = 1 plus the initial overshoot (x0 - J)^+.
double corollary2_bound(const DriftParams& params, double x0);

// C(b, p, r) = 2^{p/2} c_2 C' + c_4 with b used directly. Requires p > 2,
// 0 < r < p, b > 0.
double theorem4_constant(double b, double p, double r);

// C'(p, b) = max(1, c_p b (1 + 1/c_p)^p), the level-hitting constant.
double hitting_constant(double p, double b);

// 2^p (V + (1 + V)^p): p-th moment bound of a recentered increment whose raw
// p-th moment is at most V.
double recentered_moment_bound(double V, double p);

struct TailBoundParams {
  DriftParams params;
  double V_prime = 0;  // p-th moment bound of the recentered increments
};

// Adopts V' = recentered_moment_bound(V, p).
TailBoundParams make_tail_params(const DriftParams& params);

// Certified upper bound on P(X_n >= t) from the last-visit argument:
//   sum_{l >= 0} c_p V' (l+1)^{p/2} (t - J - V^{1/p} + a l)^{-p}.
// With `n` the sum stops at l = n - 1 (still a valid bound, and tighter).
// Infinite sums are truncated once a term drops below 1e-12 of the running
// sum (or after 2^22 terms) and an analytic majorant of the remainder is
// added. Throws DomainError when t <= J + V^{1/p}.
double p4_tail_probability(const TailBoundParams& params, double t,
                           std::optional<std::int64_t> n = std::nullopt);

// n-free bound on E(X_n) for p > 4:
//   max(t0, 0) + integral_{max(t0,0)}^inf p4_tail_probability(t) dt,
// t0 = J + V^{1/p} + 1. The integral is taken termwise in closed form and
// the remainder of the resulting series is bounded analytically.
double p4_expectation_bound(const TailBoundParams& params);

}  // namespace driftbound
