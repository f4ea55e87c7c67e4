#pragma once

namespace driftbound {

// Riemann zeta for real w > 1, absolute error below 1e-10.
//
// Direct sum of i^-w for i < N plus the Euler-Maclaurin tail
//   N^{1-w}/(w-1) + N^{-w}/2 + sum_{k=1..3} B_{2k}/(2k)! (w)_{2k-1} N^{-w-2k+1}
// with N = 32 + ceil(w). Throws DomainError for w <= 1.
double zeta(double w);

}  // namespace driftbound
