#include "driftbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "driftbound/errors.hpp"
#include "driftbound/zeta.hpp"

namespace driftbound {
namespace {

double checked(const char* name, double value) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "constant " << name << " overflows double precision";
    throw OverflowError(name, msg.str());
  }
  return value;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Sum over l >= 0 of (l+1)^alpha (d + a l)^{-beta}, requiring beta - alpha > 1.
//
// Terms are unimodal in l, so once a term drops below rel_cutoff of the
// running sum we are past the peak. The remainder from L on is majorized
// using d + a l >= rho a (l+1), rho = min(1, (d + a L)/(a (L+1))), and the
// decreasing majorant g(l) = (l+1)^{alpha-beta}:
//   sum_{l>=L} <= (rho a)^{-beta} [ g(L) + (L+1)^{alpha-beta+1}/(beta-alpha-1) ].
// A finite `terms` limit returns the plain partial sum (no majorant needed).
double certified_series(double alpha, double beta, double d, double a,
                        std::optional<std::int64_t> terms) {
  constexpr double kRelCutoff = 1e-12;
  constexpr std::int64_t kMaxTerms = std::int64_t{1} << 22;
  const std::int64_t limit = terms ? std::min(*terms, kMaxTerms) : kMaxTerms;

  double sum = 0.0;
  double comp = 0.0;  // Neumaier compensation
  std::int64_t l = 0;
  for (; l < limit; ++l) {
    const double ld = static_cast<double>(l);
    const double term = std::pow(ld + 1.0, alpha) * std::pow(d + a * ld, -beta);
    const double t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    if (term < kRelCutoff * (sum + comp)) {
      ++l;
      break;
    }
  }
  const double partial = sum + comp;
  if (terms && l >= *terms) return partial;

  const double L = static_cast<double>(l);
  const double rho = std::min(1.0, (d + a * L) / (a * (L + 1.0)));
  const double expo = alpha - beta;
  const double majorant = std::pow(rho * a, -beta) *
                          (std::pow(L + 1.0, expo) + std::pow(L + 1.0, expo + 1.0) / (beta - alpha - 1.0));
  return partial + majorant;
}

}  // namespace

double burkholder_constant(double p) {
  if (!(p >= 2.0)) {
    throw ParameterError("Burkholder constant (p−1)^p is only available for p ≥ 2 (p = " + fmt(p) + ")");
  }
  return std::pow(p - 1.0, p);
}

double recentered_moment_bound(double V, double p) {
  if (!(V > 0) || !(p > 1)) {
    throw ParameterError("recentered_moment_bound requires V > 0 and p > 1");
  }
  return std::pow(2.0, p) * (V + std::pow(1.0 + V, p));
}

BoundBreakdown martingale_constants(double b, double p, double r) {
  if (!(p > 2)) throw ParameterError("p ≤ 2");
  if (!(r > 0)) throw ParameterError("r ≤ 0");
  if (!(r < p)) throw ParameterError("r ≥ p");
  if (!(b > 0) || !std::isfinite(b)) throw ParameterError("b must be finite and > 0");

  BoundBreakdown out;
  out.p = p;
  out.r = r;
  out.b = b;
  out.c_p = checked("c_p", burkholder_constant(p));
  out.c_prime = checked("c_prime", out.c_p * b * std::pow(1.0 + 1.0 / out.c_p, p));
  out.C_prime = std::max(1.0, out.c_prime);
  out.c_2 = checked("c_2", out.c_p * b * (std::pow(4.0, p) + std::pow(4.0, p - r) * r / (p - r)));
  out.c_3 = checked("c_3", std::pow(3.0, r) * std::pow(4.0, p) * b *
                               (out.c_p * b + p / (p - r) + std::pow(3.0, r)));
  out.zeta_p_half = zeta(p / 2.0);
  out.c_4 = checked("c_4", out.C_prime * out.c_3 * out.zeta_p_half);
  out.K = checked("K", std::pow(2.0, p / 2.0) * out.c_2 * out.C_prime + out.c_4);
  return out;
}

BoundBreakdown theorem1_constants(double p, double V, double r) {
  DriftParams params{1.0, 0.0, p, V, r};
  if (auto bad = validate_params(params); !bad.empty()) throw ParameterError(join_violations(bad));

  const double B = checked("B", std::pow(2.0, p) * (1.0 + V));
  const double b = checked("b", recentered_moment_bound(B, p));
  BoundBreakdown out = martingale_constants(b, p, r);
  out.V = V;
  out.B = B;
  out.zeta_p_minus_r = zeta(p - r);
  out.c_final = checked("c_final", out.K * out.zeta_p_minus_r);
  return out;
}

double theorem1_bound(const DriftParams& params) {
  if (auto bad = validate_params(params); !bad.empty()) throw ParameterError(join_violations(bad));
  const double scaled_V = params.V / std::pow(params.a, params.p);
  const auto chain = theorem1_constants(params.p, scaled_V, params.r);
  return checked("c_final", params.J + std::pow(params.a, params.r) * chain.c_final);
}

double corollary2_bound(const DriftParams& params, double x0) {
  DriftParams unit = params;
  unit.r = 1.0;
  return theorem1_bound(unit) + std::max(x0 - params.J, 0.0);
}

double theorem4_constant(double b, double p, double r) { return martingale_constants(b, p, r).K; }

double hitting_constant(double p, double b) {
  if (!(p > 2)) throw ParameterError("p ≤ 2");
  if (!(b > 0)) throw ParameterError("b must be > 0");
  const double cp = burkholder_constant(p);
  return std::max(1.0, checked("c_prime", cp * b * std::pow(1.0 + 1.0 / cp, p)));
}

TailBoundParams make_tail_params(const DriftParams& params) {
  return TailBoundParams{params, recentered_moment_bound(params.V, params.p)};
}

namespace {

void check_tail_params(const TailBoundParams& tp) {
  const auto& q = tp.params;
  if (!(q.p > 2)) throw ParameterError("p ≤ 2");
  if (!(q.a > 0)) throw ParameterError("a ≤ 0");
  if (!(q.V > 0)) throw ParameterError("V ≤ 0");
  if (!(tp.V_prime >= q.V)) throw ParameterError("V′ < V");
}

}  // namespace

double p4_tail_probability(const TailBoundParams& tp, double t, std::optional<std::int64_t> n) {
  check_tail_params(tp);
  const auto& q = tp.params;
  const double threshold = q.J + std::pow(q.V, 1.0 / q.p);
  if (!(t > threshold)) {
    throw DomainError("tail bound requires t > J + V^{1/p} = " + fmt(threshold) + " (t = " + fmt(t) + ")");
  }
  if (n && *n < 1) throw ParameterError("n must be ≥ 1");
  const double coef = burkholder_constant(q.p) * tp.V_prime;
  return coef * certified_series(q.p / 2.0, q.p, t - threshold, q.a, n);
}

double p4_expectation_bound(const TailBoundParams& tp) {
  check_tail_params(tp);
  const auto& q = tp.params;
  if (!(q.p > 4)) throw ParameterError("expectation bound requires p > 4 (p = " + fmt(q.p) + ")");
  const double shift = q.J + std::pow(q.V, 1.0 / q.p);
  const double lower = std::max(shift + 1.0, 0.0);
  // integral_{lower}^inf (t - shift + a l)^{-p} dt = (lower - shift + a l)^{1-p} / (p - 1)
  const double coef = burkholder_constant(q.p) * tp.V_prime / (q.p - 1.0);
  return lower + coef * certified_series(q.p / 2.0, q.p - 1.0, lower - shift, q.a, std::nullopt);
}

}  // namespace driftbound
