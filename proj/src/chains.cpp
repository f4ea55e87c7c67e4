#include "driftbound/chains.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "driftbound/errors.hpp"

namespace driftbound {

Kernel build_sudan() {
  return Kernel(
      "sudan",
      [](std::int64_t n, std::int64_t x, Row& out) {
        if (x < 0) {
          out.push_back({x, 1.0});
        } else if (x == 0) {
          if (n <= 0) {
            out.push_back({0, 2.0 / 3.0});
            out.push_back({1, 1.0 / 3.0});
          } else if (n == 1) {
            out.push_back({0, 0.5});
            out.push_back({2, 0.5});
          } else {
            const double up = 1.0 / static_cast<double>(n);
            out.push_back({0, 1.0 - up});
            out.push_back({n + 1, up});
          }
        } else if (x == 1) {
          out.push_back({0, 1.0});
        } else {
          const double reset = 2.0 / static_cast<double>(x);
          out.push_back({0, reset});
          if (reset < 1.0) out.push_back({x + 1, 1.0 - reset});
        }
      },
      0);
}

namespace {

// Row of one amassing window of length M at local time m (0 <= m < M).
void amassed_row(std::int64_t M, std::int64_t m, std::int64_t x, Row& out) {
  if (x > 0) {
    out.push_back({x - 1, 1.0});
  } else if (x < 0) {
    out.push_back({x, 1.0});
  } else {
    const auto left = static_cast<double>(M - m);
    const double jump = 1.0 / (left * left);
    if (jump < 1.0) out.push_back({0, 1.0 - jump});
    out.push_back({2 * (M - m), jump});
  }
}

}  // namespace

Kernel build_amassed(std::int64_t M) {
  if (M < 2) throw ParameterError("amassed chain requires M ≥ 2 (M = " + std::to_string(M) + ")");
  return Kernel(
      "amassed(M=" + std::to_string(M) + ")",
      [M](std::int64_t n, std::int64_t x, Row& out) {
        if (n < 0 || n >= M) {
          out.push_back({x, 1.0});
          return;
        }
        amassed_row(M, n, x, out);
      },
      0);
}

Kernel build_amassed_concat(const std::vector<std::int64_t>& windows) {
  if (windows.empty()) throw ParameterError("amassed concat needs at least one window");
  std::vector<std::int64_t> starts;
  std::int64_t t = 0;
  std::ostringstream name;
  name << "amassed-concat(";
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i] < 2) throw ParameterError("every amassing window needs M ≥ 2");
    starts.push_back(t);
    t += windows[i];
    name << (i ? "," : "") << windows[i];
  }
  name << ")";
  const std::int64_t end = t;
  return Kernel(
      name.str(),
      [windows, starts, end](std::int64_t n, std::int64_t x, Row& out) {
        if (n < 0 || n >= end) {
          out.push_back({x, 1.0});
          return;
        }
        const auto it = std::upper_bound(starts.begin(), starts.end(), n);
        const auto k = static_cast<std::size_t>(it - starts.begin()) - 1;
        amassed_row(windows[k], n - starts[k], x, out);
      },
      0);
}

Kernel build_reset_walk(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("reset walk requires 0 < ε < 1");
  }
  std::ostringstream name;
  name << "resetwalk(epsilon=" << epsilon << ")";
  return Kernel(
      name.str(),
      [epsilon](std::int64_t, std::int64_t x, Row& out) {
        if (x < 0) {
          out.push_back({x, 1.0});
        } else if (x == 0) {
          out.push_back({1, 1.0});
        } else {
          const double reset = (1.0 + epsilon) / static_cast<double>(x + 1);
          out.push_back({0, reset});
          out.push_back({x + 1, 1.0 - reset});
        }
      },
      0);
}

Kernel build_positive_part_walk(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("positive-part walk requires a > 0");
  const auto J = static_cast<std::int64_t>(std::floor(a));
  std::ostringstream name;
  name << "positive-part-walk(a=" << a << ")";
  return Kernel(
      name.str(),
      [a, J](std::int64_t, std::int64_t x, Row& out) {
        if (x < 0) {
          out.push_back({x, 1.0});
        } else if (x <= J) {
          out.push_back({x + 1, 1.0});
        } else {
          const double reset = (1.0 + a) / static_cast<double>(x + 1);
          out.push_back({0, reset});
          out.push_back({x + 1, 1.0 - reset});
        }
      },
      0);
}

Kernel build_identity(std::int64_t initial_state) {
  return Kernel(
      "identity", [](std::int64_t, std::int64_t x, Row& out) { out.push_back({x, 1.0}); },
      initial_state);
}

std::int64_t TwoPointMartingale::down() const {
  const double d = static_cast<double>(up) * q / (1.0 - q);
  const double rounded = std::round(d);
  if (!(q > 0.0 && q < 1.0) || up < 1 || rounded < 1.0 || std::fabs(d - rounded) > 1e-9) {
    throw ParameterError("two-point martingale needs up ≥ 1, 0 < q < 1 and integer down = up·q/(1−q)");
  }
  return static_cast<std::int64_t>(rounded);
}

Kernel TwoPointMartingale::kernel(std::int64_t initial_state) const {
  const std::int64_t d = down();
  std::ostringstream name;
  name << "two-point(+" << up << " w.p. " << q << ", -" << d << ")";
  const auto u = up;
  const double pu = q;
  return Kernel(
      name.str(),
      [u, d, pu](std::int64_t, std::int64_t x, Row& out) {
        out.push_back({x - d, 1.0 - pu});
        out.push_back({x + u, pu});
      },
      initial_state);
}

double TwoPointMartingale::moment(double p) const {
  return q * std::pow(static_cast<double>(up), p) + (1.0 - q) * std::pow(static_cast<double>(down()), p);
}

TwoPointMartingale theorem4_martingale() { return {3, 0.25}; }
TwoPointMartingale lemma8_martingale() { return {7, 0.125}; }
TwoPointMartingale fair_walk() { return {1, 0.5}; }

double lomax_moment(double alpha, double p) {
  if (!(p >= 0.0)) throw ParameterError("moment order must be ≥ 0");
  if (!(alpha > p)) {
    throw ParameterError("Lomax p-th moment is infinite for α ≤ p");
  }
  return std::exp(std::lgamma(p + 1.0) + std::lgamma(alpha - p) - std::lgamma(alpha));
}

DriftWalk build_drift_walk(const DriftWalkSpec& spec, double p, double r) {
  if (!(spec.a > 0.0)) throw ParameterError("drift walk requires a > 0");
  if (!(spec.scale >= 0.0)) throw ParameterError("drift walk requires scale ≥ 0");
  if (!(spec.alpha > 1.0)) throw ParameterError("drift walk requires α > 1");
  if (!(p > 1.0)) throw ParameterError("drift walk requires p > 1");
  if (!(spec.alpha > p)) {
    std::ostringstream msg;
    msg << "jump tail index α = " << spec.alpha << " ≤ p = " << p << ": p-th moment is infinite";
    throw ParameterError(msg.str());
  }

  const double jump_mean = spec.scale / (spec.alpha - 1.0);
  const double reentry = spec.reentry_mean.value_or(spec.a);
  const double c_above = jump_mean + spec.a;
  const double c_below = jump_mean - reentry;
  const double jump_norm = spec.scale * std::pow(lomax_moment(spec.alpha, p), 1.0 / p);
  const double V = std::pow(jump_norm + std::max(std::fabs(c_above), std::fabs(c_below)), p);

  const double J = spec.J;
  const double scale = spec.scale;
  const double inv_alpha = 1.0 / spec.alpha;
  const auto floor = spec.reflect_at;

  std::ostringstream name;
  name << "driftwalk(a=" << spec.a << ",J=" << J << ",alpha=" << spec.alpha << ",scale=" << scale << ")";

  Sampler sampler(
      name.str(),
      [J, scale, inv_alpha, c_above, c_below, floor](std::int64_t, double x, Rng& rng) {
        const double u = rng.uniform_pos();
        const double jump = scale == 0.0 ? 0.0 : scale * (std::pow(u, -inv_alpha) - 1.0);
        double next = x + jump - (x > J ? c_above : c_below);
        if (floor && next < *floor) next = *floor;
        return next;
      },
      spec.initial_state.value_or(J));

  DriftWalk out{std::move(sampler), DriftParams{spec.a, J, p, V, r}, !floor.has_value(), c_above, c_below};
  return out;
}

}  // namespace driftbound
