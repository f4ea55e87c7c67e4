#include "driftbound/exact.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>
#include <utility>

#include "driftbound/errors.hpp"

namespace driftbound {
namespace {

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void check_law(const DistVector& d) {
  if (d.support.size() != d.mass.size()) throw ParameterError("DistVector: support/mass size mismatch");
  for (std::size_t i = 1; i < d.support.size(); ++i) {
    if (d.support[i] <= d.support[i - 1]) throw ParameterError("DistVector: support must be strictly increasing");
  }
  for (double m : d.mass) {
    if (!(m >= 0.0)) throw ParameterError("DistVector: negative mass");
  }
}

}  // namespace

DistVector DistVector::point(std::int64_t state, std::int64_t time) {
  DistVector d;
  d.support = {state};
  d.mass = {1.0};
  d.time = time;
  return d;
}

double DistVector::total_mass() const {
  CompensatedSum s;
  for (double m : mass) s.add(m);
  return s.value();
}

double DistVector::probability(std::int64_t state) const {
  const auto it = std::lower_bound(support.begin(), support.end(), state);
  if (it == support.end() || *it != state) return 0.0;
  return mass[static_cast<std::size_t>(it - support.begin())];
}

void propagate_each(const Kernel& kernel, const DistVector& init, std::int64_t horizon,
                    const std::function<void(const DistVector&)>& visit, const PropagateOptions& options) {
  if (horizon < 0) throw ParameterError("horizon must be ≥ 0");
  check_law(init);
  DistVector cur = init;
  visit(cur);

  std::vector<std::pair<std::int64_t, double>> contrib;
  Row row;
  const auto cap = options.state_cap;
  for (std::int64_t step = 0; step < horizon; ++step) {
    contrib.clear();
    for (std::size_t i = 0; i < cur.support.size(); ++i) {
      kernel.row(cur.time, cur.support[i], row);
      for (const auto& tr : row) {
        if (tr.prob > 0.0) contrib.emplace_back(tr.next, cur.mass[i] * tr.prob);
      }
    }
    std::stable_sort(contrib.begin(), contrib.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });

    DistVector next;
    next.time = cur.time + 1;
    CompensatedSum pruned;
    for (std::size_t i = 0; i < contrib.size();) {
      const std::int64_t state = contrib[i].first;
      CompensatedSum acc;
      for (; i < contrib.size() && contrib[i].first == state; ++i) acc.add(contrib[i].second);
      const double m = acc.value();
      if (m < options.prune_threshold) {
        pruned.add(m);
        continue;
      }
      if (state > cap || state < -cap) {
        throw ResourceError("state " + std::to_string(state) + " exceeds state cap " + std::to_string(cap) +
                            " at time " + std::to_string(next.time));
      }
      next.support.push_back(state);
      next.mass.push_back(m);
    }
    if (static_cast<std::int64_t>(next.support.size()) > cap) {
      throw ResourceError("support size " + std::to_string(next.support.size()) + " exceeds state cap " +
                          std::to_string(cap) + " at time " + std::to_string(next.time));
    }
    next.dropped_mass = cur.dropped_mass + pruned.value();
    visit(next);
    cur = std::move(next);
  }
}

std::vector<DistVector> propagate(const Kernel& kernel, const DistVector& init, std::int64_t horizon,
                                  const PropagateOptions& options) {
  std::vector<DistVector> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)) + 1);
  propagate_each(kernel, init, horizon, [&](const DistVector& d) { out.push_back(d); }, options);
  return out;
}

MomentResult moment(const DistVector& dist, double r, bool positive_part, double state_cap) {
  CompensatedSum s;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const auto x = static_cast<double>(dist.support[i]);
    const double base = positive_part ? std::max(x, 0.0) : std::fabs(x);
    if (base == 0.0) continue;
    s.add(dist.mass[i] * (r == 1.0 ? base : std::pow(base, r)));
  }
  return MomentResult{s.value(), dist.dropped_mass * std::pow(state_cap, r)};
}

StationaryLaw stationary_reset_walk(double epsilon, std::int64_t n_max) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("stationary law requires 0 < ε < 1");
  if (n_max < 10) throw ParameterError("stationary law requires n_max ≥ 10");

  StationaryLaw out;
  auto& law = out.law;
  law.support.resize(static_cast<std::size_t>(n_max) + 1);
  law.mass.resize(static_cast<std::size_t>(n_max) + 1);

  const double pi0 = epsilon / (1.0 + epsilon);
  CompensatedSum kept;
  double w = 1.0;  // w(n) = prod_{x=1}^{n-1} (x - eps)/(x + 1)
  law.support[0] = 0;
  law.mass[0] = pi0;
  kept.add(pi0);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    law.support[static_cast<std::size_t>(n)] = n;
    law.mass[static_cast<std::size_t>(n)] = pi0 * w;
    kept.add(pi0 * w);
    const auto nd = static_cast<double>(n);
    w *= (nd - epsilon) / (nd + 1.0);
  }
  // w now holds w(n_max + 1).
  out.kept_mass = kept.value();
  const double tail = pi0 * static_cast<double>(n_max + 1) * w / epsilon;
  const double slack = 4.0 * static_cast<double>(n_max + 1) * DBL_EPSILON * (tail + out.kept_mass);
  out.tail_low = std::max(0.0, tail - slack);
  out.tail_high = tail + slack;
  return out;
}

ConditionReport drift_report(const Kernel& kernel, const DriftParams& params, std::int64_t horizon,
                             const std::optional<Truncation>& truncation) {
  if (horizon < 0) throw ParameterError("horizon must be ≥ 0");
  ConditionReport rep;
  rep.params = params;
  rep.horizon = horizon;
  rep.truncated = truncation.has_value();

  const double drift_limit = -params.a + kConditionTolerance * std::max(1.0, std::fabs(params.a));
  const double moment_limit = params.V + kConditionTolerance * std::max(1.0, std::fabs(params.V));
  constexpr std::size_t kReachCap = 1'000'000;

  std::vector<std::int64_t> cur{kernel.initial_state()};
  std::vector<std::int64_t> next;
  Row row;
  for (std::int64_t n = 0; n < horizon; ++n) {
    next.clear();
    for (const std::int64_t x : cur) {
      kernel.row(n, x, row);
      const double z = truncation ? (*truncation)(n, x) : -INFINITY;
      CompensatedSum drift;
      CompensatedSum mom;
      for (const auto& tr : row) {
        if (tr.prob <= 0.0) continue;
        next.push_back(tr.next);
        const auto delta = static_cast<double>(tr.next - x);
        if (!(delta > z)) continue;
        drift.add(tr.prob * delta);
        mom.add(tr.prob * std::pow(std::fabs(delta), params.p));
      }
      ++rep.states_checked;
      const Witness mw{n, x, mom.value()};
      if (!rep.max_moment || mw.value > rep.max_moment->value) rep.max_moment = mw;
      if (mw.value > moment_limit) {
        rep.pass_c2 = false;
        if (!rep.first_moment_violation) rep.first_moment_violation = mw;
      }
      if (static_cast<double>(x) > params.J) {
        ++rep.drift_states_checked;
        const Witness dw{n, x, drift.value()};
        if (!rep.max_drift || dw.value > rep.max_drift->value) rep.max_drift = dw;
        if (dw.value > drift_limit) {
          rep.pass_c1 = false;
          if (!rep.first_drift_violation) rep.first_drift_violation = dw;
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next.size() > kReachCap) {
      throw ResourceError("reachable set exceeds " + std::to_string(kReachCap) + " states at time " +
                          std::to_string(n + 1));
    }
    std::swap(cur, next);
  }
  return rep;
}

}  // namespace driftbound
