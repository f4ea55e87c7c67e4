#include <algorithm>
#include <cmath>
#include <limits>

#include "app_internal.hpp"
#include "driftbound/bounds.hpp"
#include "driftbound/errors.hpp"
#include "driftbound/zeta.hpp"

namespace driftbound::app {

using nlohmann::json;
using namespace detail;

namespace {

// E(X_n) for n = 0..horizon by exact propagation.
std::vector<double> exact_means(const Kernel& k, std::int64_t horizon) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(horizon) + 1);
  propagate_each(k, DistVector::point(k.initial_state()), horizon, [&](const DistVector& d) {
    ExactSum s;
    for (std::size_t i = 0; i < d.support.size(); ++i) s.add(d.mass[i] * static_cast<double>(d.support[i]));
    out.push_back(s.value());
  });
  return out;
}

CommandResult sudan_growth(const RunConfig& c, const Runtime& rt) {
  CommandResult res;
  const std::int64_t H = c.horizon.value_or(1000);
  const Kernel k = build_sudan();
  const std::vector<double> mean = exact_means(k, H);
  double worst = 0;
  std::int64_t worst_n = 0;
  for (std::int64_t n = 0; n <= H; ++n) {
    const double err = std::fabs(mean[static_cast<std::size_t>(n)] - static_cast<double>(n) / 3.0);
    if (err > worst) worst = err, worst_n = n;
  }
  add_criterion(res, "exact_mean_is_n_over_3", worst <= 1e-9, {{"max_abs_error", worst}, {"at_n", worst_n}, {"horizon", H}});

  const std::int64_t Hmc = std::min<std::int64_t>(H, 200);
  const std::uint64_t N = c.trajectories.value_or(100000);
  const auto acc = simulate_reduce(Process{k}, sim_options(c, rt, Hmc, N, 1), PlusMomentAccumulator(Hmc, 1.0));
  std::vector<double> xs, ys;
  res.columns = {"n", "exact_mean", "mc_mean", "mc_std_error"};
  for (std::int64_t n = 0; n <= Hmc; ++n) {
    const EstimatorResult e = acc.at(static_cast<std::size_t>(n));
    res.rows.push_back({static_cast<double>(n), mean[static_cast<std::size_t>(n)], e.mean, e.std_error});
    if (n >= 10 && n % 10 == 0) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(e.mean);
    }
  }
  if (xs.size() >= 2) {
    const double slope = ls_slope(xs, ys);
    add_criterion(res, "mc_slope_within_10pct_of_one_third", std::fabs(slope - 1.0 / 3.0) <= 0.1 / 3.0,
                  {{"slope", slope}, {"trajectories", N}, {"horizon", Hmc}});
  }

  const ConditionReport rep = drift_report(k, DriftParams{1.0, 0.0, 1.0, 3.0, 1.0}, H);
  add_criterion(res, "drift_condition_a1_J0", rep.pass_c1, to_json(rep));
  add_criterion(res, "moment_condition_p1_V3", rep.pass_c2, to_json(rep));
  finish_criteria(res);
  return res;
}

CommandResult amassed_growth(const RunConfig& c, const Runtime&) {
  CommandResult res;
  const double A = std::exp(-zeta(2.0));
  const std::int64_t M_max = c.M.value_or(10000);
  if (M_max < 2) throw ParameterError("M < 2");
  std::vector<std::int64_t> Ms;
  for (std::int64_t m = 10; m <= M_max; m *= 10) Ms.push_back(m);
  if (Ms.empty() || Ms.back() != M_max) Ms.push_back(M_max);

  res.columns = {"M", "exact_mean", "harmonic_lower_bound"};
  std::vector<double> means;
  bool lower_ok = true;
  for (const std::int64_t M : Ms) {
    const std::vector<double> mean = exact_means(build_amassed(M), M);
    ExactSum h;
    for (std::int64_t j = 1; j <= M + 1; ++j) h.add(1.0 / static_cast<double>(j));
    const double lower = A * h.value();
    means.push_back(mean.back());
    lower_ok = lower_ok && mean.back() >= lower;
    res.rows.push_back({static_cast<double>(M), mean.back(), lower});
  }
  add_criterion(res, "mean_above_A_times_harmonic", lower_ok, {{"A", A}});

  bool increasing = true;
  bool decade_ok = true;
  json steps = json::array();
  for (std::size_t i = 1; i < Ms.size(); ++i) {
    increasing = increasing && means[i] > means[i - 1];
    if (Ms[i] == 10 * Ms[i - 1]) {
      const double step = means[i] - means[i - 1];
      decade_ok = decade_ok && step >= 0.9 * A * std::log(10.0);
      steps.push_back({{"from", Ms[i - 1]}, {"to", Ms[i]}, {"increase", step}});
    }
  }
  add_criterion(res, "mean_increasing_in_M", increasing, json::object());
  add_criterion(res, "decade_increase_at_least_0.9_A_ln10", decade_ok,
                {{"threshold", 0.9 * A * std::log(10.0)}, {"steps", steps}});

  const std::int64_t Mc = std::min<std::int64_t>(100, M_max);
  const Kernel k = build_amassed(Mc);
  const ConditionReport ok = drift_report(k, DriftParams{1.0, 0.0, 2.0, 4.0, 1.0}, Mc);
  add_criterion(res, "drift_condition_a1_J0", ok.pass_c1, to_json(ok));
  add_criterion(res, "moment_condition_p2_V4", ok.pass_c2, to_json(ok));
  const ConditionReport heavy = drift_report(k, DriftParams{1.0, 0.0, 2.5, 4.0, 1.0}, Mc);
  add_criterion(res, "moment_condition_p2.5_V4_fails", !heavy.pass_c2, to_json(heavy));
  finish_criteria(res);
  return res;
}

CommandResult reset_walk_tail(const RunConfig& c, const Runtime&) {
  CommandResult res;
  const double eps = c.epsilon;
  const std::int64_t n_max = c.n_max.value_or(std::int64_t{1} << 20);
  const StationaryLaw st = stationary_reset_walk(eps, n_max);
  const auto pi = [&](std::int64_t n) { return st.law.mass[static_cast<std::size_t>(n)]; };

  std::int64_t lo = std::int64_t{1} << 14, hi = std::int64_t{1} << 19;
  if (n_max < hi) lo = n_max / 64, hi = n_max / 2;
  std::vector<double> lx, ly;
  for (std::int64_t n = lo; n <= hi; ++n) {
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(pi(n)));
  }
  const double slope = ls_slope(lx, ly);
  add_criterion(res, "tail_exponent", std::fabs(slope + (1.0 + eps)) <= 0.05,
                {{"slope", slope}, {"expected", -(1.0 + eps)}, {"range", {lo, hi}}});

  res.columns = {"N", "pi_N", "partial_mean"};
  ExactSum partial;
  std::int64_t next = 1;
  std::vector<double> partials;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    partial.add(static_cast<double>(n) * pi(n));
    if (n == next) {
      res.rows.push_back({static_cast<double>(n), pi(n), partial.value()});
      if (n >= 1024) partials.push_back(partial.value());
      next *= 2;
    }
  }
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < partials.size(); ++i) min_step = std::min(min_step, partials[i] - partials[i - 1]);
  add_criterion(res, "partial_mean_grows_per_doubling", min_step >= 0.05, {{"min_increase", min_step}});

  const double total_low = st.kept_mass + st.tail_low, total_high = st.kept_mass + st.tail_high;
  add_criterion(res, "normalization_bracket_contains_one", total_low <= 1.0 && 1.0 <= total_high,
                {{"low", total_low}, {"high", total_high}});

  const ConditionReport rep = drift_report(build_reset_walk(eps), DriftParams{eps, 0.0, 2.0, 1.0, 1.0}, 200);
  add_criterion(res, "drift_condition_a_eps_J0", rep.pass_c1, to_json(rep));
  finish_criteria(res);
  return res;
}

CommandResult theorem1_stability(const RunConfig& c, const Runtime& rt) {
  CommandResult res;
  DriftWalkSpec spec;
  spec.a = c.params.a;
  spec.J = c.params.J;
  spec.alpha = c.alpha;
  spec.scale = c.scale;
  const DriftWalk walk = build_drift_walk(spec, c.params.p, c.params.r);
  const double bound = theorem1_bound(walk.params);
  const std::int64_t H = c.horizon.value_or(2000);
  const std::uint64_t N = c.trajectories.value_or(100000);
  const auto acc = simulate_reduce(Process{walk.sampler}, sim_options(c, rt, H, N, 1),
                                   PlusMomentAccumulator(H, walk.params.r));
  double worst = -std::numeric_limits<double>::infinity();
  std::int64_t worst_n = 0;
  res.columns = {"n", "mean", "std_error"};
  for (std::int64_t n = 0; n <= H; ++n) {
    const EstimatorResult e = acc.at(static_cast<std::size_t>(n));
    res.rows.push_back({static_cast<double>(n), e.mean, e.std_error});
    const double upper = e.mean + kPassSigmas * e.std_error;
    if (upper > worst) worst = upper, worst_n = n;
  }
  res.result["certified_params"] = to_json(walk.params);
  res.result["theorem1_bound"] = bound;
  add_criterion(res, "max_mean_plus_4se_below_bound", worst <= bound,
                {{"max_upper", worst}, {"at_n", worst_n}, {"bound", bound}, {"trajectories", N}, {"horizon", H}});
  finish_criteria(res);
  return res;
}

CommandResult theorem4_tail(const RunConfig& c, const Runtime& rt) {
  CommandResult res;
  const TwoPointMartingale m = theorem4_martingale();
  const std::uint64_t N = c.trajectories.value_or(1000000);
  const std::vector<std::int64_t> grid{2, 4, 8, 16, 32, 64};
  const std::vector<std::pair<double, double>> pr{{3.0, 1.0}, {2.5, 1.2}};
  res.columns = {"p", "r", "t", "lhs", "std_error", "bound"};
  std::uint64_t stream = 1;
  for (const auto& [p, r] : pr) {
    const double b = m.moment(p);
    const auto rows = verify_theorem4(Process{m.kernel()}, b, p, r, grid, sim_options(c, rt, grid.back(), N, stream++));
    bool all = true;
    json detail = json::array();
    for (const auto& row : rows) {
      all = all && row.pass;
      res.rows.push_back({p, r, static_cast<double>(row.t), row.lhs.mean, row.lhs.std_error, row.bound});
      detail.push_back({{"t", row.t}, {"lhs", row.lhs.mean}, {"std_error", row.lhs.std_error}, {"bound", row.bound}});
    }
    add_criterion(res, "line_crossing_inequality_p" + json(p).dump() + "_r" + json(r).dump(), all,
                  {{"b", b}, {"constant", theorem4_constant(b, p, r)}, {"rows", detail}});
  }
  finish_criteria(res);
  return res;
}

CommandResult lemma_suite(const RunConfig& c, const Runtime& rt) {
  CommandResult res;
  // Fair walk at p = 4: E M_n^4 = 3n^2 - 2n against c_4 L n^2 = 81 n^2.
  double worst_ratio = 0;
  for (std::int64_t n = 1; n <= 10000; ++n) {
    const auto x = static_cast<double>(n);
    worst_ratio = std::max(worst_ratio, (3 * x * x - 2 * x) / (burkholder_constant(4.0) * x * x));
  }
  add_criterion(res, "lp_exact_ratio_at_most_one", worst_ratio <= 1.0, {{"max_ratio", worst_ratio}});

  res.columns = {"lemma", "x", "estimate", "std_error", "bound"};
  const TwoPointMartingale walk = fair_walk();
  const auto lp = verify_lemma_Lp(Process{walk.kernel()}, walk.moment(4.0), 4.0, {10, 100, 1000},
                                  sim_options(c, rt, 1000, c.trajectories.value_or(100000), 1));
  bool agree = true, below = true;
  json detail = json::array();
  for (const auto& row : lp) {
    const auto x = static_cast<double>(row.n);
    const double exact = 3 * x * x - 2 * x;
    agree = agree && std::fabs(row.estimate.mean - exact) <= kPassSigmas * row.estimate.std_error;
    below = below && row.pass;
    res.rows.push_back({7, x, row.estimate.mean, row.estimate.std_error, row.bound});
    detail.push_back({{"n", row.n}, {"estimate", row.estimate.mean}, {"std_error", row.estimate.std_error},
                      {"exact", exact}, {"bound", row.bound}});
  }
  add_criterion(res, "lp_mc_matches_exact_within_4se", agree, detail);
  add_criterion(res, "lp_mc_below_bound", below, detail);

  const TwoPointMartingale heavy = lemma8_martingale();
  const double p = c.params.p;
  const double b = heavy.moment(p);
  const auto tau = verify_lemma_tau(Process{heavy.kernel()}, b, p, {1, 2, 4, 8, 16},
                                    sim_options(c, rt, 16, c.trajectories.value_or(1000000), 2));
  bool tau_ok = true;
  json tdetail = json::array();
  for (const auto& row : tau) {
    tau_ok = tau_ok && row.pass;
    res.rows.push_back({8, row.x, row.estimate.mean, row.estimate.std_error, row.bound});
    tdetail.push_back({{"x", row.x}, {"estimate", row.estimate.mean}, {"std_error", row.estimate.std_error},
                       {"bound", row.bound}});
  }
  add_criterion(res, "hitting_before_crossing_below_bound", tau_ok, {{"p", p}, {"b", b}, {"rows", tdetail}});
  finish_criteria(res);
  return res;
}

CommandResult open_question_sweep(const RunConfig& c, const Runtime&) {
  CommandResult res;
  const std::int64_t H = c.horizon.value_or(2000);
  if (H < 2) throw ParameterError("horizon must be ≥ 2");
  res.columns = {"a", "J", "mean_at_H", "mean_at_H_half", "sup_mean", "drift_condition_holds"};
  for (const double a : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}) {
    const Kernel k = build_positive_part_walk(a);
    const std::vector<double> mean = exact_means(k, H);
    const double J = std::floor(a);
    const ConditionReport rep = drift_report(k, DriftParams{a, J, 2.0, 1.0, 1.0}, std::min<std::int64_t>(H, 200));
    res.rows.push_back({a, J, mean.back(), mean[static_cast<std::size_t>(H / 2)],
                        *std::max_element(mean.begin(), mean.end()), rep.pass_c1 ? 1.0 : 0.0});
  }
  res.result["horizon"] = H;
  return res;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sudan-growth",        "amassed-growth", "reset-walk-tail",
                                              "theorem1-stability",  "theorem4-tail",  "lemma-suite",
                                              "open-question-sweep"};
  return names;
}

CommandResult run_experiment(const RunConfig& c, const Runtime& rt) {
  CommandResult res;
  const std::string& name = c.experiment;
  if (name == "sudan-growth") res = sudan_growth(c, rt);
  else if (name == "amassed-growth") res = amassed_growth(c, rt);
  else if (name == "reset-walk-tail") res = reset_walk_tail(c, rt);
  else if (name == "theorem1-stability") res = theorem1_stability(c, rt);
  else if (name == "theorem4-tail") res = theorem4_tail(c, rt);
  else if (name == "lemma-suite") res = lemma_suite(c, rt);
  else if (name == "open-question-sweep") res = open_question_sweep(c, rt);
  else throw ParameterError("unknown experiment '" + name + "'");
  res.result["experiment"] = name;
  return res;
}

}  // namespace driftbound::app
