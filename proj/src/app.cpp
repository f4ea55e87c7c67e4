#include "driftbound/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "app_internal.hpp"
#include "driftbound/bounds.hpp"
#include "driftbound/errors.hpp"
#include "driftbound/rng.hpp"

namespace driftbound::app {

using nlohmann::json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

}  // namespace

json RunConfig::to_json() const {
  return json{
      {"command", command},
      {"experiment", experiment},
      {"chain", {{"name", chain}, {"M", opt(M)}, {"windows", windows}, {"epsilon", epsilon},
                 {"alpha", alpha}, {"scale", scale}}},
      {"params", {{"a", params.a}, {"J", params.J}, {"p", params.p}, {"V", params.V}, {"r", params.r}}},
      {"b", b},
      {"V_prime", opt(V_prime)},
      {"t", opt(t)},
      {"n", opt(n)},
      {"x0", opt(x0)},
      {"t_max", t_max},
      {"horizon", opt(horizon)},
      {"trajectories", opt(trajectories)},
      {"seed", seed},
      {"n_max", opt(n_max)},
      {"condition", condition},
      {"Z", opt(Z)},
      {"strict", strict},
      {"breakdown", breakdown},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  read(j, "command", c.command);
  read(j, "experiment", c.experiment);
  if (auto ch = j.find("chain"); ch != j.end()) {
    read(*ch, "name", c.chain);
    read_opt(*ch, "M", c.M);
    read(*ch, "windows", c.windows);
    read(*ch, "epsilon", c.epsilon);
    read(*ch, "alpha", c.alpha);
    read(*ch, "scale", c.scale);
  }
  if (auto p = j.find("params"); p != j.end()) {
    read(*p, "a", c.params.a);
    read(*p, "J", c.params.J);
    read(*p, "p", c.params.p);
    read(*p, "V", c.params.V);
    read(*p, "r", c.params.r);
  }
  read(j, "b", c.b);
  read_opt(j, "V_prime", c.V_prime);
  read_opt(j, "t", c.t);
  read_opt(j, "n", c.n);
  read_opt(j, "x0", c.x0);
  read(j, "t_max", c.t_max);
  read_opt(j, "horizon", c.horizon);
  read_opt(j, "trajectories", c.trajectories);
  read(j, "seed", c.seed);
  read_opt(j, "n_max", c.n_max);
  read(j, "condition", c.condition);
  read_opt(j, "Z", c.Z);
  read(j, "strict", c.strict);
  read(j, "breakdown", c.breakdown);
  return c;
}

namespace detail {

ChainSetup make_chain(const RunConfig& c) {
  const std::string& name = c.chain;
  if (name == "sudan") return {build_sudan(), std::nullopt};
  if (name == "amassed") return {build_amassed(c.M.value_or(100)), std::nullopt};
  if (name == "amassed-concat") {
    if (c.windows.empty()) throw ParameterError("amassed-concat needs --windows");
    return {build_amassed_concat(c.windows), std::nullopt};
  }
  if (name == "resetwalk") return {build_reset_walk(c.epsilon), std::nullopt};
  if (name == "positivewalk") return {build_positive_part_walk(c.params.a), std::nullopt};
  if (name == "theorem4-martingale") return {theorem4_martingale().kernel(), std::nullopt};
  if (name == "lemma8-martingale") return {lemma8_martingale().kernel(), std::nullopt};
  if (name == "fairwalk") return {fair_walk().kernel(), std::nullopt};
  if (name == "driftwalk") {
    DriftWalkSpec spec;
    spec.a = c.params.a;
    spec.J = c.params.J;
    spec.alpha = c.alpha;
    spec.scale = c.scale;
    DriftWalk w = build_drift_walk(spec, c.params.p, c.params.r);
    return {std::move(w.sampler), w.params};
  }
  throw ParameterError("unknown chain '" + name + "'");
}

Kernel make_kernel(const RunConfig& c) {
  ChainSetup s = make_chain(c);
  if (auto* k = std::get_if<Kernel>(&s.process)) return *k;
  throw ParameterError("chain '" + c.chain + "' has no integer kernel");
}

std::int64_t natural_horizon(const RunConfig& c, std::int64_t fallback) {
  if (c.chain == "amassed") return c.M.value_or(100);
  if (c.chain == "amassed-concat") {
    std::int64_t total = 0;
    for (auto w : c.windows) total += w;
    return total;
  }
  return fallback;
}

SimOptions sim_options(const RunConfig& c, const Runtime& rt, std::int64_t horizon, std::uint64_t n_traj,
                       std::uint64_t stream) {
  SimOptions o;
  o.horizon = horizon;
  o.n_traj = n_traj;
  o.master_seed = derive_stream(c.seed, stream);
  o.workers = rt.workers;
  o.params = c.params;
  return o;
}

json to_json(const EstimatorResult& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_samples", e.n_samples},
          {"ci_low", e.ci_low}, {"ci_high", e.ci_high}};
}

json to_json(const DriftParams& p) { return {{"a", p.a}, {"J", p.J}, {"p", p.p}, {"V", p.V}, {"r", p.r}}; }

json to_json(const BoundBreakdown& b) {
  return {{"p", b.p},
          {"V", b.V},
          {"r", b.r},
          {"c_p", b.c_p},
          {"B", b.B},
          {"b", b.b},
          {"c_prime", b.c_prime},
          {"C_prime", b.C_prime},
          {"c_2", b.c_2},
          {"c_3", b.c_3},
          {"zeta_p_half", b.zeta_p_half},
          {"c_4", b.c_4},
          {"K", b.K},
          {"zeta_p_minus_r", b.zeta_p_minus_r},
          {"c_final", b.c_final}};
}

namespace {
json witness(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  return {{"time", w->time}, {"state", w->state}, {"value", w->value}};
}
}  // namespace

json to_json(const ConditionReport& r) {
  return {{"params", to_json(r.params)},
          {"horizon", r.horizon},
          {"truncated", r.truncated},
          {"states_checked", r.states_checked},
          {"drift_states_checked", r.drift_states_checked},
          {"max_drift", witness(r.max_drift)},
          {"max_moment", witness(r.max_moment)},
          {"first_drift_violation", witness(r.first_drift_violation)},
          {"first_moment_violation", witness(r.first_moment_violation)},
          {"pass_c1", r.pass_c1},
          {"pass_c2", r.pass_c2}};
}

void add_criterion(CommandResult& res, const std::string& name, bool pass, json detail) {
  res.result["criteria"].push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
}

void finish_criteria(CommandResult& res) {
  bool all = true;
  for (const auto& c : res.result["criteria"]) all = all && c["pass"].get<bool>();
  res.result["pass"] = all;
  res.exit_code = all ? kExitOk : kExitAssertion;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace detail

namespace {

using namespace detail;

CommandResult cmd_bound(const RunConfig& c) {
  CommandResult res;
  const DriftParams& p = c.params;
  if (auto bad = validate_params(p); !bad.empty()) throw ParameterError(join_violations(bad));
  const double v_norm = p.V / std::pow(p.a, p.p);
  const BoundBreakdown bd = theorem1_constants(p.p, v_norm, p.r);
  res.result["c_final"] = theorem1_bound(p);
  res.result["normalized_V"] = v_norm;
  if (c.x0) res.result["corollary2"] = corollary2_bound(p, *c.x0);
  if (c.breakdown) res.result["breakdown"] = to_json(bd);
  return res;
}

CommandResult cmd_tailbound(const RunConfig& c) {
  CommandResult res;
  TailBoundParams tp = make_tail_params(c.params);
  if (c.V_prime) tp.V_prime = *c.V_prime;
  const DriftParams& p = c.params;
  const double threshold = p.J + std::pow(p.V, 1.0 / p.p);
  res.result["V_prime"] = tp.V_prime;
  res.result["threshold"] = threshold;
  if (c.t) res.result["tail_probability"] = p4_tail_probability(tp, *c.t, c.n);
  if (p.p > 4) {
    res.result["expectation_bound"] = p4_expectation_bound(tp);
  } else {
    res.result["expectation_bound"] = nullptr;
  }
  res.columns = {"t", "tail_probability"};
  for (int k = 0; k <= 20; ++k) {
    const double t = threshold + std::ldexp(1.0, k);
    res.rows.push_back({t, p4_tail_probability(tp, t, c.n)});
  }
  return res;
}

CommandResult cmd_theorem2(const RunConfig& c) {
  CommandResult res;
  const double p = c.params.p, r = c.params.r;
  const double K = theorem4_constant(c.b, p, r);
  res.result["constant"] = K;
  if (c.breakdown) res.result["breakdown"] = to_json(martingale_constants(c.b, p, r));
  if (c.t_max < 1) throw ParameterError("t_max must be ≥ 1");
  res.columns = {"t", "bound"};
  for (std::int64_t t = 1; t <= c.t_max; ++t)
    res.rows.push_back({static_cast<double>(t), K * std::pow(static_cast<double>(t), r - p)});
  return res;
}

CommandResult cmd_exact(const RunConfig& c) {
  CommandResult res;
  const Kernel k = make_kernel(c);
  const std::int64_t horizon = c.horizon.value_or(natural_horizon(c, 100));
  res.result["chain"] = k.description();
  res.result["horizon"] = horizon;
  res.columns = {"n", "mean", "plus_moment", "plus_moment_upper", "dropped_mass", "support_size"};
  propagate_each(k, DistVector::point(k.initial_state()), horizon, [&](const DistVector& d) {
    ExactSum mean;
    for (std::size_t i = 0; i < d.support.size(); ++i) mean.add(d.mass[i] * static_cast<double>(d.support[i]));
    const MomentResult m = moment(d, c.params.r, true);
    res.rows.push_back({static_cast<double>(d.time), mean.value(), m.value, m.upper(), d.dropped_mass,
                        static_cast<double>(d.support.size())});
  });
  return res;
}

CommandResult cmd_simulate(const RunConfig& c, const Runtime& rt) {
  CommandResult res;
  const ChainSetup s = make_chain(c);
  const std::int64_t horizon = c.horizon.value_or(natural_horizon(c, 100));
  const std::uint64_t n_traj = c.trajectories.value_or(10000);
  res.result["chain"] = describe(s.process);
  res.result["horizon"] = horizon;
  res.result["trajectories"] = n_traj;
  if (s.certified) {
    res.result["certified_params"] = to_json(*s.certified);
    if (theorem1_applicable(*s.certified)) res.result["theorem1_bound"] = theorem1_bound(*s.certified);
  }
  const auto acc =
      simulate_reduce(s.process, sim_options(c, rt, horizon, n_traj, 0), PlusMomentAccumulator(horizon, c.params.r));
  res.columns = {"n", "mean", "std_error", "ci_low", "ci_high"};
  for (std::int64_t n = 0; n <= horizon; ++n) {
    const EstimatorResult e = acc.at(static_cast<std::size_t>(n));
    res.rows.push_back({static_cast<double>(n), e.mean, e.std_error, e.ci_low, e.ci_high});
  }
  return res;
}

CommandResult cmd_verify(const RunConfig& c) {
  CommandResult res;
  const Kernel k = make_kernel(c);
  std::vector<std::string> bad;
  if (!(c.params.a > 0)) bad.emplace_back("a ≤ 0");
  if (!(c.params.V > 0)) bad.emplace_back("V ≤ 0");
  if (!(c.params.p > 0)) bad.emplace_back("p ≤ 0");
  if (!std::isfinite(c.params.J)) bad.emplace_back("J not finite");
  if (!bad.empty()) throw ParameterError(join_violations(bad));
  const std::int64_t horizon = c.horizon.value_or(natural_horizon(c, 1000));
  std::optional<Truncation> trunc;
  if (c.condition == "c2trunc") {
    const double z = c.Z.value_or(-c.params.a);
    if (z > -c.params.a) throw ParameterError("Z > −a");
    trunc = [z](std::int64_t, std::int64_t) { return z; };
    res.result["Z"] = z;
  } else if (c.condition != "c1" && c.condition != "c2") {
    throw ParameterError("unknown condition '" + c.condition + "'");
  }
  const ConditionReport rep = drift_report(k, c.params, horizon, trunc);
  bool pass = rep.pass();
  if (c.condition == "c1") pass = rep.pass_c1;
  if (c.condition == "c2") pass = rep.pass_c2;
  res.result["chain"] = k.description();
  res.result["condition"] = c.condition;
  res.result["report"] = to_json(rep);
  res.result["pass"] = pass;
  res.result["verdict"] = pass ? "PASS" : "FAIL";
  res.exit_code = (!pass && c.strict) ? kExitAssertion : kExitOk;
  return res;
}

CommandResult cmd_stationary(const RunConfig& c) {
  CommandResult res;
  const std::int64_t n_max = c.n_max.value_or(std::int64_t{1} << 20);
  const StationaryLaw st = stationary_reset_walk(c.epsilon, n_max);
  res.result["epsilon"] = c.epsilon;
  res.result["n_max"] = n_max;
  res.result["pi0"] = st.law.mass.at(0);
  res.result["kept_mass"] = st.kept_mass;
  res.result["tail_low"] = st.tail_low;
  res.result["tail_high"] = st.tail_high;
  res.result["bracket_width"] = st.bracket_width();

  std::int64_t lo = n_max / 64, hi = n_max / 2;
  if (n_max >= (std::int64_t{1} << 19)) lo = std::int64_t{1} << 14, hi = std::int64_t{1} << 19;
  std::vector<double> lx, ly;
  for (std::int64_t n = lo; n <= hi; ++n) {
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(st.law.mass[static_cast<std::size_t>(n)]));
  }
  res.result["slope_range"] = {lo, hi};
  res.result["slope"] = ls_slope(lx, ly);

  res.columns = {"N", "pi_N", "partial_mean"};
  ExactSum partial;
  std::int64_t next = 1;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    partial.add(static_cast<double>(n) * st.law.mass[static_cast<std::size_t>(n)]);
    if (n == next) {
      res.rows.push_back({static_cast<double>(n), st.law.mass[static_cast<std::size_t>(n)], partial.value()});
      next *= 2;
    }
  }
  return res;
}

}  // namespace

CommandResult execute(const RunConfig& config, const Runtime& runtime) {
  const std::string& cmd = config.command;
  if (cmd == "bound") return cmd_bound(config);
  if (cmd == "tailbound") return cmd_tailbound(config);
  if (cmd == "theorem2") return cmd_theorem2(config);
  if (cmd == "exact") return cmd_exact(config);
  if (cmd == "simulate") return cmd_simulate(config, runtime);
  if (cmd == "verify") return cmd_verify(config);
  if (cmd == "stationary") return cmd_stationary(config);
  if (cmd == "experiment") return run_experiment(config, runtime);
  throw ParameterError("unknown command '" + cmd + "'");
}

namespace {

void add_params(CLI::App* sub, RunConfig& c) {
  sub->add_option("--p", c.params.p, "moment order p");
  sub->add_option("--a", c.params.a, "drift a");
  sub->add_option("--V", c.params.V, "moment bound V");
  sub->add_option("--J", c.params.J, "drift threshold J");
  sub->add_option("--r", c.params.r, "target moment order r");
}

void add_chain(CLI::App* sub, RunConfig& c) {
  sub->add_option("--chain", c.chain,
                  "sudan | amassed | amassed-concat | resetwalk | positivewalk | driftwalk | "
                  "theorem4-martingale | lemma8-martingale | fairwalk");
  sub->add_option("--M", c.M, "amassing time");
  sub->add_option("--windows", c.windows, "amassing windows (amassed-concat)")->delimiter(',');
  sub->add_option("--epsilon", c.epsilon, "reset walk epsilon");
  sub->add_option("--alpha", c.alpha, "driftwalk tail index");
  sub->add_option("--scale", c.scale, "driftwalk jump scale");
}

void add_run(CLI::App* sub, RunConfig& c) {
  sub->add_option("--horizon", c.horizon, "last time index n");
  sub->add_option("--trajectories", c.trajectories, "number of simulated paths");
  sub->add_option("--seed", c.seed, "master seed");
}

void add_output(CLI::App* sub, Runtime& rt) {
  sub->add_option("--json", rt.json_path, "write the JSON document here instead of stdout");
  sub->add_option("--csv", rt.csv_path, "write the series as CSV");
  sub->add_option("--workers", rt.workers, "worker threads (default: available parallelism)");
}

json error_document(const std::string& kind, const std::string& message) {
  return {{"schema", kSchema}, {"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drift-condition moment bounds, counterexample chains and their verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DRIFTBOUND_BUILD_ID);
  RunConfig c;
  Runtime rt;
  std::string replay_path;

  auto* bound = app.add_subcommand("bound", "uniform moment bound and its constant chain");
  add_params(bound, c);
  bound->add_flag("--breakdown", c.breakdown, "print every intermediate constant");
  bound->add_option("--x0", c.x0, "initial state (adds the overshoot bound)");
  add_output(bound, rt);

  auto* tail = app.add_subcommand("tailbound", "tail-probability and mean bounds for p > 4");
  add_params(tail, c);
  tail->add_option("--Vprime", c.V_prime, "moment bound of the recentered increments");
  tail->add_option("--t", c.t, "level");
  tail->add_option("--n", c.n, "time (finite sum)");
  add_output(tail, rt);

  auto* thm2 = app.add_subcommand("theorem2", "martingale line-crossing constant and bound curve");
  thm2->add_option("--b", c.b, "increment moment bound");
  thm2->add_option("--p", c.params.p);
  thm2->add_option("--r", c.params.r);
  thm2->add_option("--t-max", c.t_max);
  thm2->add_flag("--breakdown", c.breakdown);
  add_output(thm2, rt);

  auto* exact = app.add_subcommand("exact", "exact law propagation");
  add_chain(exact, c);
  add_params(exact, c);
  exact->add_option("--horizon", c.horizon, "last time index n");
  add_output(exact, rt);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of E[(X_n^+)^r]");
  add_chain(sim, c);
  add_params(sim, c);
  add_run(sim, c);
  add_output(sim, rt);

  auto* verify = app.add_subcommand("verify", "exact check of the drift and moment conditions");
  add_chain(verify, c);
  add_params(verify, c);
  verify->add_option("--condition", c.condition, "c1 | c2 | c2trunc")
      ->check(CLI::IsMember({"c1", "c2", "c2trunc"}));
  verify->add_option("--Z", c.Z, "truncation level for c2trunc (default -a)");
  verify->add_option("--horizon", c.horizon, "last time n checked (default: chain-specific)");
  verify->add_flag("--strict", c.strict, "exit 3 on FAIL");
  add_output(verify, rt);

  auto* stat = app.add_subcommand("stationary", "stationary law of the reset walk");
  stat->add_option("--epsilon", c.epsilon);
  stat->add_option("--n-max", c.n_max, "truncation point of the stationary law");
  add_output(stat, rt);

  auto* exp = app.add_subcommand("experiment", "pre-registered experiments");
  exp->add_option("name", c.experiment, "experiment name")->required();
  add_chain(exp, c);
  add_params(exp, c);
  add_run(exp, c);
  exp->add_option("--n-max", c.n_max, "truncation point of the stationary law");
  add_output(exp, rt);

  auto* replay = app.add_subcommand("replay", "re-run the config embedded in an output document");
  replay->add_option("file", replay_path)->required()->check(CLI::ExistingFile);
  add_output(replay, rt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*replay) {
      std::ifstream in(replay_path);
      const json doc = json::parse(in);
      if (!doc.contains("config")) throw ParameterError("document has no config");
      c = RunConfig::from_json(doc.at("config"));
    } else {
      c.command = app.get_subcommands().front()->get_name();
    }
    const auto start = std::chrono::steady_clock::now();
    const CommandResult res = execute(c, rt);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const json doc = make_document(c, res, rt, elapsed);

    if (rt.json_path.empty()) {
      out << doc.dump(2) << '\n';
    } else {
      std::ofstream f(rt.json_path);
      f << doc.dump(2) << '\n';
      if (!f) throw ResourceError("cannot write " + rt.json_path);
    }
    if (!rt.csv_path.empty()) {
      std::ofstream f(rt.csv_path);
      f << to_csv(res);
      if (!f) throw ResourceError("cannot write " + rt.csv_path);
    }
    return res.exit_code;
  } catch (const OverflowError& e) {
    json doc = error_document("overflow", e.what());
    doc["error"]["constant"] = e.constant();
    err << doc.dump(2) << '\n';
    return kExitBadInput;
  } catch (const ParameterError& e) {
    err << error_document("parameter", e.what()).dump(2) << '\n';
    return kExitBadInput;
  } catch (const DomainError& e) {
    err << error_document("domain", e.what()).dump(2) << '\n';
    return kExitBadInput;
  } catch (const ResourceError& e) {
    err << error_document("resource", e.what()).dump(2) << '\n';
    return kExitBadInput;
  } catch (const UnsupportedError& e) {
    err << error_document("unsupported", e.what()).dump(2) << '\n';
    return kExitBadInput;
  } catch (const json::exception& e) {
    err << error_document("config", e.what()).dump(2) << '\n';
    return kExitBadInput;
  }
}

}  // namespace driftbound::app
