#include "driftbound/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "driftbound/bounds.hpp"
#include "driftbound/errors.hpp"
#include "driftbound/stop_times.hpp"

namespace driftbound {

EstimatorResult make_estimate(double mean, double std_error, std::uint64_t n_samples) {
  return EstimatorResult{mean, std_error, n_samples, mean - 1.96 * std_error, mean + 1.96 * std_error};
}

void MeanAccumulator::add(double x) {
  sum_.add(x);
  sum_sq_.add(x * x);
  ++n_;
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
  sum_.merge(other.sum_);
  sum_sq_.merge(other.sum_sq_);
  n_ += other.n_;
}

EstimatorResult MeanAccumulator::result() const {
  if (n_ == 0) return make_estimate(0.0, 0.0, 0);
  const auto n = static_cast<double>(n_);
  const double s = sum_.value();
  const double mean = s / n;
  double se = 0.0;
  if (n_ > 1) {
    const double var = std::max(0.0, sum_sq_.value() / n - mean * mean);
    se = std::sqrt(var / n);
  }
  return make_estimate(mean, se, n_);
}

bool statistically_below(const EstimatorResult& est, double bound) {
  return est.mean - kPassSigmas * est.std_error <= bound;
}

void generate_trajectory(const Process& process, std::int64_t horizon, std::uint64_t master_seed,
                         std::uint64_t index, Trajectory& out, Row& scratch) {
  Rng rng(derive_stream(master_seed, index));
  out.seed_id = index;
  out.values.resize(static_cast<std::size_t>(horizon) + 1);
  try {
    if (const auto* kernel = std::get_if<Kernel>(&process)) {
      std::int64_t x = kernel->initial_state();
      out.values[0] = static_cast<double>(x);
      for (std::int64_t n = 0; n < horizon; ++n) {
        x = kernel->sample(n, x, rng, scratch);
        out.values[static_cast<std::size_t>(n) + 1] = static_cast<double>(x);
      }
    } else {
      const auto& sampler = std::get<Sampler>(process);
      double x = sampler.initial_state();
      out.values[0] = x;
      for (std::int64_t n = 0; n < horizon; ++n) {
        x = sampler.step(n, x, rng);
        out.values[static_cast<std::size_t>(n) + 1] = x;
      }
    }
  } catch (const SimulationError&) {
    throw;
  } catch (const std::exception& e) {
    throw SimulationError(index, e.what());
  }
}

Trajectory generate_trajectory(const Process& process, std::int64_t horizon, std::uint64_t master_seed,
                               std::uint64_t index) {
  Trajectory traj;
  Row scratch;
  generate_trajectory(process, horizon, master_seed, index, traj, scratch);
  return traj;
}

namespace detail {

unsigned resolve_workers(unsigned workers) {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

void check_options(const SimOptions& opts) {
  if (opts.horizon < 1) throw ParameterError("horizon must be ≥ 1");
  if (opts.n_traj < 1) throw ParameterError("trajectory count must be ≥ 1");
  if (opts.block_size < 1) throw ParameterError("block size must be ≥ 1");
}

void run_blocks(std::size_t n_blocks, unsigned workers, const std::function<void(std::size_t)>& task) {
  const unsigned threads = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n_blocks, 1));
  if (threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) task(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_block = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        task(b);
      } catch (...) {
        std::lock_guard lock(mu);
        if (b < failed_block) {
          failed_block = b;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

void simulate_batch(const Process& process, const SimOptions& opts,
                    const std::function<void(const Trajectory&)>& consumer) {
  detail::check_options(opts);
  const std::uint64_t block = opts.block_size;
  const std::uint64_t n_blocks = (opts.n_traj + block - 1) / block;
  const std::uint64_t wave = detail::resolve_workers(opts.workers);
  for (std::uint64_t first = 0; first < n_blocks; first += wave) {
    const std::uint64_t count = std::min(wave, n_blocks - first);
    std::vector<std::vector<Trajectory>> blocks(count);
    detail::run_blocks(count, opts.workers, [&](std::size_t local) {
      const std::uint64_t begin = (first + local) * block;
      const std::uint64_t end = std::min<std::uint64_t>(opts.n_traj, begin + block);
      auto& out = blocks[local];
      out.resize(end - begin);
      Row scratch;
      for (std::uint64_t i = begin; i < end; ++i) {
        auto& traj = out[i - begin];
        traj.params = opts.params;
        generate_trajectory(process, opts.horizon, opts.master_seed, i, traj, scratch);
      }
    });
    for (const auto& b : blocks) {
      for (const auto& traj : b) consumer(traj);
    }
  }
}

std::vector<Trajectory> simulate_all(const Process& process, const SimOptions& opts) {
  std::vector<Trajectory> out;
  out.reserve(opts.n_traj);
  simulate_batch(process, opts, [&](const Trajectory& t) { out.push_back(t); });
  return out;
}

double positive_power(double x, double r) {
  if (!(x > 0.0)) return 0.0;
  if (r == 1.0) return x;
  if (r == 2.0) return x * x;
  return std::pow(x, r);
}

PlusMomentAccumulator::PlusMomentAccumulator(std::int64_t horizon, double r)
    : r_(r), per_time_(static_cast<std::size_t>(horizon) + 1) {}

void PlusMomentAccumulator::add(const Trajectory& traj) {
  const std::size_t n = std::min(per_time_.size(), traj.values.size());
  for (std::size_t i = 0; i < n; ++i) per_time_[i].add(positive_power(traj.values[i], r_));
}

void PlusMomentAccumulator::merge(const PlusMomentAccumulator& other) {
  for (std::size_t i = 0; i < per_time_.size(); ++i) per_time_[i].merge(other.per_time_[i]);
}

EstimatorResult PlusMomentAccumulator::at(std::size_t n) const { return per_time_.at(n).result(); }

std::vector<EstimatorResult> PlusMomentAccumulator::results() const {
  std::vector<EstimatorResult> out;
  out.reserve(per_time_.size());
  for (const auto& acc : per_time_) out.push_back(acc.result());
  return out;
}

EstimatorResult estimate_plus_moment(std::span<const Trajectory> trajectories, std::size_t n, double r) {
  MeanAccumulator acc;
  for (const auto& traj : trajectories) {
    if (n >= traj.values.size()) throw ParameterError("time index beyond trajectory horizon");
    acc.add(positive_power(traj.values[n], r));
  }
  return acc.result();
}

namespace {

std::int64_t max_of(const std::vector<std::int64_t>& grid) {
  if (grid.empty()) throw ParameterError("empty grid");
  const auto m = *std::max_element(grid.begin(), grid.end());
  if (*std::min_element(grid.begin(), grid.end()) < 1) throw ParameterError("grid entries must be ≥ 1");
  return m;
}

struct Theorem4Acc {
  std::vector<std::int64_t> ts;
  double r;
  std::vector<MeanAccumulator> acc;

  void add(const Trajectory& traj) {
    const auto tau = line_crossing_time(traj.values);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto t = static_cast<std::size_t>(ts[i]);
      const bool alive = !tau || *tau > t;
      acc[i].add(alive ? positive_power(traj.values[t], r) : 0.0);
    }
  }
  void merge(const Theorem4Acc& o) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i].merge(o.acc[i]);
  }
};

struct LpAcc {
  std::vector<std::int64_t> ns;
  double p;
  std::vector<MeanAccumulator> acc;

  void add(const Trajectory& traj) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double d = std::fabs(traj.values[static_cast<std::size_t>(ns[i])] - traj.values[0]);
      acc[i].add(p == 2.0 ? d * d : (p == 4.0 ? (d * d) * (d * d) : std::pow(d, p)));
    }
  }
  void merge(const LpAcc& o) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i].merge(o.acc[i]);
  }
};

struct TauAcc {
  std::vector<double> xs;
  std::vector<MeanAccumulator> acc;

  void add(const Trajectory& traj) {
    const auto st = compute_stop_times(traj, DriftParams{}, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto s = st.hitting_time(xs[i]);
      const bool event = s && (!st.tau || *st.tau > *s);
      acc[i].add(event ? 1.0 : 0.0);
    }
  }
  void merge(const TauAcc& o) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i].merge(o.acc[i]);
  }
};

}  // namespace

std::vector<Theorem4Row> verify_theorem4(const Process& martingale, double b, double p, double r,
                                         const std::vector<std::int64_t>& t_grid, SimOptions opts) {
  const double C = theorem4_constant(b, p, r);
  opts.horizon = std::max(opts.horizon, max_of(t_grid));
  const Theorem4Acc proto{t_grid, r, std::vector<MeanAccumulator>(t_grid.size())};
  const auto total = simulate_reduce(martingale, opts, proto);

  std::vector<Theorem4Row> rows;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    Theorem4Row row;
    row.t = t_grid[i];
    row.lhs = total.acc[i].result();
    row.bound = C * std::pow(static_cast<double>(row.t), r - p);
    row.pass = statistically_below(row.lhs, row.bound);
    rows.push_back(row);
  }
  return rows;
}

std::vector<LemmaLpRow> verify_lemma_Lp(const Process& martingale, double L, double p,
                                        const std::vector<std::int64_t>& n_grid, SimOptions opts) {
  const double cp = burkholder_constant(p);
  opts.horizon = std::max(opts.horizon, max_of(n_grid));
  const LpAcc proto{n_grid, p, std::vector<MeanAccumulator>(n_grid.size())};
  const auto total = simulate_reduce(martingale, opts, proto);

  std::vector<LemmaLpRow> rows;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    LemmaLpRow row;
    row.n = n_grid[i];
    row.estimate = total.acc[i].result();
    row.bound = cp * L * std::pow(static_cast<double>(row.n), p / 2.0);
    row.pass = statistically_below(row.estimate, row.bound);
    rows.push_back(row);
  }
  return rows;
}

std::vector<LemmaTauRow> verify_lemma_tau(const Process& martingale, double b, double p,
                                          const std::vector<double>& x_grid, SimOptions opts) {
  if (x_grid.empty()) throw ParameterError("empty grid");
  const double Cp = hitting_constant(p, b);
  const double xmax = *std::max_element(x_grid.begin(), x_grid.end());
  opts.horizon = std::max<std::int64_t>(opts.horizon, static_cast<std::int64_t>(std::ceil(std::max(xmax, 1.0))));
  const TauAcc proto{x_grid, std::vector<MeanAccumulator>(x_grid.size())};
  const auto total = simulate_reduce(martingale, opts, proto);

  std::vector<LemmaTauRow> rows;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    LemmaTauRow row;
    row.x = x_grid[i];
    row.estimate = total.acc[i].result();
    row.bound = Cp / std::pow(row.x, p / 2.0);
    row.pass = statistically_below(row.estimate, row.bound);
    rows.push_back(row);
  }
  return rows;
}

DoobParts doob_decompose(const Trajectory& traj, const Process& process) {
  const auto* kernel = std::get_if<Kernel>(&process);
  if (!kernel) throw UnsupportedError("Doob decomposition needs exact conditional means; samplers are not supported");
  const auto& y = traj.values;
  if (y.empty()) throw ParameterError("empty trajectory");
  for (double v : y) {
    if (v != std::round(v) || std::fabs(v) > 9.0e15) throw ParameterError("Doob decomposition needs an integer-valued path");
  }

  const std::size_t N = y.size() - 1;
  DoobParts out;
  out.sigma = line_crossing_time(y);
  out.means.resize(N);
  Row row;
  for (std::size_t n = 0; n < N; ++n) {
    const auto x = static_cast<std::int64_t>(y[n]);
    kernel->row(static_cast<std::int64_t>(n), x, row);
    double mu = 0.0;
    for (const auto& tr : row) mu += tr.prob * static_cast<double>(tr.next - x);
    out.means[n] = mu;
  }

  out.compensator.assign(N + 1, 0.0);
  for (std::size_t n = 1; n < N; ++n) {
    const bool active = !out.sigma || n < *out.sigma;
    out.compensator[n + 1] = out.compensator[n] - (active ? out.means[n] : 0.0);
  }
  out.martingale.resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    const std::size_t stopped = out.sigma ? std::min(n, *out.sigma) : n;
    out.martingale[n] = y[stopped] + out.compensator[n];
  }
  return out;
}

Trajectory shifted_process(const Trajectory& traj, std::size_t k, double J) {
  if (k >= traj.values.size()) throw ParameterError("shift index beyond trajectory");
  Trajectory out;
  out.params = traj.params;
  out.seed_id = traj.seed_id;
  const std::size_t len = traj.values.size() - k;
  out.values.assign(len, 0.0);
  if (traj.values[k] <= J) {
    for (std::size_t n = 0; n < len; ++n) out.values[n] = traj.values[k + n] - J + static_cast<double>(n);
  }
  return out;
}

LastVisitTable::LastVisitTable(std::int64_t N, double J, double r)
    : N_(N), J_(J), r_(r), columns_(static_cast<std::size_t>(N) + 1), counts_(static_cast<std::size_t>(N) + 1, 0) {
  if (N < 0) throw ParameterError("N must be ≥ 0");
}

void LastVisitTable::add(const Trajectory& traj) {
  const auto N = static_cast<std::size_t>(N_);
  if (traj.values.size() <= N) throw ParameterError("trajectory shorter than N");
  const double v = positive_power(traj.values[N], r_);
  plain_.add(v);
  for (std::size_t k = N + 1; k-- > 0;) {
    if (traj.values[k] <= J_) {
      columns_[k].add(v);
      ++counts_[k];
      return;
    }
  }
  overflow_.add(v);
  ++overflow_count_;
}

void LastVisitTable::merge(const LastVisitTable& other) {
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    columns_[k].merge(other.columns_[k]);
    counts_[k] += other.counts_[k];
  }
  overflow_.merge(other.overflow_);
  overflow_count_ += other.overflow_count_;
  plain_.merge(other.plain_);
}

double LastVisitTable::contribution(std::size_t k) const {
  return samples() ? columns_.at(k).value() / static_cast<double>(samples()) : 0.0;
}

double LastVisitTable::probability(std::size_t k) const {
  return samples() ? static_cast<double>(counts_.at(k)) / static_cast<double>(samples()) : 0.0;
}

double LastVisitTable::overflow_contribution() const {
  return samples() ? overflow_.value() / static_cast<double>(samples()) : 0.0;
}

double LastVisitTable::overflow_probability() const {
  return samples() ? static_cast<double>(overflow_count_) / static_cast<double>(samples()) : 0.0;
}

double LastVisitTable::column_total() const {
  if (!samples()) return 0.0;
  ExactSum all;
  for (const auto& c : columns_) all.merge(c);
  all.merge(overflow_);
  return all.value() / static_cast<double>(samples());
}

LastVisitTable last_visit_decomposition(std::span<const Trajectory> trajectories, std::int64_t N, double J,
                                        double r) {
  LastVisitTable table(N, J, r);
  for (const auto& t : trajectories) table.add(t);
  return table;
}

}  // namespace driftbound
