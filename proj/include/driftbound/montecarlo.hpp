#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "driftbound/core.hpp"
#include "driftbound/exact_sum.hpp"

namespace driftbound {

struct EstimatorResult {
  double mean = 0;
  double std_error = 0;
  std::uint64_t n_samples = 0;
  double ci_low = 0;
  double ci_high = 0;
};

EstimatorResult make_estimate(double mean, double std_error, std::uint64_t n_samples);

// Sample mean with plug-in standard error s/sqrt(n). Sums are exact, so the
// result is independent of the order in which samples and partial
// accumulators are combined.
class MeanAccumulator {
 public:
  void add(double x);
  void merge(const MeanAccumulator& other);
  EstimatorResult result() const;
  std::uint64_t count() const noexcept { return n_; }
  const ExactSum& sum() const noexcept { return sum_; }

 private:
  ExactSum sum_;
  ExactSum sum_sq_;
  std::uint64_t n_ = 0;
};

// Monte Carlo pass rule: estimate - 4 SE <= bound.
inline constexpr double kPassSigmas = 4.0;
bool statistically_below(const EstimatorResult& est, double bound);

struct SimOptions {
  std::int64_t horizon = 1;
  std::uint64_t n_traj = 1;
  std::uint64_t master_seed = 0;
  unsigned workers = 0;  // 0: std::thread::hardware_concurrency()
  std::uint64_t block_size = 4096;
  DriftParams params;  // stamped into every trajectory
};

// A sampler or kernel threw while generating a trajectory.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::uint64_t index, const std::string& what)
      : std::runtime_error("trajectory " + std::to_string(index) + ": " + what), index_(index) {}
  std::uint64_t trajectory_index() const noexcept { return index_; }

 private:
  std::uint64_t index_;
};

// Trajectory `index` of a batch: a pure function of (process, horizon,
// master_seed, index).
void generate_trajectory(const Process& process, std::int64_t horizon, std::uint64_t master_seed,
                         std::uint64_t index, Trajectory& out, Row& scratch);
Trajectory generate_trajectory(const Process& process, std::int64_t horizon,
                               std::uint64_t master_seed, std::uint64_t index);

namespace detail {
// Runs task(block) for block = 0..n_blocks-1 on `workers` threads. The
// exception of the lowest failing block is rethrown.
void run_blocks(std::size_t n_blocks, unsigned workers, const std::function<void(std::size_t)>& task);
unsigned resolve_workers(unsigned workers);
void check_options(const SimOptions& opts);
}  // namespace detail

// Map-reduce over a batch. Acc needs add(const Trajectory&) and
// merge(const Acc&); each fixed-size block of indices is reduced
// sequentially from a copy of `prototype` and blocks are merged in index
// order, so the result does not depend on opts.workers.
template <class Acc>
Acc simulate_reduce(const Process& process, const SimOptions& opts, const Acc& prototype) {
  detail::check_options(opts);
  const std::uint64_t block = opts.block_size;
  const std::size_t n_blocks = static_cast<std::size_t>((opts.n_traj + block - 1) / block);
  std::vector<std::optional<Acc>> partial(n_blocks);
  detail::run_blocks(n_blocks, opts.workers, [&](std::size_t blk) {
    Acc acc = prototype;
    Trajectory traj;
    traj.params = opts.params;
    Row scratch;
    const std::uint64_t begin = blk * block;
    const std::uint64_t end = std::min<std::uint64_t>(opts.n_traj, begin + block);
    for (std::uint64_t i = begin; i < end; ++i) {
      generate_trajectory(process, opts.horizon, opts.master_seed, i, traj, scratch);
      acc.add(traj);
    }
    partial[blk].emplace(std::move(acc));
  });
  Acc total = prototype;
  for (const auto& part : partial) total.merge(*part);
  return total;
}

// Streams every trajectory exactly once, in index order, to `consumer`.
// Generation runs in parallel one wave of blocks at a time.
void simulate_batch(const Process& process, const SimOptions& opts,
                    const std::function<void(const Trajectory&)>& consumer);

// Whole batch in memory; for small batches and tests.
std::vector<Trajectory> simulate_all(const Process& process, const SimOptions& opts);

// Per-time estimator of E[((X_n)^+)^r] for n = 0..horizon.
class PlusMomentAccumulator {
 public:
  PlusMomentAccumulator(std::int64_t horizon, double r);
  void add(const Trajectory& traj);
  void merge(const PlusMomentAccumulator& other);
  EstimatorResult at(std::size_t n) const;
  std::vector<EstimatorResult> results() const;

 private:
  double r_;
  std::vector<MeanAccumulator> per_time_;
};

// ((x)^+)^r with the r = 1 and r = 2 cases computed without pow.
double positive_power(double x, double r);

EstimatorResult estimate_plus_moment(std::span<const Trajectory> trajectories, std::size_t n, double r);

struct Theorem4Row {
  std::int64_t t = 0;
  EstimatorResult lhs;  // E[(M_t^+)^r 1{tau > t}]
  double bound = 0;     // C(b,p,r) t^{r-p}
  bool pass = false;
};

// Martingale line-crossing inequality on a grid of t; simulates up to the
// largest t (opts.horizon is raised if needed).
std::vector<Theorem4Row> verify_theorem4(const Process& martingale, double b, double p, double r,
                                         const std::vector<std::int64_t>& t_grid, SimOptions opts);

struct LemmaLpRow {
  std::int64_t n = 0;
  EstimatorResult estimate;  // E|M_n - M_0|^p
  double bound = 0;          // c_p L n^{p/2}
  bool pass = false;
};

std::vector<LemmaLpRow> verify_lemma_Lp(const Process& martingale, double L, double p,
                                        const std::vector<std::int64_t>& n_grid, SimOptions opts);

struct LemmaTauRow {
  double x = 0;
  EstimatorResult estimate;  // P(tau > S_x)
  double bound = 0;          // C'(p,b) / x^{p/2}
  bool pass = false;
};

// tau > S_x forces S_x <= ceil(x), so a horizon of ceil(max x) decides the
// event exactly; opts.horizon is raised to that if needed.
std::vector<LemmaTauRow> verify_lemma_tau(const Process& martingale, double b, double p,
                                          const std::vector<double>& x_grid, SimOptions opts);

struct DoobParts {
  std::vector<double> martingale;   // M_n, n = 0..N, M_0 = Y_0
  std::vector<double> compensator;  // A_n, A_0 = A_1 = 0
  std::vector<double> means;        // mu_n = E(Y_{n+1} - Y_n | F_n), n = 0..N-1
  std::optional<std::size_t> sigma;  // first n > 0 with Y_n <= n
};

// Y_{n^sigma} = M_n - A_n with A_{n+1} = A_n - mu_n 1{n < sigma} for n >= 1.
// Conditional means come from the kernel. Throws UnsupportedError for
// samplers and ParameterError for non-integer paths.
DoobParts doob_decompose(const Trajectory& traj, const Process& process);

// Y^{(k)}_n = (X_{k+n} - J + n) 1{X_k <= J}, n = 0..N-k.
Trajectory shifted_process(const Trajectory& traj, std::size_t k, double J);

// E[(X_N^+)^r 1{U = k}] for k = 0..N, U the last k <= N with X_k <= J. Paths
// above J throughout go to the overflow column. Column sums reproduce the
// plain estimator bit for bit.
class LastVisitTable {
 public:
  LastVisitTable(std::int64_t N, double J, double r);
  void add(const Trajectory& traj);
  void merge(const LastVisitTable& other);

  std::int64_t N() const noexcept { return N_; }
  std::uint64_t samples() const noexcept { return plain_.count(); }
  double contribution(std::size_t k) const;  // E[(X_N^+)^r 1{U=k}]
  double probability(std::size_t k) const;   // P(U = k)
  double overflow_contribution() const;
  double overflow_probability() const;
  double column_total() const;               // sum of all columns incl. overflow
  EstimatorResult plain() const { return plain_.result(); }

 private:
  std::int64_t N_;
  double J_;
  double r_;
  std::vector<ExactSum> columns_;
  std::vector<std::uint64_t> counts_;
  ExactSum overflow_;
  std::uint64_t overflow_count_ = 0;
  MeanAccumulator plain_;
};

LastVisitTable last_visit_decomposition(std::span<const Trajectory> trajectories, std::int64_t N,
                                        double J, double r);

}  // namespace driftbound
