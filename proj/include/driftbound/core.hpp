#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "driftbound/rng.hpp"

namespace driftbound {

// Parameters of the drift condition (C1: conditional drift <= -a above J) and
// the moment condition (C2: conditional p-th absolute increment moment <= V),
// plus the target moment order r of the stability bound.
struct DriftParams {
  double a = 1.0;
  double J = 0.0;
  double p = 3.0;
  double V = 1.0;
  double r = 1.0;
};

// Basic invariants every DriftParams must satisfy: a > 0, V > 0, p > 1, r > 0.
std::vector<std::string> check_invariants(const DriftParams& params);

// Violations that prevent the uniform moment bound from applying. Empty iff
// a > 0, V > 0, p > 2 and 0 < r < p - 1.
std::vector<std::string> validate_params(const DriftParams& params);

bool theorem1_applicable(const DriftParams& params);

// Joins violations with "; ".
std::string join_violations(const std::vector<std::string>& violations);

struct Transition {
  std::int64_t next;
  double prob;
};

using Row = std::vector<Transition>;

// Time-inhomogeneous transition law on integer states. Rows are finite
// support lists so the exact engine and the sampler share one object.
class Kernel {
 public:
  using RowFn = std::function<void(std::int64_t n, std::int64_t x, Row& out)>;

  Kernel(std::string description, RowFn row_fn, std::int64_t initial_state = 0);

  // Clears `out` and fills it with the (next, prob) pairs of row (n, x).
  void row(std::int64_t n, std::int64_t x, Row& out) const;
  Row transitions(std::int64_t n, std::int64_t x) const;

  std::int64_t initial_state() const noexcept { return initial_; }
  const std::string& description() const noexcept { return description_; }

  // Draws the next state from row (n, x) using one uniform variate.
  std::int64_t sample(std::int64_t n, std::int64_t x, Rng& rng, Row& scratch) const;

 private:
  std::string description_;
  RowFn row_fn_;
  std::int64_t initial_;
};

// Real-valued process given only through a sampler; not usable by the exact
// engine.
class Sampler {
 public:
  using StepFn = std::function<double(std::int64_t n, double x, Rng& rng)>;

  Sampler(std::string description, StepFn step, double initial_state = 0.0);

  double step(std::int64_t n, double x, Rng& rng) const { return step_(n, x, rng); }
  double initial_state() const noexcept { return initial_; }
  const std::string& description() const noexcept { return description_; }

 private:
  std::string description_;
  StepFn step_;
  double initial_;
};

using Process = std::variant<Kernel, Sampler>;

const std::string& describe(const Process& process);

struct Trajectory {
  std::vector<double> values;
  DriftParams params;
  std::uint64_t seed_id = 0;

  std::size_t horizon() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double increment(std::size_t n) const { return values.at(n + 1) - values.at(n); }
};

}  // namespace driftbound
