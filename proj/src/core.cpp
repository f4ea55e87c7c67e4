#include "driftbound/core.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace driftbound {

std::vector<std::string> check_invariants(const DriftParams& params) {
  std::vector<std::string> out;
  if (!(params.a > 0)) out.emplace_back("a ≤ 0");
  if (!(params.V > 0)) out.emplace_back("V ≤ 0");
  if (!(params.p > 1)) out.emplace_back("p ≤ 1");
  if (!(params.r > 0)) out.emplace_back("r ≤ 0");
  if (!std::isfinite(params.J)) out.emplace_back("J not finite");
  return out;
}

std::vector<std::string> validate_params(const DriftParams& params) {
  std::vector<std::string> out;
  if (!(params.a > 0)) out.emplace_back("a ≤ 0");
  if (!(params.V > 0)) out.emplace_back("V ≤ 0");
  if (!std::isfinite(params.V)) out.emplace_back("V not finite");
  if (!std::isfinite(params.J)) out.emplace_back("J not finite");
  if (!(params.p > 2)) out.emplace_back("p ≤ 2");
  if (!(params.r > 0)) out.emplace_back("r ≤ 0");
  if (!(params.r < params.p - 1)) out.emplace_back("r ≥ p−1");
  return out;
}

bool theorem1_applicable(const DriftParams& params) { return validate_params(params).empty(); }

std::string join_violations(const std::vector<std::string>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

Kernel::Kernel(std::string description, RowFn row_fn, std::int64_t initial_state)
    : description_(std::move(description)), row_fn_(std::move(row_fn)), initial_(initial_state) {
  if (!row_fn_) throw std::invalid_argument("Kernel: empty row function");
}

void Kernel::row(std::int64_t n, std::int64_t x, Row& out) const {
  out.clear();
  row_fn_(n, x, out);
}

Row Kernel::transitions(std::int64_t n, std::int64_t x) const {
  Row out;
  row(n, x, out);
  return out;
}

std::int64_t Kernel::sample(std::int64_t n, std::int64_t x, Rng& rng, Row& scratch) const {
  row(n, x, scratch);
  if (scratch.size() == 1) {
    // Single-entry rows still consume a draw so stream positions only depend on time.
    (void)rng.uniform();
    return scratch.front().next;
  }
  double u = rng.uniform();
  for (const auto& tr : scratch) {
    if (u < tr.prob) return tr.next;
    u -= tr.prob;
  }
  // u landed in the rounding slack of the row sum; take the last positive entry.
  for (auto it = scratch.rbegin(); it != scratch.rend(); ++it) {
    if (it->prob > 0) return it->next;
  }
  throw std::runtime_error("Kernel::sample: empty row at n=" + std::to_string(n) +
                           " x=" + std::to_string(x));
}

Sampler::Sampler(std::string description, StepFn step, double initial_state)
    : description_(std::move(description)), step_(std::move(step)), initial_(initial_state) {
  if (!step_) throw std::invalid_argument("Sampler: empty step function");
}

const std::string& describe(const Process& process) {
  return std::visit([](const auto& p) -> const std::string& { return p.description(); }, process);
}

}  // namespace driftbound
