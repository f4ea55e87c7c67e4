#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftbound/app.hpp"
#include "driftbound/bounds.hpp"
#include "driftbound/chains.hpp"
#include "driftbound/exact.hpp"
#include "driftbound/montecarlo.hpp"

namespace driftbound::app::detail {

struct ChainSetup {
  Process process;
  std::optional<DriftParams> certified;  // driftwalk only
};

ChainSetup make_chain(const RunConfig& config);
Kernel make_kernel(const RunConfig& config);  // ParameterError for sampler chains

// Horizon over which the chain's kernel is meaningful when none is given
// (amassing chains stop at their last window).
std::int64_t natural_horizon(const RunConfig& config, std::int64_t fallback);

SimOptions sim_options(const RunConfig& config, const Runtime& runtime, std::int64_t horizon,
                       std::uint64_t n_traj, std::uint64_t stream);

nlohmann::json to_json(const EstimatorResult& e);
nlohmann::json to_json(const DriftParams& p);
nlohmann::json to_json(const BoundBreakdown& b);
nlohmann::json to_json(const ConditionReport& r);

// Appends {"name", "pass", "detail"} to result["criteria"].
void add_criterion(CommandResult& res, const std::string& name, bool pass, nlohmann::json detail);
// Sets result["pass"] and the exit code from the criteria list.
void finish_criteria(CommandResult& res);

// Least-squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace driftbound::app::detail
