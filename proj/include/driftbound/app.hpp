#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftbound/core.hpp"

namespace driftbound::app {

inline constexpr const char* kSchema = "driftbound.output/1";

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitAssertion = 3;

// Everything that determines a run's numeric output. Serialized into every
// output document; replaying it reproduces the run.
struct RunConfig {
  std::string command;
  std::string experiment;

  // chain selection
  std::string chain = "sudan";
  std::optional<std::int64_t> M;
  std::vector<std::int64_t> windows;
  double epsilon = 0.5;
  double alpha = 3.5;
  double scale = 1.0;

  DriftParams params{1.0, 0.0, 3.0, 1.0, 1.0};
  double b = 1.0;                  // theorem2
  std::optional<double> V_prime;   // tailbound
  std::optional<double> t;         // tailbound
  std::optional<std::int64_t> n;   // tailbound
  std::optional<double> x0;        // bound (initial overshoot)
  std::int64_t t_max = 64;

  std::optional<std::int64_t> horizon;
  std::optional<std::uint64_t> trajectories;
  std::uint64_t seed = 20260101;
  std::optional<std::int64_t> n_max;

  std::string condition = "c1";
  std::optional<double> Z;
  bool strict = false;
  bool breakdown = false;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

// Run-time settings that must not influence numeric output.
struct Runtime {
  unsigned workers = 0;
  std::string json_path;
  std::string csv_path;
};

struct CommandResult {
  nlohmann::json result = nlohmann::json::object();
  int exit_code = kExitOk;
  std::vector<std::string> columns;         // CSV projection
  std::vector<std::vector<double>> rows;
};

// Runs one command. Throws ParameterError / DomainError / OverflowError /
// ResourceError on bad input.
CommandResult execute(const RunConfig& config, const Runtime& runtime);

// Experiments (command "experiment").
CommandResult run_experiment(const RunConfig& config, const Runtime& runtime);
const std::vector<std::string>& experiment_names();

// Full output document: schema, build, config, seed, result, series, runtime.
nlohmann::json make_document(const RunConfig& config, const CommandResult& res, const Runtime& runtime,
                             double elapsed_seconds);

// Document with the "runtime" member removed; the comparison set for
// reproducibility checks.
nlohmann::json comparable(const nlohmann::json& document);

std::string to_csv(const CommandResult& res);

// Entry point of the driftbound executable; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace driftbound::app
