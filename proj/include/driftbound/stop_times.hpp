#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "driftbound/core.hpp"

namespace driftbound {

// Stopping times of one path. Unattained times are std::nullopt (the
// infinity marker); every definition only looks at indices <= horizon.
struct StopTimes {
  // tau: first n > 0 with M_n <= n, M being the raw path.
  std::optional<std::size_t> tau;
  // sigma: first n > 0 with Y_n <= n for the normalized path Y = (X - J)/a.
  std::optional<std::size_t> sigma;
  // T: first k >= 0 with increment Delta_k >= t_ref/4.
  std::optional<std::size_t> first_large_jump;
  double t_ref = 0;
  // U: last k <= N with X_k <= J.
  std::optional<std::size_t> last_visit;
  // Running-maximum records (value, time): S_x is the time of the first
  // record whose value is >= x.
  std::vector<std::pair<double, std::size_t>> records;

  // S_x = inf{k : M_k >= x}.
  std::optional<std::size_t> hitting_time(double x) const;
};

StopTimes compute_stop_times(const Trajectory& traj, const DriftParams& params, double t_ref);

// First n > 0 with values[n] <= n.
std::optional<std::size_t> line_crossing_time(const std::vector<double>& values);

}  // namespace driftbound
