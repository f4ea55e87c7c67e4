#include "driftbound/stop_times.hpp"

#include <algorithm>

namespace driftbound {

std::optional<std::size_t> StopTimes::hitting_time(double x) const {
  const auto it = std::lower_bound(records.begin(), records.end(), x,
                                   [](const auto& rec, double level) { return rec.first < level; });
  if (it == records.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> line_crossing_time(const std::vector<double>& values) {
  for (std::size_t n = 1; n < values.size(); ++n) {
    if (values[n] <= static_cast<double>(n)) return n;
  }
  return std::nullopt;
}

StopTimes compute_stop_times(const Trajectory& traj, const DriftParams& params, double t_ref) {
  StopTimes st;
  st.t_ref = t_ref;
  const auto& v = traj.values;
  if (v.empty()) return st;

  const double jump = t_ref / 4.0;
  st.records.emplace_back(v[0], 0);
  if (v[0] <= params.J) st.last_visit = 0;
  for (std::size_t n = 1; n < v.size(); ++n) {
    const auto nd = static_cast<double>(n);
    if (!st.tau && v[n] <= nd) st.tau = n;
    if (!st.sigma && (v[n] - params.J) / params.a <= nd) st.sigma = n;
    if (!st.first_large_jump && v[n] - v[n - 1] >= jump) st.first_large_jump = n - 1;
    if (v[n] <= params.J) st.last_visit = n;
    if (v[n] > st.records.back().first) st.records.emplace_back(v[n], n);
  }
  return st;
}

}  // namespace driftbound
