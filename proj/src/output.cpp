#include <charconv>
#include <cmath>
#include <sstream>

#include "driftbound/app.hpp"
#include "driftbound/montecarlo.hpp"

namespace driftbound::app {

using nlohmann::json;

namespace {

// Shortest text that parses back to the same double, like the JSON writer.
std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

json make_document(const RunConfig& config, const CommandResult& res, const Runtime& runtime,
                   double elapsed_seconds) {
  json doc;
  doc["schema"] = kSchema;
  doc["build"] = DRIFTBOUND_BUILD_ID;
  doc["command"] = config.command;
  doc["seed"] = config.seed;
  doc["config"] = config.to_json();
  doc["result"] = res.result;
  if (!res.columns.empty()) doc["series"] = {{"columns", res.columns}, {"rows", res.rows}};
  doc["exit_code"] = res.exit_code;
  doc["runtime"] = {{"workers", driftbound::detail::resolve_workers(runtime.workers)},
                    {"elapsed_seconds", elapsed_seconds},
                    {"json_path", runtime.json_path},
                    {"csv_path", runtime.csv_path}};
  return doc;
}

json comparable(const json& document) {
  json out = document;
  out.erase("runtime");
  return out;
}

std::string to_csv(const CommandResult& res) {
  std::ostringstream os;
  for (std::size_t i = 0; i < res.columns.size(); ++i) os << (i ? "," : "") << res.columns[i];
  os << '\n';
  for (const auto& row : res.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << number(row[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace driftbound::app
