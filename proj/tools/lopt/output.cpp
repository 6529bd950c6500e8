#include "output.hpp"

#include "lopt/errors.hpp"
#include "lopt/version.hpp"

#include <cmath>
#include <ostream>

namespace lopt::cli {

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw InvalidArgument("format must be csv or json, got '" + text + "'");
}

std::string extension(Format f) { return f == Format::Csv ? "csv" : "json"; }

void write_csv(std::ostream& os, const Provenance& p, const Table& t) {
  os << "# artifact: latticeoptics " << version << '\n';
  os << "# experiment: " << p.experiment << '\n';
  os << "# config: " << p.config.dump() << '\n';
  for (const auto& [k, v] : p.resolved) os << "# resolved." << k << ": " << v << '\n';
  if (p.timestamp) os << "# timestamp: " << *p.timestamp << '\n';
  lopt::write_csv(os, t);
}

nlohmann::ordered_json cell_to_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d == 0.0 ? 0.0 : *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

void write_json(std::ostream& os, const Provenance& p, const Table& t) {
  nlohmann::ordered_json j;
  auto& prov = j["provenance"];
  prov["artifact"] = std::string("latticeoptics ") + version;
  prov["experiment"] = p.experiment;
  prov["config"] = p.config;
  prov["resolved"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : p.resolved) prov["resolved"][k] = v;
  if (p.timestamp) prov["timestamp"] = *p.timestamp;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
  j["columns"] = t.columns;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = cell_to_json(r[i]);
    rows.push_back(std::move(o));
  }
  os << j.dump(2) << '\n';
}

} // namespace lopt::cli
