#pragma once

#include "lopt/table.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lopt::cli {

struct Provenance {
  std::string experiment;
  nlohmann::ordered_json config; // every option of the run with its final value
  std::vector<std::pair<std::string, std::string>> resolved; // values chosen at run time
  std::optional<std::string> timestamp;
};

enum class Format { Csv, Json };

Format parse_format(const std::string& text);
std::string extension(Format f);

// CSV: '# ' header lines (provenance, then table metadata), column row, data.
void write_csv(std::ostream& os, const Provenance& p, const Table& t);
// JSON: {"provenance", "metadata", "columns", "rows"} with rows as objects.
void write_json(std::ostream& os, const Provenance& p, const Table& t);

nlohmann::ordered_json cell_to_json(const Cell& c);

} // namespace lopt::cli
