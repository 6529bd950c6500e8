#pragma once

#include "lopt/chain.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lopt::cli {

// "start:stop[:step]" with inclusive endpoints (step defaults to 1), a comma
// list "a,b,c", or a single value.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_grid(const std::string& text);

// "auto" or a number
std::optional<double> parse_auto(const std::string& text, const char* what);

struct ResolvedScheme {
  CouplingScheme scheme;
  std::string text; // full-precision description, e.g. double_optimal:0.43,0.73
  bool optimized = false;
};

// uniform | optimal[:x] | double-optimal[:x1,x2]; bare engineered names run the
// boundary optimization for the given length.
ResolvedScheme resolve_scheme(const std::string& text, int L);

} // namespace lopt::cli
