#include "grid.hpp"

#include "lopt/calibrate.hpp"
#include "lopt/errors.hpp"
#include "lopt/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lopt::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw InvalidArgument("empty grid");
  std::vector<double> out;
  if (text.find(',') != std::string::npos) {
    for (const auto& p : split(text, ',')) out.push_back(parse_number(p));
    return out;
  }
  const auto parts = split(text, ':');
  if (parts.size() > 3) throw InvalidArgument("grid '" + text + "': expected start:stop[:step]");
  const double start = parse_number(parts[0]);
  if (parts.size() == 1) return {start};
  const double stop = parse_number(parts[1]);
  const double step = parts.size() == 3 ? parse_number(parts[2]) : 1.0;
  if (!(step > 0) || !std::isfinite(step)) throw InvalidArgument("grid '" + text + "': step must be positive");
  if (!(stop >= start)) throw InvalidArgument("grid '" + text + "': stop lies below start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (n > 10'000'000) throw InvalidArgument("grid '" + text + "': too many points");
  // 12 significant digits keep decimal grids on their decimal values (54.3, not 54.300000000000004)
  char buf[32];
  for (long i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
    out.push_back(parse_number(buf));
  }
  return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) {
    if (v != std::round(v) || std::abs(v) > 1e9)
      throw InvalidArgument("grid '" + text + "': integer values required");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::optional<double> parse_auto(const std::string& text, const char* what) {
  if (text == "auto") return std::nullopt;
  try {
    return parse_number(text);
  } catch (const InvalidArgument&) {
    throw InvalidArgument(std::string(what) + ": expected 'auto' or a number, got '" + text + "'");
  }
}

ResolvedScheme resolve_scheme(const std::string& text, int L) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  ResolvedScheme r;
  if (name == "uniform") {
    if (!args.empty()) throw InvalidArgument("scheme 'uniform' takes no values");
    r.scheme = Uniform{};
  } else if (name == "optimal") {
    if (args.empty()) {
      r.scheme = optimize_boundary_couplings(L, BoundaryVariant::OneCoupling).scheme;
      r.optimized = true;
    } else {
      r.scheme = Optimal{parse_number(args)};
    }
  } else if (name == "double-optimal" || name == "double_optimal") {
    if (args.empty()) {
      r.scheme = optimize_boundary_couplings(L, BoundaryVariant::TwoCoupling).scheme;
      r.optimized = true;
    } else {
      const auto v = split(args, ',');
      if (v.size() != 2) throw InvalidArgument("scheme 'double-optimal' needs two values x1,x2");
      r.scheme = DoubleOptimal{parse_number(v[0]), parse_number(v[1])};
    }
  } else {
    throw InvalidArgument("unknown scheme '" + text + "' (uniform | optimal[:x] | double-optimal[:x1,x2])");
  }
  if (const auto* o = std::get_if<Optimal>(&r.scheme)) r.text = "optimal:" + format_number(o->x);
  else if (const auto* d = std::get_if<DoubleOptimal>(&r.scheme))
    r.text = "double-optimal:" + format_number(d->x1) + "," + format_number(d->x2);
  else r.text = "uniform";
  return r;
}

} // namespace lopt::cli
