#include "lopt/chain.hpp"
#include "lopt/errors.hpp"
#include "lopt/table.hpp"

#include <map>
#include <sstream>

namespace lopt {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto comma = s.find(',', pos);
    out.push_back(parse_number(s.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string trim(std::string s) {
  const char* ws = " \t\r";
  s.erase(0, s.find_first_not_of(ws));
  auto end = s.find_last_not_of(ws);
  s.erase(end == std::string::npos ? 0 : end + 1);
  return s;
}

std::vector<double> scheme_params(const CouplingScheme& s) {
  return std::visit(overloaded{[](const Uniform&) { return std::vector<double>{}; },
                               [](const Optimal& o) { return std::vector<double>{o.x}; },
                               [](const DoubleOptimal& o) {
                                 return std::vector<double>{o.x1, o.x2};
                               },
                               [](const CustomCouplings& c) { return c.couplings; }},
                    s);
}

std::vector<double> profile_params(const PotentialProfile& p) {
  return std::visit(
      overloaded{[](const CenterImpurity& x) { return std::vector<double>{x.beta}; },
                 [](const CouplingImpurity& x) { return std::vector<double>{x.eta}; },
                 [](const Step& x) { return std::vector<double>{x.gamma_r}; },
                 [](const GaussianImpurity& x) { return std::vector<double>{x.beta, x.sigma}; },
                 [](const Walls& x) { return std::vector<double>{x.beta_walls}; },
                 [](const Harmonic& x) { return std::vector<double>{x.omega}; }},
      p);
}

void expect_count(const std::string& what, const std::vector<double>& v, std::size_t n) {
  if (v.size() != n)
    throw InvalidArgument(what + " expects " + std::to_string(n) + " parameter(s), got " +
                          std::to_string(v.size()));
}

CouplingScheme make_scheme(const std::string& name, const std::vector<double>& v) {
  if (name == "uniform") {
    expect_count(name, v, 0);
    return Uniform{};
  }
  if (name == "optimal") {
    expect_count(name, v, 1);
    return Optimal{v[0]};
  }
  if (name == "double_optimal") {
    expect_count(name, v, 2);
    return DoubleOptimal{v[0], v[1]};
  }
  if (name == "custom") return CustomCouplings{v};
  throw InvalidArgument("unknown coupling scheme '" + name + "'");
}

PotentialProfile make_profile(const std::string& kind, const std::vector<double>& v) {
  if (kind == "gaussian") {
    expect_count(kind, v, 2);
    return GaussianImpurity{v[0], v[1]};
  }
  expect_count(kind, v, 1);
  if (kind == "center_impurity") return CenterImpurity{v[0]};
  if (kind == "coupling_impurity") return CouplingImpurity{v[0]};
  if (kind == "step") return Step{v[0]};
  if (kind == "walls") return Walls{v[0]};
  if (kind == "harmonic") return Harmonic{v[0]};
  throw InvalidArgument("unknown profile kind '" + kind + "'");
}

} // namespace

std::string to_config(const ChainRecipe& r) {
  std::ostringstream os;
  os << "length = " << r.length << '\n';
  os << "scheme = " << scheme_name(r.scheme) << '\n';
  os << "scheme_params = " << join(scheme_params(r.scheme)) << '\n';
  for (std::size_t i = 0; i < r.profiles.size(); ++i) {
    os << "profiles[" << i << "].kind = " << profile_name(r.profiles[i]) << '\n';
    os << "profiles[" << i << "].params = " << join(profile_params(r.profiles[i])) << '\n';
  }
  return os.str();
}

ChainRecipe recipe_from_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second)
      throw InvalidArgument("config: duplicate key '" + key + "'");
  }

  ChainRecipe r;
  auto take = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument("config: missing key '" + key + "'");
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  const double len = parse_number(take("length"));
  if (len != static_cast<int>(len)) throw InvalidArgument("config: length must be an integer");
  r.length = static_cast<int>(len);
  const auto scheme = take("scheme");
  std::vector<double> sp;
  if (kv.count("scheme_params")) sp = split_numbers(take("scheme_params"));
  r.scheme = make_scheme(scheme, sp);

  for (std::size_t i = 0;; ++i) {
    const std::string base = "profiles[" + std::to_string(i) + "]";
    if (!kv.count(base + ".kind")) break;
    auto kind = take(base + ".kind");
    auto params = split_numbers(take(base + ".params"));
    r.profiles.push_back(make_profile(kind, params));
  }
  if (!kv.empty()) throw InvalidArgument("config: unknown key '" + kv.begin()->first + "'");
  return r;
}

} // namespace lopt
