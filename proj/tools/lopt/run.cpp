#include "run.hpp"

#include "commands.hpp"
#include "output.hpp"

#include "lopt/errors.hpp"
#include "lopt/table.hpp"
#include "lopt/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace lopt::cli {

namespace {

struct ConfigError : Error {
  using Error::Error;
};

struct Common {
  std::string out;
  std::string format = "csv";
  int workers = 1;
  bool timestamp = false;
};

struct Experiments {
  RtCurveOptions rt;
  CalibrateOptions cal;
  CorrelationMapOptions corr;
  HomOptions hom;
  BunchingCliOptions bunch;
  WeakUOptions weak;
  MachZehnderOptions mz;
  CmTableOptions cm;
  AnalyticCheckOptions check;
  ImperfectionsOptions imp;
  ThreeBodyOptions three;
};

using Handler = std::function<CommandResult(int workers)>;

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "output file ('-' for stdout); default $LOPT_OUTPUT_DIR/<experiment>.<format>");
  sub->add_option("--format", c.format, "csv | json");
  sub->add_option("--workers", c.workers, "parallel grid workers (0 = all cores)");
  sub->add_flag("--timestamp", c.timestamp, "stamp the header with the UTC run time");
}

void add_pair_options(CLI::App* sub, PairOptions& o) {
  sub->add_option("--L", o.L, "chain length");
  sub->add_option("--scheme", o.scheme, "uniform | optimal[:x] | double-optimal[:x1,x2]");
  sub->add_option("--stats", o.stats, "boson | fermion | hardcore");
  sub->add_option("--u", o.u, "on-site interaction U/J (bosons)");
  sub->add_option("--beta", o.beta, "center barrier of odd chains, or auto");
  sub->add_option("--eta", o.eta, "central bond of even chains, or auto");
}

std::map<std::string, Handler> register_experiments(CLI::App& app, Experiments& e) {
  std::map<std::string, Handler> h;
  CLI::App* s = nullptr;

  s = app.add_subcommand("rt-curve", "|R(t)|, |T(t)| and arg(R/T) of a splitter chain");
  s->add_option("--L", e.rt.L, "chain length");
  s->add_option("--scheme", e.rt.scheme, "coupling scheme");
  s->add_option("--beta", e.rt.beta, "center barrier of odd chains, or auto");
  s->add_option("--eta", e.rt.eta, "central bond of even chains, or auto");
  s->add_option("--t-max", e.rt.t_max, "last time");
  s->add_option("--t-step", e.rt.t_step, "time step");
  s->add_option("--t-grid", e.rt.t_grid, "explicit time grid, overrides t-max / t-step");
  h["rt-curve"] = [&](int) { return rt_curve(e.rt); };

  s = app.add_subcommand("calibrate", "50/50 barrier or bond over a length grid");
  s->add_option("--parity", e.cal.parity, "odd (barrier beta) | even (bond eta)");
  s->add_option("--scheme", e.cal.scheme, "coupling scheme; bare engineered names optimize per length");
  s->add_option("--L-grid", e.cal.L_grid, "length grid; lengths of the other parity are skipped");
  s->add_flag("--audit", e.cal.audit, "rederive t* for every trial value");
  h["calibrate"] = [&](int w) { return calibrate(e.cal, w); };

  s = app.add_subcommand("correlation-map", "two-particle correlation map at one time");
  add_pair_options(s, e.corr);
  s->add_option("--t", e.corr.t, "snapshot time, or auto (0.75 t*)");
  h["correlation-map"] = [&](int) { return correlation_map(e.corr); };

  s = app.add_subcommand("hom", "P_1L, P_11, P_LL against time");
  add_pair_options(s, e.hom);
  e.hom.L = 51;
  s->get_option("--L")->default_val(51);
  s->add_option("--t-grid", e.hom.t_grid, "time grid, or auto (0:2t*:0.5)");
  h["hom"] = [&](int) { return hom(e.hom); };

  s = app.add_subcommand("bunching-transition", "optimal P_LL against the interaction");
  s->add_option("--L", e.bunch.L, "chain length");
  s->add_option("--u-grid", e.bunch.u_grid, "interaction grid");
  s->add_option("--scheme", e.bunch.scheme, "coupling scheme");
  s->add_option("--beta-step", e.bunch.beta_step, "coarse barrier step before refinement");
  s->add_option("--fit-min-u", e.bunch.fit_min_u, "smallest u in the power-law tail fit");
  h["bunching-transition"] = [&](int w) { return bunching_transition(e.bunch, w); };

  s = app.add_subcommand("weak-u", "weak-interaction robustness of P_LL over lengths");
  s->add_option("--L-grid", e.weak.L_grid, "length grid (odd lengths)");
  s->add_option("--u-grid", e.weak.u_grid, "interaction grid");
  s->add_option("--scheme", e.weak.scheme, "coupling scheme");
  s->add_option("--band", e.weak.band, "relative variation defining the threshold");
  h["weak-u"] = [&](int w) { return weak_u(e.weak, w); };

  s = app.add_subcommand("mach-zehnder", "phase-programmed routing with a step potential");
  s->add_option("--L", e.mz.L, "chain length");
  s->add_option("--scheme", e.mz.scheme, "coupling scheme");
  s->add_option("--phi-grid", e.mz.phi_grid, "target phase grid");
  s->add_option("--phi-unit", e.mz.phi_unit, "pi (grid in multiples of pi) | rad");
  h["mach-zehnder"] = [&](int w) { return mach_zehnder(e.mz, w); };

  s = app.add_subcommand("cm-table", "expansion coefficients c_m of the symmetric family");
  s->add_option("--beta-grid", e.cm.beta_grid, "barrier grid");
  s->add_option("--M", e.cm.M, "largest order");
  h["cm-table"] = [&](int) { return cm_table(e.cm); };

  s = app.add_subcommand("analytic-check", "closed-form modes against the numerical spectrum");
  s->add_option("--parity", e.check.parity, "odd | even");
  s->add_option("--N-max", e.check.N_max, "largest half length N");
  s->add_option("--beta-grid", e.check.beta_grid, "barriers (odd)");
  s->add_option("--eta-grid", e.check.eta_grid, "central bonds (even)");
  s->add_option("--t-step", e.check.t_step, "reconstruction time step");
  h["analytic-check"] = [&](int w) { return analytic_check(e.check, w); };

  s = app.add_subcommand("imperfections", "imbalance under smeared impurities, walls or curvature");
  s->add_option("--kind", e.imp.kind, "gaussian | walls | curvature");
  s->add_option("--L", e.imp.L, "chain length");
  s->add_option("--grid", e.imp.grid, "FWHM, wall barrier or curvature grid (default per kind)");
  s->add_flag("--recalibrate", e.imp.recalibrate, "re-bisect the amplitude per width (gaussian)");
  s->add_flag("--per-width-tstar", e.imp.per_width_tstar, "rederive t* per width (gaussian)");
  h["imperfections"] = [&](int) { return imperfections(e.imp); };

  s = app.add_subcommand("three-body", "P_11 and P_LL with a third boson starting at site m");
  s->add_option("--L", e.three.L, "chain length");
  s->add_option("--u", e.three.u, "on-site interaction U/J");
  s->add_option("--m-grid", e.three.m_grid, "starting sites of the third particle (default 2..L-1)");
  s->add_option("--scheme", e.three.scheme, "coupling scheme");
  h["three-body"] = [&](int w) { return three_body(e.three, w); };

  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_value(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError("config key '" + key + "': arrays must hold numbers");
      s += (s.empty() ? "" : ",") + config_value(x, key);
    }
    if (s.empty()) throw ConfigError("config key '" + key + "': empty array");
    return s;
  }
  throw ConfigError("config key '" + key + "': unsupported value " + v.dump());
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json echo_options(const CLI::App* sub) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    if (opt->get_lnames().front() == "help" || opt->get_lnames().front() == "config") continue;
    const std::string name = opt->get_lnames().front();
    if (opt->get_expected_min() == 0) {
      j[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      j[name] = opt->results().back();
    } else {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

} // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::string experiment;
  auto fail = [&](int code, const char* kind, const std::string& msg) {
    nlohmann::ordered_json e;
    e["error"]["code"] = code;
    e["error"]["kind"] = kind;
    e["error"]["experiment"] = experiment;
    e["error"]["message"] = msg;
    err << e.dump() << '\n';
    return code;
  };

  CLI::App app{std::string("latticeoptics experiment runner ") + version, "lopt"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string(version));
  Experiments e;
  std::vector<Common> commons;
  const auto handlers = register_experiments(app, e);
  commons.resize(app.get_subcommands({}).size());
  {
    std::size_t i = 0;
    for (CLI::App* sub : app.get_subcommands({})) {
      add_common(sub, commons[i++]);
      sub->add_option("--config", "JSON config; its keys override flags (handled before parsing)");
    }
  }
  app.add_option("--config", "JSON config naming the experiment; its keys override flags");

  try {
    // split off --config and merge the file into the argument list
    std::vector<std::string> args;
    std::string config_path;
    for (std::size_t i = 0; i < args_in.size(); ++i) {
      const std::string& a = args_in[i];
      if (a == "--config") {
        if (i + 1 >= args_in.size()) throw ConfigError("--config needs a file");
        config_path = args_in[++i];
      } else if (a.rfind("--config=", 0) == 0) {
        config_path = a.substr(9);
      } else {
        args.push_back(a);
      }
    }
    auto is_sub = [&](const std::string& a) { return handlers.count(a) > 0; };
    auto pos = std::find_if(args.begin(), args.end(), is_sub);
    if (pos != args.end()) experiment = *pos;

    if (!config_path.empty()) {
      nlohmann::json cfg;
      try {
        cfg = nlohmann::json::parse(read_file(config_path));
      } catch (const nlohmann::json::parse_error& ex) {
        throw ConfigError("config file '" + config_path + "': " + ex.what());
      }
      if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
      if (cfg.contains("experiment")) {
        if (!cfg["experiment"].is_string()) throw ConfigError("config key 'experiment' must be a string");
        const std::string named = cfg["experiment"].get<std::string>();
        if (!is_sub(named)) throw ConfigError("config names unknown experiment '" + named + "'");
        if (!experiment.empty() && experiment != named)
          throw ConfigError("config experiment '" + named + "' differs from command line '" + experiment + "'");
        if (experiment.empty()) args.insert(args.begin(), named);
        experiment = named;
      }
      if (experiment.empty()) throw ConfigError("no experiment given on the command line or in the config");
      CLI::App* sub = app.get_subcommand(experiment);
      std::vector<std::string> unknown;
      for (const auto& [key, value] : cfg.items()) {
        if (key == "experiment") continue;
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (key == "config" || opt == nullptr) {
          unknown.push_back(key);
          continue;
        }
        const std::string flag = "--" + key;
        if (opt->get_expected_min() == 0) {
          if (!value.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
          args.erase(std::remove(args.begin(), args.end(), flag), args.end());
          if (value.get<bool>()) args.push_back(flag);
        } else {
          args.push_back(flag);
          args.push_back(config_value(value, key));
        }
      }
      if (!unknown.empty()) {
        std::string list;
        for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("unknown config keys for '" + experiment + "': " + list);
      }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
      if (ex.get_exit_code() == 0) {
        app.exit(ex, out, err);
        return Ok;
      }
      throw ConfigError(ex.what());
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) throw ConfigError("no experiment given; run with --help for the list");
    CLI::App* sub = subs.front();
    experiment = sub->get_name();
    std::size_t index = 0;
    for (CLI::App* s : app.get_subcommands({})) {
      if (s == sub) break;
      ++index;
    }
    const Common& common = commons[index];
    const Format format = parse_format(common.format);
    if (common.workers < 0) throw InvalidArgument("workers must be >= 0");
    const int workers =
        common.workers == 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency())) : common.workers;

    Provenance prov;
    prov.experiment = experiment;
    prov.config = echo_options(sub);
    if (!config_path.empty()) prov.resolved.emplace_back("config_file", config_path);
    if (common.timestamp) prov.timestamp = utc_now();

    CommandResult result = handlers.at(experiment)(workers);
    prov.resolved.insert(prov.resolved.end(), result.resolved.begin(), result.resolved.end());

    std::ostringstream data;
    if (format == Format::Csv) write_csv(data, prov, result.table);
    else write_json(data, prov, result.table);

    if (common.out == "-") {
      out << data.str();
      return Ok;
    }
    std::filesystem::path path = common.out;
    if (path.empty()) {
      const char* dir = std::getenv("LOPT_OUTPUT_DIR");
      path = std::filesystem::path(dir && *dir ? dir : ".") / (experiment + "." + extension(format));
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write output file '" + path.string() + "'");
    f << data.str();
    f.close();
    if (!f) throw ConfigError("failed writing output file '" + path.string() + "'");
    out << "wrote " << path.string() << '\n';
    return Ok;
  } catch (const ConfigError& ex) {
    return fail(ConfigFailure, "config", ex.what());
  } catch (const InvalidArgument& ex) {
    return fail(ConfigFailure, "invalid_argument", ex.what());
  } catch (const NumericalError& ex) {
    return fail(NumericalFailure, "numerical", ex.what());
  } catch (const std::filesystem::filesystem_error& ex) {
    return fail(ConfigFailure, "io", ex.what());
  } catch (const std::exception& ex) {
    return fail(Internal, "internal", ex.what());
  }
}

} // namespace lopt::cli
