#pragma once

#include "lopt/table.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lopt::cli {

struct CommandResult {
  Table table;
  std::vector<std::pair<std::string, std::string>> resolved;
};

struct RtCurveOptions {
  int L = 51;
  std::string scheme = "uniform";
  std::string beta = "auto"; // odd chains
  std::string eta = "auto";  // even chains
  double t_max = 80.0;
  double t_step = 0.1;
  std::string t_grid; // overrides t_max / t_step
};
CommandResult rt_curve(const RtCurveOptions& o);

struct CalibrateOptions {
  std::string parity = "odd";
  std::string scheme = "uniform";
  std::string L_grid = "11:201";
  bool audit = false;
};
CommandResult calibrate(const CalibrateOptions& o, int workers);

struct PairOptions {
  int L = 21;
  std::string scheme = "uniform";
  std::string stats = "boson";
  double u = 0.0;
  std::string beta = "auto";
  std::string eta = "auto";
};

struct CorrelationMapOptions : PairOptions {
  std::string t = "auto"; // auto = 0.75 t*
};
CommandResult correlation_map(const CorrelationMapOptions& o);

struct HomOptions : PairOptions {
  std::string t_grid = "auto"; // auto = 0:2t*:0.5
};
CommandResult hom(const HomOptions& o);

struct BunchingCliOptions {
  int L = 51;
  std::string u_grid = "0,0.02,0.04,0.06,0.1,0.2,0.3,0.5,0.71,1,1.5,2,3,4,5,7,10,15,20";
  std::string scheme = "uniform";
  double beta_step = 0.025;
  double fit_min_u = 3.0;
};
CommandResult bunching_transition(const BunchingCliOptions& o, int workers);

struct WeakUOptions {
  std::string L_grid = "21:51:10";
  std::string u_grid = "0:0.2:0.02";
  std::string scheme = "uniform";
  double band = 0.05;
};
CommandResult weak_u(const WeakUOptions& o, int workers);

struct MachZehnderOptions {
  int L = 51;
  std::string scheme = "double-optimal";
  std::string phi_grid = "0:0.5:0.0625";
  std::string phi_unit = "pi"; // pi | rad
};
CommandResult mach_zehnder(const MachZehnderOptions& o, int workers);

struct CmTableOptions {
  std::string beta_grid = "0.95";
  int M = 3;
};
CommandResult cm_table(const CmTableOptions& o);

struct AnalyticCheckOptions {
  std::string parity = "odd";
  int N_max = 60;
  std::string beta_grid = "0.5,1,2,10";
  std::string eta_grid = "0.2,0.41421356237309503,0.6,1";
  double t_step = 0.25;
};
CommandResult analytic_check(const AnalyticCheckOptions& o, int workers);

struct ImperfectionsOptions {
  std::string kind = "gaussian"; // gaussian | walls | curvature
  int L = 51;
  std::string grid; // empty: default per kind
  bool recalibrate = false;
  bool per_width_tstar = false;
};
CommandResult imperfections(const ImperfectionsOptions& o);

struct ThreeBodyOptions {
  int L = 21;
  double u = 0.0;
  std::string m_grid; // empty: 2..L-1
  std::string scheme = "uniform";
};
CommandResult three_body(const ThreeBodyOptions& o, int workers);

} // namespace lopt::cli
