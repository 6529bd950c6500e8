#pragma once

#include "lopt/chain.hpp"
#include "lopt/evolution.hpp"
#include "lopt/table.hpp"

#include <span>
#include <utility>
#include <vector>

namespace lopt {

struct BunchingOptions {
  double t_lo = 0.8; // time window in units of L
  double t_hi = 1.3;
  double t_step = 0.1;
  double beta_lo = 0.7;
  double beta_hi = 1.3;
  double beta_step = 0.025; // coarse grid before Brent refinement
  double fit_min_u = 3.0;
  CouplingScheme scheme = Uniform{};
  EvolutionMethod method = EvolutionMethod::Krylov;
  int workers = 1;
};

struct PeakSearch {
  double p_ll = 0.0;
  double t = 0.0;
  double beta = 0.0;
};

// max over the time window of P_LL for the HOM input a+_1 a+_L|0>, bosons with interaction u
PeakSearch peak_pll_over_t(int L, double beta, double u, const BunchingOptions& opt = {});
// max over the time window and the beta window
PeakSearch peak_pll(int L, double u, const BunchingOptions& opt = {});

struct BunchingPoint {
  double u = 0.0;
  double beta_opt = 0.0;
  double t_opt = 0.0;
  double p_ll = 0.0;
  double p_normalized = 0.0;
};

struct BunchingResult {
  int length = 0;
  PeakSearch reference; // u = 0
  std::vector<BunchingPoint> points;
  double u_c = 0.0;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double fit_r2 = 0.0;
  int fit_points = 0;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0; // log y = intercept + slope log x
  double r2 = 0.0;
  int points = 0;
};

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

BunchingResult bunching_scan(int L, std::span<const double> u_grid, const BunchingOptions& opt = {});

struct WeakPoint {
  int length = 0;
  double u = 0.0;
  double beta = 0.0;
  double t_opt = 0.0;
  double p_ll = 0.0;
  double variation = 0.0; // |P_LL(u) - P_LL(0)| / P_LL(0)
};

struct WeakResult {
  std::vector<WeakPoint> points;
  std::vector<std::pair<int, double>> thresholds; // largest u below 5 %, scanning upward
};

WeakResult weak_interaction_scan(std::span<const int> lengths, std::span<const double> u_grid,
                                 const BunchingOptions& opt = {}, double band = 0.05);

Table bunching_table(const BunchingResult& r);
Table weak_table(const WeakResult& r);

} // namespace lopt
