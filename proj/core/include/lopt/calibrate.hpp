#pragma once

#include "lopt/chain.hpp"
#include "lopt/spectral.hpp"
#include "lopt/table.hpp"

#include <functional>
#include <vector>

namespace lopt {

struct TStarOptions {
  double window_lo = 0.5;  // in units of the port span L
  double window_hi = 1.5;
  double grid_step = 0.1;
  // Only local maxima at least this fraction of the window maximum count;
  // weaker precursor ripples are skipped.
  double principal_fraction = 0.5;
  // |T| is treated as negligible below this fraction of |R| (window maxima).
  double negligible_transmission = 1e-2;
};

// First principal maximum of |T(t)| (or |R(t)| if T is negligible), grid then Brent.
double find_tstar(const SpectralDecomp& d, int span, const TStarOptions& opt = {});
double find_tstar(const ChainSpec& spec, const TStarOptions& opt = {});

enum class CalibrationParameter { Beta, Eta };

struct Calibration {
  int length = 0;
  CouplingScheme scheme = Uniform{};
  CalibrationParameter parameter = CalibrationParameter::Beta;
  double value = 0.0;            // beta or eta at the 50/50 point
  double t_star = 0.0;
  double balance_residual = 0.0; // |R(t*)| - |T(t*)|
  double output_probability = 0.0; // |T(t*)|^2
  double tolerance = 0.0;        // bisection width on the parameter
};

struct CalibrationOptions {
  double lo = 0.5;
  double hi = 1.5;
  double tolerance = 1e-12;
  bool rederive_tstar = false;  // audit mode: t* recomputed for every trial value
  double fixed_tstar = 0.0;     // > 0 skips the reference t* search
  TStarOptions tstar;
};

CalibrationOptions default_eta_options();

// Root of |R(t*)| - |T(t*)| over a one-parameter chain family. t* is taken at
// reference_value (unless fixed or rederived).
Calibration calibrate_balance(const std::function<ChainSpec(double)>& family, double reference_value,
                              const CalibrationOptions& opt);

Calibration find_beta5050(int L, const CouplingScheme& scheme, const CalibrationOptions& opt = {});
Calibration find_eta5050(int L, const CouplingScheme& scheme,
                         const CalibrationOptions& opt = default_eta_options());

enum class BoundaryVariant { OneCoupling, TwoCoupling };

struct BoundaryOptimization {
  CouplingScheme scheme;
  double transfer_probability = 0.0; // |T(t*)|^2 of the impurity-free chain
  double t_star = 0.0;
  int evaluations = 0;
  double parameter_tolerance = 1e-4;
  double objective_tolerance = 1e-8;
};

// Transfer probability at t* for an impurity-free chain with the given scheme.
double end_to_end_transfer(int L, const CouplingScheme& scheme);

BoundaryOptimization optimize_boundary_couplings(int L, BoundaryVariant variant);

struct MachZehnderResult {
  double phi_target = 0.0;
  double gamma_r = 0.0;        // step height realising phi_target
  double gamma_r_linear = 0.0; // starting estimate 2 phi / t*
  double phi_achieved = 0.0;
  double beta = 0.0;           // recalibrated with the step present
  double beta_no_step = 0.0;
  double t_star = 0.0;
  Eigen::Matrix2cd s_tilde;    // damping removed, (0,0) real positive
  double p_site1 = 0.0;        // end-site densities at 2 t*
  double p_siteL = 0.0;
};

// Phase read from a damping-free 2x2 splitter: arg(S12 / S11) + pi/2.
double splitter_phase(const Eigen::Matrix2cd& s_tilde);

MachZehnderResult mach_zehnder(int L, double phi_target, const CouplingScheme& scheme);

Table calibration_table(const std::vector<Calibration>& rows);
Table mach_zehnder_table(const std::vector<MachZehnderResult>& rows);

} // namespace lopt
