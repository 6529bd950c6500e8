#pragma once

#include "lopt/spectral.hpp"
#include "lopt/table.hpp"

#include <span>
#include <string>
#include <vector>

namespace lopt {

struct ImbalanceReport {
  std::string parameter_name; // fwhm | beta_walls | omega
  double parameter = 0.0;
  double epsilon = 0.0;       // (|R(t*)| - |T(t*)|) / |R(t*)|
  bool recalibrated = false;
  double beta_used = 0.0;
  double t_star = 0.0;
  double transfer_probability = 0.0; // |T(t*)|^2
  double delta_p = 0.0;              // relative change of |T(t*)|^2 vs the ideal chain
};

double imbalance(const RT& rt);

// Smeared impurity of the given widths. Uses the point-impurity t* unless
// per_width_tstar is set; with recalibrate the amplitude is re-bisected per width.
std::vector<ImbalanceReport> gaussian_width_scan(int L, std::span<const double> fwhm, bool recalibrate,
                                                 bool per_width_tstar = false);

// Chain embedded between two extra sites carrying beta_walls; measured between
// the original end sites at the embedded chain's t*.
std::vector<ImbalanceReport> wall_strength_scan(int L, std::span<const double> beta_walls);

// Centered harmonic curvature on top of the calibrated point impurity.
std::vector<ImbalanceReport> curvature_scan(int L, std::span<const double> omega);

Table imbalance_table(const std::vector<ImbalanceReport>& rows);

} // namespace lopt
