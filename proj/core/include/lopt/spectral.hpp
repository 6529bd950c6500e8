#pragma once

#include "lopt/chain.hpp"
#include "lopt/table.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>

namespace lopt {

using cplx = std::complex<double>;

// Eigen-decomposition of the single-particle Hamiltonian of a chain.
struct SpectralDecomp {
  Eigen::VectorXd energies; // ascending
  Eigen::MatrixXd modes;    // columns are eigenvectors
  int first_port = 0;
  int last_port = 0;

  int size() const { return static_cast<int>(energies.size()); }
};

// Dense real-symmetric Hamiltonian (diagonal -mu, off-diagonal -J/2).
Eigen::MatrixXd hamiltonian(const ChainSpec& spec);

SpectralDecomp diagonalize(const ChainSpec& spec);

struct RT {
  cplx reflection;
  cplx transmission;
};

RT rt_coefficients(const SpectralDecomp& d, double t);

// <to| exp(-iHt) |from>
cplx amplitude(const SpectralDecomp& d, int to, int from, double t);

Eigen::VectorXcd evolve_single(const SpectralDecomp& d, const Eigen::VectorXcd& psi0, double t);
Eigen::MatrixXcd propagator(const SpectralDecomp& d, double t);

// Rows follow the time grid, columns the sites.
Eigen::MatrixXd density_history(const SpectralDecomp& d, const Eigen::VectorXcd& psi0,
                                std::span<const double> times);

struct ScatterMatrix {
  cplx r;
  cplx t;
  cplx damping;                    // D, with |D|^2 = |r|^2 + |t|^2
  Eigen::Matrix2cd matrix;         // [[r, t], [t, r]]
  Eigen::Matrix2cd unitary_part;   // nearest unitary to matrix / |D|, phase anchored
  double anchor_phase = 0.0;       // arg of unitary_part(0, 0)
  double factorization_residual = 0.0; // max |matrix - D * unitary_part|
};

// Phase of beta / (i + beta), the first diagonal entry of the ideal impurity splitter.
double impurity_anchor_phase(double beta);

// Factor a 2x2 matrix as D * U with U unitary and arg U(0,0) = anchor_phase.
ScatterMatrix factor_scatter(const Eigen::Matrix2cd& m, double anchor_phase);

ScatterMatrix scatter_matrix(const SpectralDecomp& d, double t_star, double anchor_phase);
ScatterMatrix scatter_matrix(const SpectralDecomp& d, double t_star);

Table decomposition_table(const SpectralDecomp& d, bool full_modes = false);
Table density_table(const Eigen::MatrixXd& densities, std::span<const double> times);

} // namespace lopt
