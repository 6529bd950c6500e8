#pragma once

#include "lopt/table.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace lopt::analytic {

using cplx = std::complex<double>;

// Characteristic polynomial of B = -2H for the odd chain L = 2N + 1 with a
// center impurity: (2 beta - lambda) U_N(-lambda/2)^2 - 2 U_{N-1} U_N.
// Throws NumericalError when the value overflows; use the hyperbolic branch then.
double char_poly_odd(double lambda, double beta, int L);

// Out-of-band branch, lambda = 2 cosh(theta) (energy -cosh theta):
// sinh(N theta)/sinh((N+1) theta) - cosh(theta) + beta, finite for every theta > 0.
double char_poly_odd_hyperbolic(double theta, double beta, int N);

// Even chain L = 2N with central bond factor eta: U_{2N}(-lambda/2) + (1 - eta^2) U_{N-1}^2.
double char_poly_even(double lambda, double eta, int L);

// Phase shift of symmetric modes and its derivative.
double phase_shift(double q, double beta);
double phase_shift_derivative(double q, double beta);

// Modes that touch the end sites. Energies follow E = cos q.
struct ModeSet {
  int N = 0;
  std::vector<double> type1_momenta; // antisymmetric end components
  std::vector<double> type2_momenta; // symmetric end components
  std::vector<double> weights1;      // O_1k^2
  std::vector<double> weights2;
  bool out_of_band_present = false;
  std::optional<double> out_of_band_energy;
  double out_of_band_weight = 0.0;

  std::vector<double> in_band_energies() const; // ascending
  std::vector<double> energies() const;         // ascending, including out-of-band
  double total_weight() const;
};

ModeSet mode_set_odd(int N, double beta);
ModeSet mode_set_even(int N, double eta);

// sum_k w_k exp(-i cos(q_k) t) over one family
cplx u1_mode_sum(const ModeSet& m, double t);
cplx u2_mode_sum(const ModeSet& m, double t);

// Leading Bessel term of the antisymmetric family,
// 2 (-1)^{N+1} [ (n/t)^2 J_n(t) - J_n'(t)/t ], n = 2N + 2. Zero at t = 0.
cplx u1_bessel(int N, double t);
// Contribution J_1(t)/t common to all N (the p = 0 image of the mode sum).
double u1_direct(double t);
// Direct term plus all Bessel images; equals the antisymmetric mode sum.
cplx u1_exact(int N, double t);

double cm_closed(int m, double beta);     // m = 0..3
double cm_quadrature(int m, double beta); // any m >= 0

struct CmTable {
  double beta = 0.0;
  int order = 0;
  std::vector<double> coefficients; // c_0 .. c_M (closed form where available)
  std::vector<double> closed;       // NaN for m > 3
  std::vector<double> quadrature;

  double coefficient(int m) const; // accepts negative m via c_{-m} = (-1)^m c_m
};

CmTable cm_table(double beta, int M);

cplx u2_jacobi_anger(int N, const CmTable& table, double t);
cplx u2_jacobi_anger(int N, double beta, double t, int M = 3);

struct OddAsymptotics {
  double t_star = 0.0;         // with xi = 1.019
  double t_star_precise = 0.0; // with xi to double precision
  double correction = 0.0;     // eta in beta = 1 - eta N^{-2/3}
  cplx u1_limit;
  cplx u2_limit;
  cplx damping;
  cplx r_over_t;
};

OddAsymptotics asymptotics_odd(int N, double beta);

// 1 - 0.809 L^{-2/3}
double beta5050_asymptotic(int L);

struct EvenAsymptotics {
  cplx u1_limit;
  cplx u2_limit;
};

EvenAsymptotics asymptotics_even(int N, double eta);

Table mode_table(const ModeSet& m);
Table cm_export_table(const CmTable& t);

} // namespace lopt::analytic
