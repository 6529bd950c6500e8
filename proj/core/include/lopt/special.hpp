#pragma once

#include <vector>

namespace lopt::special {

// Integer-order Bessel functions of the first kind by Miller backward
// recurrence normalised with J_0 + 2 sum J_2k = 1.
// Accuracy: absolute error below 1e-12 for n <= 200 and |x| <= 500.
std::vector<double> bessel_j_orders(int n_max, double x); // J_0 .. J_{n_max}
double bessel_j(int n, double x);                          // any integer n
double bessel_j_prime(int n, double x);

// Airy Ai and Ai'. Maclaurin series in extended precision on [-12, 5],
// asymptotic expansions outside. Relative error below 1e-10 on [-5, 5].
double airy_ai(double x);
double airy_ai_prime(double x);

// Rounded value of |a'_1| (first zero of Ai' is at -xi) used by the asymptotic formulas.
inline constexpr double xi_rounded = 1.019;
// |a'_1| to double precision, computed once by bisection on Ai'.
double xi_precise();

// Chebyshev polynomial of the second kind U_n(x), n >= -1 (U_{-1} = 0).
double chebyshev_u(int n, double x);

} // namespace lopt::special
