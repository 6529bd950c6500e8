#include "lopt/analytic.hpp"

#include "lopt/errors.hpp"
#include "lopt/special.hpp"

#include <boost/math/quadrature/trapezoidal.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace lopt::analytic {

namespace {

constexpr double pi = std::numbers::pi;

double bisect(const std::function<double(double)>& f, double lo, double hi,
              const std::string& context) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw NumericalError(context + ": no sign change on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "] (f = " + std::to_string(flo) + ", " +
                         std::to_string(fhi) + ")");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int sign_pow(int n) { return (n % 2 == 0) ? 1 : -1; }

// sinh(j theta) / sinh(n theta) without overflow
double sinh_ratio(int j, int n, double theta) {
  return std::exp((j - n) * theta) * std::expm1(-2.0 * j * theta) / std::expm1(-2.0 * n * theta);
}

cplx family_sum(const std::vector<double>& q, const std::vector<double>& w, double t) {
  cplx s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) s += w[k] * std::polar(1.0, -std::cos(q[k]) * t);
  return s;
}

double front_term(int n, double t) {
  auto j = special::bessel_j_orders(n + 1, t);
  const double jn = j[n];
  const double jp = 0.5 * (j[n - 1] - j[n + 1]);
  return (static_cast<double>(n) / t) * (static_cast<double>(n) / t) * jn - jp / t;
}

} // namespace

double char_poly_odd(double lambda, double beta, int L) {
  if (L < 3 || L % 2 == 0) throw InvalidArgument("char_poly_odd: L must be odd and >= 3");
  const int N = L / 2;
  const double x = -0.5 * lambda;
  const double un = special::chebyshev_u(N, x);
  const double unm1 = special::chebyshev_u(N - 1, x);
  const double v = (2.0 * beta - lambda) * un * un - 2.0 * unm1 * un;
  if (!std::isfinite(v))
    throw NumericalError("char_poly_odd: overflow at lambda = " + std::to_string(lambda) +
                         "; use the hyperbolic branch");
  return v;
}

double char_poly_odd_hyperbolic(double theta, double beta, int N) {
  if (!(theta > 0)) throw InvalidArgument("char_poly_odd_hyperbolic: theta must be positive");
  return sinh_ratio(N, N + 1, theta) - std::cosh(theta) + beta;
}

double char_poly_even(double lambda, double eta, int L) {
  if (L < 2 || L % 2 != 0) throw InvalidArgument("char_poly_even: L must be even");
  const int N = L / 2;
  const double x = -0.5 * lambda;
  const double u = special::chebyshev_u(N - 1, x);
  const double v = special::chebyshev_u(2 * N, x) + (1.0 - eta * eta) * u * u;
  if (!std::isfinite(v)) throw NumericalError("char_poly_even: overflow");
  return v;
}

double phase_shift(double q, double beta) { return std::atan(std::sin(q) / beta); }

double phase_shift_derivative(double q, double beta) {
  const double s = std::sin(q);
  return beta * std::cos(q) / (beta * beta + s * s);
}

std::vector<double> ModeSet::in_band_energies() const {
  std::vector<double> e;
  for (double q : type1_momenta) e.push_back(std::cos(q));
  for (double q : type2_momenta) e.push_back(std::cos(q));
  std::sort(e.begin(), e.end());
  return e;
}

std::vector<double> ModeSet::energies() const {
  auto e = in_band_energies();
  if (out_of_band_energy) e.push_back(*out_of_band_energy);
  std::sort(e.begin(), e.end());
  return e;
}

double ModeSet::total_weight() const {
  double s = out_of_band_weight;
  for (double w : weights1) s += w;
  for (double w : weights2) s += w;
  return s;
}

ModeSet mode_set_odd(int N, double beta) {
  if (N < 1) throw InvalidArgument("mode_set_odd: N must be >= 1");
  if (!(beta > 0)) throw InvalidArgument("mode_set_odd: beta must be positive");
  ModeSet m;
  m.N = N;
  const double h = pi / (N + 1);
  for (int k = 1; k <= N; ++k) {
    const double q = k * pi / (N + 1);
    m.type1_momenta.push_back(q);
    m.weights1.push_back(std::sin(q) * std::sin(q) / (N + 1));
  }
  auto add_type2 = [&](double q) {
    m.type2_momenta.push_back(q);
    const double s = std::sin(q);
    m.weights2.push_back(s * s / (N + 1 + phase_shift_derivative(q, beta)));
  };
  for (int k = 1; k <= N; ++k) {
    auto g = [&](double q) { return (N + 1) * q + phase_shift(q, beta) - k * pi; };
    add_type2(bisect(g, (k - 1) * h, k * h,
                     "mode_set_odd: type-II bracket k = " + std::to_string(k) +
                         ", beta = " + std::to_string(beta)));
  }

  const double threshold = 1.0 / (N + 1);
  if (std::abs(beta - threshold) <= 1e-12 * threshold) {
    // critical barrier: the bound state sits on the band edge with a linear profile
    double norm = 1.0;
    for (int j = 1; j <= N; ++j) norm += 2.0 * std::pow(j * threshold, 2);
    m.type2_momenta.push_back(pi);
    m.weights2.push_back(threshold * threshold / norm);
  } else if (beta > threshold) {
    auto g = [&](double th) { return char_poly_odd_hyperbolic(th, beta, N); };
    const double hi = std::acosh(beta + 1.0) + 1.0;
    const double theta = bisect(g, 1e-12, hi, "mode_set_odd: out-of-band root");
    m.out_of_band_present = true;
    m.out_of_band_energy = -std::cosh(theta);
    double norm = 1.0;
    for (int j = 1; j <= N; ++j) {
      const double r = sinh_ratio(j, N + 1, theta);
      norm += 2.0 * r * r;
    }
    const double r1 = sinh_ratio(1, N + 1, theta);
    m.out_of_band_weight = r1 * r1 / norm;
  } else {
    // weak barrier: the bound state merges into the band as an extra symmetric mode
    auto g = [&](double q) { return (N + 1) * q + phase_shift(q, beta) - (N + 1) * pi; };
    add_type2(bisect(g, N * h, pi - 1e-9, "mode_set_odd: band-edge symmetric mode"));
  }
  return m;
}

ModeSet mode_set_even(int N, double eta) {
  if (N < 1) throw InvalidArgument("mode_set_even: N must be >= 1");
  if (!(eta > 0 && eta <= 1)) throw InvalidArgument("mode_set_even: eta must lie in (0, 1]");
  ModeSet m;
  m.N = N;
  const double h = pi / (N + 1);
  auto weight = [&](double q) {
    double s = 0.0;
    for (int j = 1; j <= N; ++j) s += std::sin(q * j) * std::sin(q * j);
    return std::sin(q) * std::sin(q) / (2.0 * s);
  };
  // antisymmetric family: (N+1)k + phi(1 - eta cos k) = j pi with k in ((j-1)h, jh);
  // symmetric family: (N+1)k - phi(1 + eta cos k) = j pi with k in (jh, (j+1)h)
  for (int fam = 1; fam <= 2; ++fam) {
    const double sg = fam == 1 ? -1.0 : 1.0;
    for (int j = 1; j <= N; ++j) {
      auto g = [&](double k) {
        const double phi = std::atan2(eta * std::sin(k), 1.0 + sg * eta * std::cos(k));
        return (N + 1) * k - sg * phi - j * pi;
      };
      const double lo = fam == 1 ? (j - 1) * h : j * h;
      const double hi = fam == 1 ? j * h : std::min((j + 1) * h, pi - 1e-12);
      const double q = bisect(g, lo, hi,
                              "mode_set_even: family " + std::to_string(fam) +
                                  " bracket j = " + std::to_string(j) +
                                  ", eta = " + std::to_string(eta));
      (fam == 1 ? m.type1_momenta : m.type2_momenta).push_back(q);
      (fam == 1 ? m.weights1 : m.weights2).push_back(weight(q));
    }
  }
  return m;
}

cplx u1_mode_sum(const ModeSet& m, double t) { return family_sum(m.type1_momenta, m.weights1, t); }
cplx u2_mode_sum(const ModeSet& m, double t) { return family_sum(m.type2_momenta, m.weights2, t); }

cplx u1_bessel(int N, double t) {
  if (N < 1) throw InvalidArgument("u1_bessel: N must be >= 1");
  if (t < 0) throw InvalidArgument("u1_bessel: t must be nonnegative");
  if (t == 0.0) return 0.0;
  const int n = 2 * N + 2;
  return 2.0 * sign_pow(N + 1) * front_term(n, t);
}

double u1_direct(double t) {
  if (t == 0.0) return 0.5;
  return special::bessel_j(1, t) / t;
}

cplx u1_exact(int N, double t) {
  if (t == 0.0) return 0.5;
  double s = u1_direct(t);
  const double cutoff = t + 40.0 + 10.0 * std::cbrt(t);
  for (int p = 1;; ++p) {
    const int n = p * (2 * N + 2);
    if (n > cutoff) break;
    s += 2.0 * sign_pow(p * (N + 1)) * front_term(n, t);
  }
  return s;
}

double cm_closed(int m, double beta) {
  if (!(beta > 0)) throw InvalidArgument("cm_closed: beta must be positive");
  const double s = std::sqrt(beta * beta + 1.0);
  const double d = 1.0 / (s + beta); // = s - beta
  const double b3 = beta * beta * beta;
  switch (m) {
  case 0: return 2.0 * beta * beta * d / s - 0.5;
  case 1: return beta - 2.0 * b3 * d / s;
  case 2: return 0.25 - 2.0 * b3 * d * d / s;
  case 3: return -2.0 * b3 * d * d * d / s;
  default: throw InvalidArgument("cm_closed: only m = 0..3 have closed forms");
  }
}

double cm_quadrature(int m, double beta) {
  if (!(beta > 0)) throw InvalidArgument("cm_quadrature: beta must be positive");
  if (m < 0) throw InvalidArgument("cm_quadrature: m must be nonnegative");
  // x = tan(theta) turns the kernel into a smooth periodic integrand, where the
  // trapezoidal rule converges geometrically
  auto f = [=](double th) {
    const double s = std::sin(th), c = std::cos(th);
    return s * s * c * c * std::cos(2.0 * m * th + 2.0 * std::atan(std::sin(2.0 * th) / beta));
  };
  double err = 0.0;
  const double v =
      boost::math::quadrature::trapezoidal(f, -0.5 * pi, 0.5 * pi, 1e-14, 22, &err);
  if (!(err < 1e-11))
    throw NumericalError("cm_quadrature: no convergence for m = " + std::to_string(m) +
                         ", beta = " + std::to_string(beta));
  return 4.0 / pi * sign_pow(m) * v;
}

double CmTable::coefficient(int m) const {
  const int am = std::abs(m);
  if (am > order) return 0.0;
  const double c = coefficients[static_cast<std::size_t>(am)];
  return (m < 0) ? sign_pow(am) * c : c;
}

CmTable cm_table(double beta, int M) {
  if (!(beta > 0)) throw InvalidArgument("cm_table: beta must be positive");
  if (M < 0) throw InvalidArgument("cm_table: M must be nonnegative");
  CmTable t;
  t.beta = beta;
  t.order = M;
  for (int m = 0; m <= M; ++m) {
    const double qd = cm_quadrature(m, beta);
    const double cl = m <= 3 ? cm_closed(m, beta) : std::numeric_limits<double>::quiet_NaN();
    t.quadrature.push_back(qd);
    t.closed.push_back(cl);
    t.coefficients.push_back(m <= 3 ? cl : qd);
  }
  return t;
}

cplx u2_jacobi_anger(int N, const CmTable& table, double t) {
  const int M = table.order;
  const int n0 = 2 * N + 2;
  const int top = n0 + M;
  auto j = special::bessel_j_orders(top, t);
  cplx s = 0.0;
  cplx phase = 1.0; // i^{-m}
  for (int m = 0; m <= M; ++m) {
    s += phase * table.coefficient(m) * j[n0 + m];
    if (m > 0) s += std::conj(phase) * table.coefficient(-m) * j[n0 - m];
    phase *= cplx(0.0, -1.0);
  }
  return 2.0 * sign_pow(N + 1) * s;
}

cplx u2_jacobi_anger(int N, double beta, double t, int M) {
  return u2_jacobi_anger(N, cm_table(beta, M), t);
}

OddAsymptotics asymptotics_odd(int N, double beta) {
  if (N < 1) throw InvalidArgument("asymptotics_odd: N must be >= 1");
  const double xi = special::xi_rounded;
  OddAsymptotics a;
  a.t_star = 2.0 * N + 2.0 + xi * std::cbrt(N + 1.0);
  a.t_star_precise = 2.0 * N + 2.0 + special::xi_precise() * std::cbrt(N + 1.0);
  const double n13 = std::cbrt(static_cast<double>(N));
  const double amp = 2.0 * sign_pow(N + 1) * special::airy_ai(-xi) / n13;
  const cplx ib(beta, 0.0);
  a.u1_limit = amp;
  a.u2_limit = amp * (ib - cplx(0, 1)) / (ib + cplx(0, 1));
  a.damping = 2.0 * amp;
  a.correction = (1.0 - beta) * n13 * n13;
  a.r_over_t = cplx(0, 1) - cplx(0, 0.5) * (2.0 * a.correction - xi) / (n13 * n13);
  return a;
}

double beta5050_asymptotic(int L) { return 1.0 - 0.809 / std::cbrt(static_cast<double>(L) * L); }

EvenAsymptotics asymptotics_even(int N, double eta) {
  if (N < 1) throw InvalidArgument("asymptotics_even: N must be >= 1");
  const double amp =
      2.0 * sign_pow(N + 1) * special::airy_ai(-special::xi_rounded) / std::cbrt(double(N));
  const cplx i(0, 1);
  return {amp * (i - eta) / (i + eta), amp * (i + eta) / (i - eta)};
}

Table mode_table(const ModeSet& m) {
  Table t;
  t.columns = {"family", "k", "q_k", "E_k", "weight"};
  for (std::size_t k = 0; k < m.type1_momenta.size(); ++k)
    t.add_row({std::string("I"), std::int64_t(k + 1), m.type1_momenta[k],
               std::cos(m.type1_momenta[k]), m.weights1[k]});
  for (std::size_t k = 0; k < m.type2_momenta.size(); ++k)
    t.add_row({std::string("II"), std::int64_t(k + 1), m.type2_momenta[k],
               std::cos(m.type2_momenta[k]), m.weights2[k]});
  if (m.out_of_band_energy)
    t.add_row({std::string("out_of_band"), std::int64_t(0),
               std::numeric_limits<double>::quiet_NaN(), *m.out_of_band_energy,
               m.out_of_band_weight});
  return t;
}

Table cm_export_table(const CmTable& c) {
  Table t;
  t.columns = {"m", "c_m_closed", "c_m_quadrature", "abs_diff"};
  t.metadata.emplace_back("beta", format_number(c.beta));
  for (int m = 0; m <= c.order; ++m) {
    const double cl = c.closed[m], qd = c.quadrature[m];
    t.add_row({std::int64_t(m), cl, qd, std::isnan(cl) ? cl : std::abs(cl - qd)});
  }
  return t;
}

} // namespace lopt::analytic
