#include "lopt/special.hpp"

#include "lopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lopt::special {

std::vector<double> bessel_j_orders(int n_max, double x) {
  if (n_max < 0) throw InvalidArgument("bessel_j_orders: negative order");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ax = std::abs(x);
  if (ax < 1e-20) { // leading power-series terms
    double term = 1.0;
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) term *= 0.5 * x / n;
      out[n] = term;
      if (term == 0.0) break;
    }
    return out;
  }
  const double top = std::max<double>(n_max, ax);
  int m = static_cast<int>(top + 30.0 + 10.0 * std::cbrt(top) + std::sqrt(40.0 * top));
  m += m % 2; // start on an even order so the normalisation sum is aligned

  std::vector<double> j(static_cast<std::size_t>(m) + 2, 0.0);
  j[m + 1] = 0.0;
  j[m] = 1e-300;
  double sum = 0.0; // J_0 + 2 * sum of even orders, unnormalised
  const double big = 1e250;
  for (int k = m; k >= 1; --k) {
    j[k - 1] = (2.0 * k / ax) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > big) {
      for (int i = k - 1; i <= m; ++i) j[i] /= big;
      sum /= big;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * j[k - 1];
  }
  sum += j[0];
  for (int n = 0; n <= n_max; ++n) {
    double v = j[n] / sum;
    if (x < 0 && (n % 2)) v = -v;
    out[n] = v;
  }
  return out;
}

double bessel_j(int n, double x) {
  const int an = std::abs(n);
  double v = bessel_j_orders(an, x)[an];
  if (n < 0 && (an % 2)) v = -v;
  return v;
}

double bessel_j_prime(int n, double x) {
  const int an = std::abs(n) + 1;
  auto j = bessel_j_orders(an, x);
  auto get = [&](int k) {
    const int ak = std::abs(k);
    double v = j[ak];
    return (k < 0 && (ak % 2)) ? -v : v;
  };
  return 0.5 * (get(n - 1) - get(n + 1));
}

namespace {

constexpr long double ai0 = 0.355028053887817239260063186004183176L;
constexpr long double aip0 = -0.258819403792806798405183560189203963L;

// Maclaurin series: Ai(x) = ai0 f(x) + aip0 g(x).
void airy_series(long double x, long double& ai, long double& aip) {
  long double f = 1.0L, g = x, fp = 0.0L, gp = 1.0L;
  long double tf = 1.0L, tg = x; // current terms of f and g
  const long double x3 = x * x * x;
  for (int k = 1; k < 400; ++k) {
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f += tf;
    g += tg;
    // derivatives of x^{3k} and x^{3k+1} terms
    if (x != 0.0L) fp += tf * (3.0L * k) / x;
    gp += tg * (3.0L * k + 1.0L) / x;
    if (std::abs(tf) + std::abs(tg) < 1e-24L * (std::abs(f) + std::abs(g)) && k > 3) break;
  }
  if (x == 0.0L) fp = 0.0L;
  ai = ai0 * f + aip0 * g;
  aip = ai0 * fp + aip0 * gp;
}

struct AsymSums {
  double u_even, u_odd, v_even, v_odd; // alternating partial sums
  double u_all, v_all;                  // sum (-1)^k u_k / z^k
};

AsymSums asymptotic_sums(double zeta) {
  AsymSums s{0, 0, 0, 0, 0, 0};
  double u = 1.0, prev_abs = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double v = (k == 0) ? 1.0 : -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    const double zk = std::pow(zeta, k);
    const double tu = u / zk, tv = v / zk;
    if (std::abs(tu) > prev_abs) break; // optimal truncation
    prev_abs = std::abs(tu);
    const double sgn = (k % 2) ? -1.0 : 1.0;
    s.u_all += sgn * tu;
    s.v_all += sgn * tv;
    const double sgn2 = ((k / 2) % 2) ? -1.0 : 1.0;
    if (k % 2 == 0) {
      s.u_even += sgn2 * tu;
      s.v_even += sgn2 * tv;
    } else {
      s.u_odd += sgn2 * tu;
      s.v_odd += sgn2 * tv;
    }
    if (std::abs(tu) < 1e-18) break;
  }
  return s;
}

void airy_eval(double x, double& ai, double& aip) {
  if (x >= -12.0 && x <= 5.0) {
    long double a, ap;
    airy_series(x, a, ap);
    ai = static_cast<double>(a);
    aip = static_cast<double>(ap);
    return;
  }
  const double pi = std::numbers::pi;
  const double z = std::abs(x);
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const auto s = asymptotic_sums(zeta);
  const double z14 = std::pow(z, 0.25);
  if (x > 0) {
    const double e = std::exp(-zeta) / (2.0 * std::sqrt(pi));
    ai = e / z14 * s.u_all;
    aip = -e * z14 * s.v_all;
  } else {
    const double c = std::cos(zeta - pi / 4), sn = std::sin(zeta - pi / 4);
    ai = (c * s.u_even + sn * s.u_odd) / (std::sqrt(pi) * z14);
    aip = z14 / std::sqrt(pi) * (sn * s.v_even - c * s.v_odd);
  }
}

} // namespace

double airy_ai(double x) {
  double a, ap;
  airy_eval(x, a, ap);
  return a;
}

double airy_ai_prime(double x) {
  double a, ap;
  airy_eval(x, a, ap);
  return ap;
}

double xi_precise() {
  static const double value = [] {
    double lo = 0.9, hi = 1.1; // Ai'(-x) changes sign once here
    double flo = airy_ai_prime(-lo);
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = airy_ai_prime(-mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }();
  return value;
}

double chebyshev_u(int n, double x) {
  if (n < -1) throw InvalidArgument("chebyshev_u: order below -1");
  if (n == -1) return 0.0;
  double um1 = 0.0, u = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double next = 2.0 * x * u - um1;
    um1 = u;
    u = next;
  }
  return u;
}

} // namespace lopt::special
