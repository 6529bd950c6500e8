#include "lopt/calibrate.hpp"

#include "lopt/errors.hpp"
#include "lopt/numerics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lopt {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_pi(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

} // namespace

double find_tstar(const SpectralDecomp& d, int span, const TStarOptions& opt) {
  const double lo = opt.window_lo * span, hi = opt.window_hi * span;
  const int n = static_cast<int>(std::floor((hi - lo) / opt.grid_step + 1e-9)) + 1;
  if (n < 3) throw InvalidArgument("find_tstar: window holds fewer than 3 grid points");
  std::vector<double> ts(n), aT(n), aR(n);
  double maxT = 0.0, maxR = 0.0;
  for (int i = 0; i < n; ++i) {
    ts[i] = lo + i * opt.grid_step;
    const RT rt = rt_coefficients(d, ts[i]);
    aT[i] = std::abs(rt.transmission);
    aR[i] = std::abs(rt.reflection);
    maxT = std::max(maxT, aT[i]);
    maxR = std::max(maxR, aR[i]);
  }
  const bool use_t = maxT >= opt.negligible_transmission * maxR;
  const auto& f = use_t ? aT : aR;
  const double fmax = use_t ? maxT : maxR;
  for (int i = 1; i + 1 < n; ++i) {
    if (f[i] >= f[i - 1] && f[i] > f[i + 1] && f[i] >= opt.principal_fraction * fmax) {
      auto g = [&](double t) {
        const RT rt = rt_coefficients(d, t);
        return std::abs(use_t ? rt.transmission : rt.reflection);
      };
      return numerics::maximize_brent(g, ts[i - 1], ts[i + 1], 52).x;
    }
  }
  std::ostringstream os;
  os << "find_tstar: no local maximum of |" << (use_t ? 'T' : 'R') << "| in [" << lo << ", " << hi
     << "]";
  throw NumericalError(os.str());
}

double find_tstar(const ChainSpec& spec, const TStarOptions& opt) {
  return find_tstar(diagonalize(spec), spec.port_span(), opt);
}

CalibrationOptions default_eta_options() {
  CalibrationOptions o;
  o.lo = 0.2;
  o.hi = 0.7;
  return o;
}

Calibration calibrate_balance(const std::function<ChainSpec(double)>& family,
                              double reference_value, const CalibrationOptions& opt) {
  double t_star = opt.fixed_tstar;
  if (!(t_star > 0) && !opt.rederive_tstar) t_star = find_tstar(family(reference_value), opt.tstar);

  auto evaluate = [&](double p, double& ts, RT& rt) {
    const ChainSpec spec = family(p);
    const SpectralDecomp d = diagonalize(spec);
    ts = opt.rederive_tstar ? find_tstar(d, spec.port_span(), opt.tstar) : t_star;
    rt = rt_coefficients(d, ts);
  };
  auto h = [&](double p) {
    double ts;
    RT rt;
    evaluate(p, ts, rt);
    return std::abs(rt.reflection) - std::abs(rt.transmission);
  };
  const auto root = numerics::bisect(h, opt.lo, opt.hi, opt.tolerance, "50/50 calibration");

  Calibration c;
  c.value = root.root;
  c.tolerance = root.width;
  RT rt;
  evaluate(c.value, c.t_star, rt);
  c.balance_residual = std::abs(rt.reflection) - std::abs(rt.transmission);
  c.output_probability = std::norm(rt.transmission);
  return c;
}

Calibration find_beta5050(int L, const CouplingScheme& scheme, const CalibrationOptions& opt) {
  if (L < 5 || L % 2 == 0) throw InvalidArgument("find_beta5050: L must be odd and >= 5");
  auto family = [&](double beta) {
    const PotentialProfile p[] = {CenterImpurity{beta}};
    return build_chain(L, scheme, p);
  };
  Calibration c = calibrate_balance(family, 1.0, opt);
  c.length = L;
  c.scheme = scheme;
  c.parameter = CalibrationParameter::Beta;
  return c;
}

Calibration find_eta5050(int L, const CouplingScheme& scheme, const CalibrationOptions& opt) {
  if (L < 6 || L % 2 != 0) throw InvalidArgument("find_eta5050: L must be even and >= 6");
  auto family = [&](double eta) {
    const PotentialProfile p[] = {CouplingImpurity{eta}};
    return build_chain(L, scheme, p);
  };
  // t* is read at the asymptotic splitting value, the analogue of beta = 1
  Calibration c = calibrate_balance(family, std::sqrt(2.0) - 1.0, opt);
  c.length = L;
  c.scheme = scheme;
  c.parameter = CalibrationParameter::Eta;
  return c;
}

double end_to_end_transfer(int L, const CouplingScheme& scheme) {
  const ChainSpec spec = build_chain(L, scheme);
  const SpectralDecomp d = diagonalize(spec);
  const double ts = find_tstar(d, L);
  return std::norm(rt_coefficients(d, ts).transmission);
}

BoundaryOptimization optimize_boundary_couplings(int L, BoundaryVariant variant) {
  if (L < 11) throw InvalidArgument("optimize_boundary_couplings: L must be >= 11");
  BoundaryOptimization out;
  int evals = 0;
  auto transfer = [&](const CouplingScheme& s) {
    ++evals;
    // candidates without a transfer peak in the search window score zero
    try {
      return end_to_end_transfer(L, s);
    } catch (const NumericalError&) {
      return 0.0;
    }
  };

  if (variant == BoundaryVariant::OneCoupling) {
    double best_x = 1.0, best = -1.0;
    for (int i = 1; i <= 20; ++i) {
      const double x = 0.05 * i;
      const double v = transfer(Optimal{x});
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    auto r = numerics::maximize_brent([&](double x) { return transfer(Optimal{x}); },
                                      std::max(best_x - 0.05, 0.01), std::min(best_x + 0.05, 1.0),
                                      30);
    out.scheme = Optimal{r.x};
    out.transfer_probability = r.value;
  } else {
    std::vector<double> start{1.0, 1.0};
    double best = -1.0;
    for (int i = 1; i <= 10; ++i)
      for (int k = 1; k <= 10; ++k) {
        const double v = transfer(DoubleOptimal{0.1 * i, 0.1 * k});
        if (v > best) {
          best = v;
          start = {0.1 * i, 0.1 * k};
        }
      }
    auto objective = [&](const std::vector<double>& x) {
      double penalty = 0.0;
      for (double v : x) {
        if (v <= 0.01) penalty += 0.01 - v;
        if (v > 1.0) penalty += v - 1.0;
      }
      if (penalty > 0) return 1.0 + penalty;
      return -transfer(DoubleOptimal{x[0], x[1]});
    };
    numerics::NelderMeadOptions nm;
    nm.x_tol = 1e-5;
    nm.f_tol = 1e-10;
    nm.initial_step = 0.05;
    auto r = numerics::nelder_mead(objective, start, nm);
    if (!r.converged)
      throw NumericalError("optimize_boundary_couplings: optimizer stagnated after " +
                           std::to_string(r.evaluations) + " evaluations");
    out.scheme = DoubleOptimal{r.x[0], r.x[1]};
    out.transfer_probability = -r.value;
  }
  out.t_star = find_tstar(build_chain(L, out.scheme), {});
  out.evaluations = evals;
  return out;
}

double splitter_phase(const Eigen::Matrix2cd& s) {
  double phi = std::arg(s(0, 1) / s(0, 0)) + 0.5 * pi;
  if (phi >= 1.5 * pi) phi -= 2.0 * pi;
  if (phi < -0.5 * pi) phi += 2.0 * pi;
  return phi;
}

MachZehnderResult mach_zehnder(int L, double phi_target, const CouplingScheme& scheme) {
  if (!(phi_target >= 0.0 && phi_target < pi))
    throw InvalidArgument("mach_zehnder: phi_target must lie in [0, pi)");
  const Calibration base = find_beta5050(L, scheme);
  const double t0 = base.t_star;

  struct Eval {
    double beta, phi;
    Eigen::Matrix2cd s_tilde;
    SpectralDecomp d;
  };
  auto evaluate = [&](double gamma) {
    auto family = [&](double beta) {
      const PotentialProfile p[] = {CenterImpurity{beta}, Step{gamma}};
      return build_chain(L, scheme, p);
    };
    CalibrationOptions opt;
    opt.fixed_tstar = t0;
    const Calibration c = calibrate_balance(family, 1.0, opt);
    Eval e;
    e.beta = c.value;
    e.d = diagonalize(family(c.value));
    const int a = e.d.first_port, b = e.d.last_port;
    Eigen::Matrix2cd m;
    m << amplitude(e.d, a, a, t0), amplitude(e.d, a, b, t0), amplitude(e.d, b, a, t0),
        amplitude(e.d, b, b, t0);
    e.s_tilde = factor_scatter(m, 0.0).unitary_part;
    e.phi = splitter_phase(e.s_tilde);
    return e;
  };

  const double g0 = 2.0 * phi_target / t0;
  const double span = 0.6 / t0;
  auto mismatch = [&](double g) { return wrap_pi(evaluate(g).phi - phi_target); };
  const auto root = numerics::bisect(mismatch, g0 - span, g0 + span, 1e-12, "mach_zehnder phase");

  const Eval e = evaluate(root.root);
  MachZehnderResult r;
  r.phi_target = phi_target;
  r.gamma_r = root.root;
  r.gamma_r_linear = g0;
  r.phi_achieved = e.phi;
  r.beta = e.beta;
  r.beta_no_step = base.value;
  r.t_star = t0;
  r.s_tilde = e.s_tilde;
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(e.d.size());
  psi0(e.d.first_port) = 1.0;
  const Eigen::VectorXcd psi = evolve_single(e.d, psi0, 2.0 * t0);
  r.p_site1 = std::norm(psi(e.d.first_port));
  r.p_siteL = std::norm(psi(e.d.last_port));
  return r;
}

Table calibration_table(const std::vector<Calibration>& rows) {
  Table t;
  t.columns = {"L", "scheme", "param_value", "t_star", "balance_residual", "P_5050"};
  for (const auto& c : rows)
    t.add_row({std::int64_t(c.length), scheme_name(c.scheme), c.value, c.t_star,
               c.balance_residual, c.output_probability});
  return t;
}

Table mach_zehnder_table(const std::vector<MachZehnderResult>& rows) {
  Table t;
  t.columns = {"phi", "gamma_R", "p_site1", "p_siteL", "phi_achieved", "beta", "gamma_R_linear"};
  for (const auto& r : rows)
    t.add_row({r.phi_target, r.gamma_r, r.p_site1, r.p_siteL, r.phi_achieved, r.beta,
               r.gamma_r_linear});
  return t;
}

} // namespace lopt
