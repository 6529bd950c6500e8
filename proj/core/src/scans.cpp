#include "lopt/scans.hpp"

#include "lopt/errors.hpp"
#include "lopt/manybody.hpp"
#include "lopt/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace lopt {

PeakSearch peak_pll_over_t(int L, double beta, double u, const BunchingOptions& opt) {
  const PotentialProfile prof[] = {CenterImpurity{beta}};
  const ChainSpec spec = build_chain(L, opt.scheme, prof);
  const Generator gen = build_generator(spec, Statistics::boson(u));
  const auto ev = make_evolver(gen.matrix, opt.method);
  const auto idx = static_cast<Eigen::Index>(*gen.basis->index({L - 1, L - 1}));
  auto pll = [&](const Eigen::VectorXcd& a) { return 2.0 * std::norm(a(idx)); };

  const double t0 = opt.t_lo * L, t1 = opt.t_hi * L;
  const int n = static_cast<int>(std::floor((t1 - t0) / opt.t_step + 1e-9)) + 1;
  std::vector<double> times(n);
  for (int i = 0; i < n; ++i) times[i] = t0 + i * opt.t_step;
  Eigen::VectorXcd prev, before_best;
  double best = -1.0, best_t = t0, before_best_t = t0;
  int best_i = 0;
  ev->evolve_grid(hom_initial_state(gen, spec).amplitudes, times,
                  [&](std::size_t i, const Eigen::VectorXcd& psi) {
                    const double v = pll(psi);
                    if (v > best) {
                      best = v;
                      best_t = times[i];
                      best_i = static_cast<int>(i);
                      if (i > 0) {
                        before_best = prev;
                        before_best_t = times[i - 1];
                      }
                    }
                    prev = psi;
                  });
  PeakSearch out{best, best_t, beta};
  if (best_i > 0 && best_i < n - 1) {
    const Eigen::VectorXcd base = before_best;
    const double tb = before_best_t;
    auto f = [&](double t) { return pll(ev->evolve(base, t - tb)); };
    const auto r = numerics::maximize_brent(f, tb, tb + 2.0 * opt.t_step, 40);
    if (r.value > best) {
      out.p_ll = r.value;
      out.t = r.x;
    }
  }
  return out;
}

PeakSearch peak_pll(int L, double u, const BunchingOptions& opt) {
  const int nb = static_cast<int>(std::floor((opt.beta_hi - opt.beta_lo) / opt.beta_step + 1e-9)) + 1;
  PeakSearch best;
  best.p_ll = -1.0;
  for (int i = 0; i < nb; ++i) {
    const double beta = opt.beta_lo + i * opt.beta_step;
    const PeakSearch p = peak_pll_over_t(L, beta, u, opt);
    if (p.p_ll > best.p_ll) best = p;
  }
  const double lo = std::max(opt.beta_lo, best.beta - opt.beta_step);
  const double hi = std::min(opt.beta_hi, best.beta + opt.beta_step);
  PeakSearch refined = best;
  auto f = [&](double beta) {
    const PeakSearch p = peak_pll_over_t(L, beta, u, opt);
    if (p.p_ll > refined.p_ll) refined = p;
    return p.p_ll;
  };
  numerics::maximize_brent(f, lo, hi, 20);
  return refined;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 4) throw NumericalError("power-law fit needs at least 4 tail points, got " + std::to_string(n));
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw NumericalError("power-law fit: nonpositive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double dn = double(n);
  const double vx = sxx - sx * sx / dn, vy = syy - sy * sy / dn, cxy = sxy - sx * sy / dn;
  if (vx <= 0) throw NumericalError("power-law fit: degenerate abscissae");
  PowerLawFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / dn;
  f.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  f.points = static_cast<int>(n);
  return f;
}

BunchingResult bunching_scan(int L, std::span<const double> u_grid, const BunchingOptions& opt) {
  if (L < 5 || L % 2 == 0) throw InvalidArgument("bunching_scan: L must be odd and >= 5");
  for (double u : u_grid)
    if (!(u >= 0)) throw InvalidArgument("bunching_scan: interactions must be >= 0");
  BunchingResult r;
  r.length = L;
  r.reference = peak_pll(L, 0.0, opt);
  r.points.resize(u_grid.size());
  numerics::parallel_for(u_grid.size(), opt.workers, [&](std::size_t i) {
    const double u = u_grid[i];
    const PeakSearch p = u == 0.0 ? r.reference : peak_pll(L, u, opt);
    r.points[i] = {u, p.beta, p.t, p.p_ll, p.p_ll / r.reference.p_ll};
  });
  std::vector<double> xs, ys;
  for (const auto& p : r.points)
    if (p.u >= opt.fit_min_u) {
      xs.push_back(p.u);
      ys.push_back(p.p_normalized);
    }
  const PowerLawFit f = fit_power_law(xs, ys);
  r.fit_slope = f.slope;
  r.fit_intercept = f.intercept;
  r.fit_r2 = f.r2;
  r.fit_points = f.points;
  // log P = a + b log u crosses P = 1 at log u = -a / b
  r.u_c = std::exp(-f.intercept / f.slope);
  return r;
}

WeakResult weak_interaction_scan(std::span<const int> lengths, std::span<const double> u_grid,
                                 const BunchingOptions& opt, double band) {
  for (double u : u_grid)
    if (!(u >= 0 && u <= 1)) throw InvalidArgument("weak_interaction_scan: u must lie in [0, 1]");
  std::vector<double> us(u_grid.begin(), u_grid.end());
  std::sort(us.begin(), us.end());
  WeakResult out;
  for (int L : lengths) {
    const PeakSearch ref = peak_pll(L, 0.0, opt);
    std::vector<WeakPoint> pts(us.size());
    numerics::parallel_for(us.size(), opt.workers, [&](std::size_t i) {
      const PeakSearch p = us[i] == 0.0 ? ref : peak_pll_over_t(L, ref.beta, us[i], opt);
      pts[i] = {L, us[i], ref.beta, p.t, p.p_ll, std::abs(p.p_ll - ref.p_ll) / ref.p_ll};
    });
    double threshold = 0.0;
    for (const auto& p : pts) {
      if (p.variation >= band) break;
      threshold = p.u;
    }
    out.thresholds.emplace_back(L, threshold);
    out.points.insert(out.points.end(), pts.begin(), pts.end());
  }
  return out;
}

Table bunching_table(const BunchingResult& r) {
  Table t;
  t.columns = {"u", "beta_opt", "t_opt", "P_LL", "P_normalized"};
  t.metadata.emplace_back("L", std::to_string(r.length));
  t.metadata.emplace_back("U_c", format_number(r.u_c));
  t.metadata.emplace_back("fit_slope", format_number(r.fit_slope));
  t.metadata.emplace_back("fit_r2", format_number(r.fit_r2));
  for (const auto& p : r.points) t.add_row({p.u, p.beta_opt, p.t_opt, p.p_ll, p.p_normalized});
  return t;
}

Table weak_table(const WeakResult& r) {
  Table t;
  t.columns = {"L", "u", "beta", "t_opt", "P_LL", "variation"};
  for (const auto& [L, u] : r.thresholds)
    t.metadata.emplace_back("threshold_L" + std::to_string(L), format_number(u));
  for (const auto& p : r.points)
    t.add_row({std::int64_t(p.length), p.u, p.beta, p.t_opt, p.p_ll, p.variation});
  return t;
}

} // namespace lopt
