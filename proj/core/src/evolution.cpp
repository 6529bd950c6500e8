#include "lopt/evolution.hpp"

#include "lopt/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <vector>

namespace lopt {

using cplx = std::complex<double>;

DenseEvolver::DenseEvolver(const Eigen::SparseMatrix<double>& K) {
  Eigen::MatrixXd D(K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  if (es.info() != Eigen::Success) throw NumericalError("dense generator eigensolve failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

Eigen::VectorXcd DenseEvolver::evolve(const Eigen::VectorXcd& psi, double t) const {
  if (psi.size() != energies_.size()) throw InvalidArgument("evolve: state dimension mismatch");
  Eigen::VectorXcd re = vectors_.transpose() * psi.real();
  Eigen::VectorXcd c = vectors_.transpose() * psi.imag();
  c = re + cplx(0, 1) * c;
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -energies_(k) * t);
  Eigen::VectorXcd out(c.size());
  out.real() = vectors_ * c.real();
  out.imag() = vectors_ * c.imag();
  return out;
}

KrylovEvolver::KrylovEvolver(Eigen::SparseMatrix<double> K, KrylovOptions opt)
    : K_(std::move(K)), opt_(opt) {
  if (K_.rows() != K_.cols()) throw InvalidArgument("KrylovEvolver: generator must be square");
  if (opt_.max_dimension < 2) throw InvalidArgument("KrylovEvolver: max_dimension must be >= 2");
}

namespace {

struct SmallExp {
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;

  // exp(-i T h) e_1
  Eigen::VectorXcd apply(double h) const {
    Eigen::VectorXcd c(evals.size());
    for (Eigen::Index k = 0; k < evals.size(); ++k)
      c(k) = evecs(0, k) * std::polar(1.0, -evals(k) * h);
    return evecs.cast<cplx>() * c;
  }
};

SmallExp small_exp(const std::vector<double>& alpha, const std::vector<double>& beta, int m) {
  Eigen::VectorXd d(m), e(std::max(m - 1, 0));
  for (int i = 0; i < m; ++i) d(i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) e(i) = beta[i];
  SmallExp s;
  if (m == 1) {
    s.evals = d;
    s.evecs = Eigen::MatrixXd::Identity(1, 1);
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  s.evals = es.eigenvalues();
  s.evecs = es.eigenvectors();
  return s;
}

} // namespace

void Evolver::evolve_grid(const Eigen::VectorXcd& psi, std::span<const double> times,
                          const Visitor& visit) const {
  Eigen::VectorXcd cur = psi;
  double tc = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < tc) throw InvalidArgument("evolve_grid: times must be ascending and >= 0");
    cur = evolve(cur, times[i] - tc);
    tc = times[i];
    visit(i, cur);
  }
}

Eigen::VectorXcd KrylovEvolver::evolve(const Eigen::VectorXcd& psi0, double t) const {
  if (t < 0) throw InvalidArgument("evolve: negative time");
  Eigen::VectorXcd out = psi0;
  const double ts[] = {t};
  evolve_grid(psi0, ts, [&](std::size_t, const Eigen::VectorXcd& v) { out = v; });
  return out;
}

void KrylovEvolver::evolve_grid(const Eigen::VectorXcd& psi0, std::span<const double> times,
                                const Visitor& visit) const {
  if (psi0.size() != K_.rows()) throw InvalidArgument("evolve: state dimension mismatch");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0 || (i > 0 && times[i] < times[i - 1]))
      throw InvalidArgument("evolve_grid: times must be ascending and >= 0");
  if (times.empty()) return;
  const double t_end = times.back();
  std::size_t next_out = 0;
  while (next_out < times.size() && times[next_out] == 0.0) visit(next_out++, psi0);

  Eigen::VectorXcd psi = psi0;
  double tc = 0.0;
  double h_try = t_end;
  const int mmax = static_cast<int>(std::min<Eigen::Index>(opt_.max_dimension, K_.rows()));
  std::vector<Eigen::VectorXcd> V;
  std::vector<double> alpha, beta;
  int guard = 0;

  auto combine = [&](const SmallExp& se, int m, double s, double nrm) {
    const Eigen::VectorXcd c = se.apply(s);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(psi.size());
    for (int i = 0; i < m; ++i) v += c(i) * V[i];
    return Eigen::VectorXcd(nrm * v);
  };

  while (next_out < times.size()) {
    if (++guard > 10000000) throw NumericalError("Krylov propagator: step budget exhausted");
    const double remaining = t_end - tc;
    const double nrm = psi.norm();
    if (nrm == 0.0) {
      while (next_out < times.size()) visit(next_out++, psi);
      return;
    }
    V.assign(1, psi / nrm);
    alpha.clear();
    beta.clear();
    double h = std::min(h_try, remaining);
    bool accepted = false;
    SmallExp se;
    int m = 0;
    for (int j = 0; j < mmax; ++j) {
      Eigen::VectorXcd w = K_ * V[j];
      const double a = V[j].dot(w).real();
      alpha.push_back(a);
      w -= a * V[j];
      if (j > 0) w -= beta[j - 1] * V[j - 1];
      for (int i = 0; i <= j; ++i) w -= V[i].dot(w) * V[i];
      const double b = w.norm();
      m = j + 1;
      const bool breakdown = b < 1e-13 * std::max(1.0, std::abs(a));
      const bool check = breakdown || j + 1 == mmax || (j >= 3 && j % 2 == 1);
      if (check) {
        se = small_exp(alpha, beta, m);
        if (breakdown) {
          accepted = true; // invariant subspace: exact for any step
          h = remaining;
          break;
        }
        // a posteriori local error estimate
        double err = b * std::abs(se.apply(h)(m - 1)) * nrm;
        if (err <= opt_.tolerance * h) {
          accepted = true;
          break;
        }
        if (j + 1 == mmax) {
          while (err > opt_.tolerance * h) {
            h *= 0.5;
            if (h < 1e-14 * std::max(1.0, t_end))
              throw NumericalError("Krylov propagator: step size underflow");
            err = b * std::abs(se.apply(h)(m - 1)) * nrm;
          }
          accepted = true;
          break;
        }
      }
      beta.push_back(b);
      V.push_back(w / b);
    }
    if (!accepted) throw NumericalError("Krylov propagator: tolerance failure");
    double t_new = tc + h;
    if (t_end - t_new < 1e-15 * std::max(1.0, t_end)) t_new = t_end;
    while (next_out < times.size() && times[next_out] < t_new) {
      visit(next_out, combine(se, m, times[next_out] - tc, nrm));
      ++next_out;
    }
    psi = combine(se, m, t_new - tc, nrm);
    tc = t_new;
    while (next_out < times.size() && times[next_out] <= tc) visit(next_out++, psi);
    // allow the step to grow when the subspace was comfortably sufficient
    h_try = (m < mmax) ? 2.0 * h : h;
  }
}

std::unique_ptr<Evolver> make_evolver(const Eigen::SparseMatrix<double>& K, EvolutionMethod method) {
  if (method == EvolutionMethod::Auto)
    method = K.rows() <= dense_dimension_limit ? EvolutionMethod::Dense : EvolutionMethod::Krylov;
  if (method == EvolutionMethod::Dense) return std::make_unique<DenseEvolver>(K);
  return std::make_unique<KrylovEvolver>(K);
}

} // namespace lopt
