#include "lopt/spectral.hpp"

#include "lopt/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace lopt {

Eigen::MatrixXd hamiltonian(const ChainSpec& spec) {
  const int L = spec.length();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(L, L);
  for (int j = 0; j < L; ++j) H(j, j) = -spec.potential(j);
  for (int b = 0; b < L - 1; ++b) H(b, b + 1) = H(b + 1, b) = -0.5 * spec.coupling(b);
  return H;
}

SpectralDecomp diagonalize(const ChainSpec& spec) {
  const int L = spec.length();
  Eigen::VectorXd diag(L), sub(L - 1);
  for (int j = 0; j < L; ++j) diag(j) = -spec.potential(j);
  for (int b = 0; b < L - 1; ++b) sub(b) = -0.5 * spec.coupling(b);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericalError("tridiagonal eigensolver did not converge (L = " + std::to_string(L) +
                         ")");

  SpectralDecomp d;
  d.energies = es.eigenvalues();
  d.modes = es.eigenvectors();
  const double tiny = 1e-14;
  for (int k = 0; k < L; ++k) {
    for (int j = 0; j < L; ++j) {
      const double v = d.modes(j, k);
      if (std::abs(v) > tiny) {
        if (v < 0) d.modes.col(k) *= -1.0;
        break;
      }
    }
  }
  d.first_port = spec.first_port();
  d.last_port = spec.last_port();
  return d;
}

namespace {

Eigen::VectorXcd phases(const SpectralDecomp& d, double t) {
  Eigen::VectorXcd p(d.size());
  for (int k = 0; k < d.size(); ++k) p(k) = std::polar(1.0, -d.energies(k) * t);
  return p;
}

} // namespace

cplx amplitude(const SpectralDecomp& d, int to, int from, double t) {
  cplx s = 0.0;
  for (int k = 0; k < d.size(); ++k)
    s += d.modes(to, k) * d.modes(from, k) * std::polar(1.0, -d.energies(k) * t);
  return s;
}

RT rt_coefficients(const SpectralDecomp& d, double t) {
  if (t < 0) throw InvalidArgument("rt_coefficients: t must be nonnegative");
  const int a = d.first_port, b = d.last_port;
  cplx r = 0.0, tr = 0.0;
  for (int k = 0; k < d.size(); ++k) {
    const cplx ph = std::polar(1.0, -d.energies(k) * t);
    const double o1 = d.modes(a, k);
    r += o1 * o1 * ph;
    tr += o1 * d.modes(b, k) * ph;
  }
  return {r, tr};
}

Eigen::VectorXcd evolve_single(const SpectralDecomp& d, const Eigen::VectorXcd& psi0, double t) {
  if (psi0.size() != d.size()) throw InvalidArgument("evolve_single: state has wrong length");
  if (std::abs(psi0.norm() - 1.0) > 1e-12)
    throw InvalidArgument("evolve_single: initial state is not normalized");
  Eigen::VectorXcd c = d.modes.transpose().cast<cplx>() * psi0;
  c = c.cwiseProduct(phases(d, t));
  return d.modes.cast<cplx>() * c;
}

Eigen::MatrixXcd propagator(const SpectralDecomp& d, double t) {
  const Eigen::MatrixXcd O = d.modes.cast<cplx>();
  return O * phases(d, t).asDiagonal() * O.transpose();
}

Eigen::MatrixXd density_history(const SpectralDecomp& d, const Eigen::VectorXcd& psi0,
                                std::span<const double> times) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(times.size()), d.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = evolve_single(d, psi0, times[i]).cwiseAbs2().transpose();
  return out;
}

double impurity_anchor_phase(double beta) {
  return std::arg(cplx(beta, 0.0) / cplx(beta, 1.0));
}

ScatterMatrix factor_scatter(const Eigen::Matrix2cd& m, double anchor_phase) {
  const double norm2 = 0.5 * m.squaredNorm(); // |r|^2 + |t|^2 for a symmetric splitter
  if (norm2 < 1e-8)
    throw NumericalError("scatter matrix extraction: end-site amplitude too small (|r|^2 + |t|^2 = " +
                         std::to_string(norm2) + "); wrong transfer time?");
  ScatterMatrix s;
  s.matrix = m;
  s.r = m(0, 0);
  s.t = m(0, 1);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix2cd U = svd.matrixU() * svd.matrixV().adjoint();
  // Rotate the global phase so that U(0,0) carries the anchor phase.
  const double rot = std::abs(U(0, 0)) > 1e-12 ? anchor_phase - std::arg(U(0, 0)) : 0.0;
  U *= std::polar(1.0, rot);
  s.unitary_part = U;
  s.anchor_phase = anchor_phase;
  // Least-squares scalar D for m ~ D U, then fix its modulus.
  const cplx proj = (U.adjoint() * m).trace() / 2.0;
  s.damping = std::polar(std::sqrt(norm2), std::arg(proj));
  s.factorization_residual = (m - s.damping * U).cwiseAbs().maxCoeff();
  return s;
}

ScatterMatrix scatter_matrix(const SpectralDecomp& d, double t_star, double anchor_phase) {
  if (!(t_star > 0)) throw InvalidArgument("scatter_matrix: t_star must be positive");
  const RT rt = rt_coefficients(d, t_star);
  const cplx tt = amplitude(d, d.first_port, d.last_port, t_star);
  const cplx rr = amplitude(d, d.last_port, d.last_port, t_star);
  Eigen::Matrix2cd m;
  m << rt.reflection, tt, rt.transmission, rr;
  return factor_scatter(m, anchor_phase);
}

ScatterMatrix scatter_matrix(const SpectralDecomp& d, double t_star) {
  return scatter_matrix(d, t_star, 0.0);
}

Table decomposition_table(const SpectralDecomp& d, bool full_modes) {
  Table t;
  t.columns = {"k", "E_k", "O_1k", "O_Lk"};
  if (full_modes)
    for (int j = 0; j < d.size(); ++j) t.columns.push_back("O_" + std::to_string(j + 1) + "k");
  for (int k = 0; k < d.size(); ++k) {
    std::vector<Cell> row{std::int64_t{k + 1}, d.energies(k), d.modes(d.first_port, k),
                          d.modes(d.last_port, k)};
    if (full_modes)
      for (int j = 0; j < d.size(); ++j) row.emplace_back(d.modes(j, k));
    t.add_row(std::move(row));
  }
  return t;
}

Table density_table(const Eigen::MatrixXd& densities, std::span<const double> times) {
  Table t;
  t.columns = {"t", "j", "n"};
  for (Eigen::Index i = 0; i < densities.rows(); ++i)
    for (Eigen::Index j = 0; j < densities.cols(); ++j)
      t.add_row({times[static_cast<std::size_t>(i)], std::int64_t{j + 1}, densities(i, j)});
  return t;
}

} // namespace lopt
