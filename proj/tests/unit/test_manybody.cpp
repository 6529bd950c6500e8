#include "doctest.h"
#include "oracles.hpp"

#include "lopt/errors.hpp"
#include "lopt/evolution.hpp"
#include "lopt/fock.hpp"
#include "lopt/manybody.hpp"
#include "lopt/scans.hpp"
#include "lopt/spectral.hpp"

#include <cmath>

using namespace lopt;

namespace {

ChainSpec impurity_chain(int L, double beta, const CouplingScheme& s = Uniform{}) {
  const PotentialProfile p[] = {CenterImpurity{beta}};
  return build_chain(L, s, p);
}

Eigen::MatrixXcd dense(const Generator& g) { return Eigen::MatrixXd(g.matrix).cast<cplx>(); }

}

TEST_SUITE("manybody") {

TEST_CASE("occupation basis") {
  const FockBasis b(4, 2, false);
  CHECK(b.size() == 10);
  CHECK(FockBasis::dimension(4, 2, false) == 10);
  CHECK(FockBasis::dimension(51, 2, false) == 1326);
  CHECK(FockBasis::dimension(21, 3, false) == 1771);
  CHECK(FockBasis::dimension(21, 2, true) == 210);
  CHECK(b.state(0) == std::vector<int>{0, 0});
  CHECK(b.state(1) == std::vector<int>{0, 1});
  CHECK(b.state(9) == std::vector<int>{3, 3});
  for (std::size_t i = 0; i + 1 < b.size(); ++i) CHECK(b.state(i) < b.state(i + 1));
  CHECK(*b.index({2, 1}) == *b.index({1, 2}));
  CHECK(b.occupation(*b.index({2, 2}), 2) == 2);
  CHECK_FALSE(FockBasis(4, 2, true).index({1, 1}).has_value());
  CHECK_FALSE(b.index({0, 7}).has_value());
  CHECK_THROWS_AS(FockBasis(2, 3, true), InvalidArgument);
}

TEST_CASE("statistics") {
  CHECK(parse_statistics("boson", 0.7).u == 0.7);
  CHECK(parse_statistics("fermion").exclusive());
  CHECK(parse_statistics("hard-core").kind == Statistics::Kind::HardCore);
  CHECK_THROWS_AS(parse_statistics("anyon"), InvalidArgument);
  CHECK_THROWS_AS(Statistics::boson(-1.0), InvalidArgument);
}

TEST_CASE("two-site Bose-Hubbard generator") {
  for (double u : {0.0, 0.71, 10.0}) {
    const Generator g = build_generator(ChainSpec({1.0}, {0.0, 0.0}), Statistics::boson(u));
    const Eigen::MatrixXd K(g.matrix);
    const double a = -1 / std::sqrt(2.0);
    Eigen::Matrix3d ref;
    ref << u, a, 0, a, 0, a, 0, a, u;
    CHECK((K - ref).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(K);
    const double r = std::sqrt(u * u + 4);
    std::vector<double> expect = {(u - r) / 2, u, (u + r) / 2};
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 3; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-13));
  }
}

TEST_CASE("generator is real symmetric and respects exclusion") {
  const ChainSpec c = impurity_chain(9, 0.9, Optimal{0.7});
  for (const Statistics& s : {Statistics::boson(2.0), Statistics::fermion(), Statistics::hard_core()}) {
    const Generator g = build_generator(c, s);
    const Eigen::MatrixXd K(g.matrix);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.basis->size() == (s.exclusive() ? 36u : 45u));
  }
  const Generator f = build_generator(c, Statistics::fermion());
  CHECK_THROWS_AS(fock_state(f, {3, 3}), InvalidArgument);
}

TEST_CASE("free bosons and fermions factorize into single-particle propagators") {
  const int L = 11;
  const ChainSpec c = impurity_chain(L, 0.9);
  const Eigen::MatrixXcd U1 = oracle::propagator(oracle::hamiltonian(c), 7.3);
  const Generator gb = build_generator(c, Statistics::boson(0.0));
  const Generator gf = build_generator(c, Statistics::fermion());
  const ManyBodyState b = evolve_two_body(gb, hom_initial_state(gb, c), 7.3);
  const ManyBodyState f = evolve_two_body(gf, hom_initial_state(gf, c), 7.3);
  double wb = 0, wf = 0;
  for (int j = 0; j < L; ++j)
    for (int k = j; k < L; ++k) {
      Eigen::Matrix2cd M;
      M << U1(j, 0), U1(j, L - 1), U1(k, 0), U1(k, L - 1);
      const cplx perm = oracle::permanent(M) / (j == k ? std::sqrt(2.0) : 1.0);
      wb = std::max(wb, std::abs(b.coefficient({j, k}) - perm));
      if (j < k) wf = std::max(wf, std::abs(f.coefficient({j, k}) - M.determinant()));
    }
  CHECK(wb < 1e-9);
  CHECK(wf < 1e-9);
}

TEST_CASE("quasi-free correlations follow from R and T") {
  for (int L : {11, 21}) {
    const ChainSpec c = impurity_chain(L, 0.94);
    const SpectralDecomp d = diagonalize(c);
    const Generator gb = build_generator(c, Statistics::boson(0.0));
    const Generator gf = build_generator(c, Statistics::fermion());
    const auto eb = make_evolver(gb.matrix);
    const auto ef = make_evolver(gf.matrix);
    const ManyBodyState b0 = hom_initial_state(gb, c), f0 = hom_initial_state(gf, c);
    for (double t : {0.0, 3.0, 11.5, 18.0, 24.2}) {
      const RT rt = rt_coefficients(d, t);
      const cplx R = rt.reflection, T = rt.transmission;
      const CorrelationMap mb = correlation_map(evolve(*eb, b0, t));
      const CorrelationMap mf = correlation_map(evolve(*ef, f0, t));
      CHECK(std::abs(mb.P(0, L - 1) - std::norm(T * T + R * R)) < 1e-9);
      CHECK(std::abs(mf.P(0, L - 1) - std::norm(T * T - R * R)) < 1e-9);
      CHECK(std::abs(mb.P(0, 0) - 4 * std::norm(T * R)) < 1e-9);
      CHECK(std::abs(mb.P(L - 1, L - 1) - 4 * std::norm(T * R)) < 1e-9);
      CHECK(mf.P(0, 0) == 0.0);
    }
  }
}

TEST_CASE("hard-core bosons and fermions share amplitudes") {
  const ChainSpec c = impurity_chain(21, 0.94);
  const Generator gh = build_generator(c, Statistics::hard_core());
  const Generator gf = build_generator(c, Statistics::fermion());
  const auto eh = make_evolver(gh.matrix), ef = make_evolver(gf.matrix);
  const ManyBodyState h0 = hom_initial_state(gh, c), f0 = hom_initial_state(gf, c);
  for (double t : {1.0, 9.0, 18.0, 23.0, 40.0})
    CHECK((evolve(*eh, h0, t).amplitudes.cwiseAbs() - evolve(*ef, f0, t).amplitudes.cwiseAbs())
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("two-body evolution against the dense matrix exponential") {
  const ChainSpec c = impurity_chain(11, 0.93, DoubleOptimal{0.5, 0.8});
  for (double u : {0.0, 0.71, 3.0, 10.0}) {
    const Generator g = build_generator(c, Statistics::boson(u));
    const ManyBodyState s0 = hom_initial_state(g, c);
    for (double t : {0.0, 0.5, 12.0, 30.0}) {
      const Eigen::VectorXcd ref = oracle::expm(cplx(0, -t) * dense(g)) * s0.amplitudes;
      for (auto m : {EvolutionMethod::Dense, EvolutionMethod::Krylov}) {
        const ManyBodyState s = evolve_two_body(g, s0, t, m);
        CHECK((s.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(s.norm() - 1) < 1e-9);
      }
    }
  }
}

TEST_CASE("Krylov and dense propagation agree on longer chains") {
  const ChainSpec c = impurity_chain(25, 0.95);
  const Generator g = build_generator(c, Statistics::boson(1.5));
  const DenseEvolver de(g.matrix);
  const KrylovEvolver ke(g.matrix);
  const Eigen::VectorXcd s0 = hom_initial_state(g, c).amplitudes;
  std::vector<double> times = {0.0, 0.1, 5.0, 26.0, 26.05, 60.0};
  std::vector<Eigen::VectorXcd> grid(times.size());
  ke.evolve_grid(s0, times, [&](std::size_t i, const Eigen::VectorXcd& v) { grid[i] = v; });
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Eigen::VectorXcd ref = de.evolve(s0, times[i]);
    CHECK((ke.evolve(s0, times[i]) - ref).norm() < 1e-9);
    CHECK((grid[i] - ref).norm() < 1e-9);
    CHECK(std::abs(grid[i].norm() - 1) < 1e-10);
  }
  CHECK(make_evolver(g.matrix, EvolutionMethod::Auto)->dimension() == de.dimension());
}

TEST_CASE("correlation map invariants") {
  const ChainSpec c = impurity_chain(15, 0.9);
  for (const Statistics& st : {Statistics::boson(0.0), Statistics::boson(4.0), Statistics::fermion(),
                               Statistics::hard_core()}) {
    const Generator g = build_generator(c, st);
    const ManyBodyState s = evolve_two_body(g, hom_initial_state(g, c), 13.0);
    const CorrelationMap m = correlation_map(s);
    CHECK((m.P - m.P.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.P.minCoeff() >= -1e-12);
    CHECK(std::abs(m.detection_total() - 1) < 1e-9);
    CHECK((m.marginals - m.P.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m.C - (m.P - m.marginals * m.marginals.transpose())).cwiseAbs().maxCoeff() < 1e-15);
    for (int j = 0; j < 15; ++j) {
      if (st.exclusive()) CHECK(m.P(j, j) == 0.0);
      CHECK(m.P(j, j) == doctest::Approx(correlator(s, j, j)).epsilon(1e-12));
      for (int k = 0; k < 15; ++k) CHECK(correlator(s, j, k) == doctest::Approx(correlator(s, k, j)));
    }
  }
}

TEST_CASE("quadrant sums skip the center") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(5, 5);
  m(0, 1) = 1.0;
  m(4, 3) = 2.0;
  m(0, 4) = 0.5;
  m(2, 2) = 100.0;
  const QuadrantSums q = quadrant_sums(m);
  CHECK(q.same_side == 3.0);
  CHECK(q.cross_side == 0.5);
  CHECK(q.ratio() == 6.0);
}

TEST_CASE("correlation export carries the diagonal convention") {
  const ChainSpec c = impurity_chain(5, 1.0);
  const Generator g = build_generator(c, Statistics::boson());
  const Table t = correlation_table(correlation_map(hom_initial_state(g, c)));
  CHECK(t.columns == std::vector<std::string>{"j", "k", "P", "C"});
  CHECK(t.rows.size() == 25);
  REQUIRE(!t.metadata.empty());
  CHECK(t.metadata[0].second == std::string(diagonal_convention));
}

TEST_CASE("norm checks on evolution input") {
  const ChainSpec c = impurity_chain(5, 1.0);
  const Generator g = build_generator(c, Statistics::boson());
  ManyBodyState s = hom_initial_state(g, c);
  s.amplitudes *= 1.1;
  CHECK_THROWS_AS(evolve_two_body(g, s, 1.0), InvalidArgument);
}

TEST_CASE("three bosons: free case against permanents, mirror symmetry, norm") {
  const int L = 9;
  const ThreeBodyProbe probe(L, 0.0, Uniform{}, EvolutionMethod::Dense);
  const PotentialProfile p[] = {CenterImpurity{probe.beta()}};
  const ChainSpec c = build_chain(L, Uniform{}, p);
  const Eigen::MatrixXcd U1 = oracle::propagator(oracle::hamiltonian(c), probe.t_star());
  for (int m : {2, 4, 5, 8}) {
    double p11 = 0.0;
    for (int j = 0; j < L; ++j) {
      Eigen::Matrix3cd M;
      const int rows[] = {0, 0, j}, cols[] = {0, L - 1, m - 1};
      for (int r = 0; r < 3; ++r)
        for (int q = 0; q < 3; ++q) M(r, q) = U1(rows[r], cols[q]);
      p11 += std::norm(oracle::permanent(M));
    }
    CHECK(probe.p11(m) == doctest::Approx(p11).epsilon(1e-9));
    CHECK(probe.pLL(L + 1 - m) == doctest::Approx(probe.p11(m)).epsilon(1e-9));
    CHECK(std::abs(probe.final_state(m).norm() - 1) < 1e-9);
  }
  CHECK_THROWS_AS(probe.p11(1), InvalidArgument);
  CHECK_THROWS_AS(probe.p11(L), InvalidArgument);
  CHECK_THROWS_AS(ThreeBodyProbe(37, 0.0, Uniform{}), InvalidArgument);
}

TEST_CASE("three bosons with interaction against the dense exponential") {
  const int L = 7;
  const ThreeBodyProbe probe(L, 2.0, Uniform{}, EvolutionMethod::Krylov);
  const PotentialProfile p[] = {CenterImpurity{probe.beta()}};
  const Generator g = build_generator(build_chain(L, Uniform{}, p), Statistics::boson(2.0), 3);
  const ManyBodyState s0 = fock_state(g, {0, L - 1, 2});
  const Eigen::VectorXcd ref = oracle::expm(cplx(0, -probe.t_star()) * dense(g)) * s0.amplitudes;
  CHECK((probe.final_state(3).amplitudes - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("peak search over time matches a fine free-case grid") {
  const int L = 11;
  const double beta = 0.9;
  const SpectralDecomp d = diagonalize(impurity_chain(L, beta));
  double best = 0.0;
  for (double t = 0.8 * L; t <= 1.3 * L; t += 1e-4) {
    const RT rt = rt_coefficients(d, t);
    best = std::max(best, 4 * std::norm(rt.reflection * rt.transmission));
  }
  BunchingOptions opt;
  const PeakSearch p = peak_pll_over_t(L, beta, 0.0, opt);
  CHECK(p.p_ll == doctest::Approx(best).epsilon(1e-7));
  opt.method = EvolutionMethod::Dense;
  CHECK(peak_pll_over_t(L, beta, 0.0, opt).p_ll == doctest::Approx(p.p_ll).epsilon(1e-10));
}

TEST_CASE("power-law fit") {
  const double x[] = {3, 5, 10, 20, 50};
  double y[5];
  for (int i = 0; i < 5; ++i) y[i] = 0.4 * std::pow(x[i], -2.5);
  const PowerLawFit f = fit_power_law(x, y);
  CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_power_law(std::span(x, 3), std::span(y, 3)), NumericalError);
}

TEST_CASE("small bunching and weak-interaction scans") {
  BunchingOptions opt;
  opt.beta_step = 0.1;
  const double us[] = {0.0, 0.05, 3.0, 5.0, 10.0, 20.0};
  const BunchingResult r = bunching_scan(11, us, opt);
  CHECK(r.points[0].p_normalized == 1.0);
  CHECK(r.fit_points == 4);
  CHECK(r.fit_slope < 0);
  CHECK(r.u_c > 0);
  for (std::size_t i = 1; i < r.points.size(); ++i) CHECK(r.points[i].p_normalized < 1.0 + 1e-6);
  const Table t = bunching_table(r);
  CHECK(t.columns == std::vector<std::string>{"u", "beta_opt", "t_opt", "P_LL", "P_normalized"});

  const int Ls[] = {11};
  const double weak[] = {0.0, 0.02, 0.2, 1.0};
  const WeakResult w = weak_interaction_scan(Ls, weak, opt);
  CHECK(w.points[0].variation == 0.0);
  REQUIRE(w.thresholds.size() == 1);
  CHECK_THROWS_AS(weak_interaction_scan(Ls, std::span<const double>(us), opt), InvalidArgument);
}

}
