#include "lopt/manybody.hpp"

#include "lopt/calibrate.hpp"
#include "lopt/errors.hpp"

#include <cmath>

namespace lopt {

Statistics Statistics::boson(double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw InvalidArgument("boson interaction must be >= 0");
  return {Kind::Boson, u};
}
Statistics Statistics::fermion() { return {Kind::Fermion, 0.0}; }
Statistics Statistics::hard_core() { return {Kind::HardCore, 0.0}; }

std::string Statistics::name() const {
  switch (kind) {
  case Kind::Boson: return "boson";
  case Kind::Fermion: return "fermion";
  case Kind::HardCore: return "hardcore";
  }
  return "?";
}

Statistics parse_statistics(const std::string& name, double u) {
  if (name == "boson") return Statistics::boson(u);
  if (name == "fermion") return Statistics::fermion();
  if (name == "hardcore" || name == "hard-core" || name == "hard_core") return Statistics::hard_core();
  throw InvalidArgument("unknown statistics '" + name + "'");
}

Generator build_generator(const ChainSpec& spec, const Statistics& stats, int particles) {
  const int L = spec.length();
  auto basis = std::make_shared<const FockBasis>(L, particles, stats.exclusive());
  const auto dim = static_cast<Eigen::Index>(basis->size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * 5);
  std::vector<int> occ(L);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    std::fill(occ.begin(), occ.end(), 0);
    for (int s : basis->state(i)) ++occ[s];
    double diag = 0.0;
    for (int j = 0; j < L; ++j) {
      diag -= spec.potential(j) * occ[j];
      diag += 0.5 * stats.u * occ[j] * (occ[j] - 1);
    }
    trip.emplace_back(i, i, diag);
    // hop one particle from b to b + 1 and store both triangles
    for (int b = 0; b + 1 < L; ++b) {
      if (occ[b] == 0) continue;
      if (stats.exclusive() && occ[b + 1] > 0) continue;
      std::vector<int> target = basis->state(i);
      for (auto& s : target)
        if (s == b) {
          s = b + 1;
          break;
        }
      const auto k = basis->index(target);
      if (!k) throw Error("build_generator: hop left the basis");
      // nearest-neighbour hops never cross another fermion, so no sign appears
      const double amp = -0.5 * spec.coupling(b) * std::sqrt(double(occ[b]) * (occ[b + 1] + 1));
      trip.emplace_back(static_cast<Eigen::Index>(*k), static_cast<Eigen::Index>(i), amp);
      trip.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(*k), amp);
    }
  }
  Generator g;
  g.basis = basis;
  g.stats = stats;
  g.matrix.resize(dim, dim);
  g.matrix.setFromTriplets(trip.begin(), trip.end());
  g.matrix.makeCompressed();
  return g;
}

std::complex<double> ManyBodyState::coefficient(std::vector<int> sites) const {
  const auto i = basis->index(std::move(sites));
  return i ? amplitudes(static_cast<Eigen::Index>(*i)) : 0.0;
}

ManyBodyState fock_state(const Generator& gen, std::vector<int> sites) {
  const auto i = gen.basis->index(sites);
  if (!i) throw InvalidArgument("fock_state: occupation not allowed by the statistics");
  ManyBodyState s{gen.basis, gen.stats, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(gen.basis->size()))};
  s.amplitudes(static_cast<Eigen::Index>(*i)) = 1.0;
  return s;
}

ManyBodyState hom_initial_state(const Generator& gen, const ChainSpec& spec) {
  return fock_state(gen, {spec.first_port(), spec.last_port()});
}

ManyBodyState evolve(const Evolver& ev, const ManyBodyState& s, double t) {
  if (std::abs(s.norm() - 1.0) > 1e-10) throw InvalidArgument("evolve: state is not normalised");
  return {s.basis, s.stats, ev.evolve(s.amplitudes, t)};
}

ManyBodyState evolve_two_body(const Generator& gen, const ManyBodyState& s, double t,
                              EvolutionMethod method) {
  if (s.basis->size() != gen.basis->size()) throw InvalidArgument("evolve_two_body: basis mismatch");
  if (t == 0.0) return s;
  auto ev = make_evolver(gen.matrix, method);
  return evolve(*ev, s, t);
}

Eigen::VectorXd correlator_weights(const FockBasis& basis, int j, int k) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int nj = basis.occupation(i, j);
    const int nk = basis.occupation(i, k);
    w(static_cast<Eigen::Index>(i)) = double(nj) * (nk - (j == k ? 1 : 0));
  }
  return w;
}

double correlator(const ManyBodyState& s, int j, int k) {
  return correlator_weights(*s.basis, j, k).dot(s.amplitudes.cwiseAbs2());
}

double CorrelationMap::detection_probability(int j, int k) const {
  return j == k ? 0.5 * P(j, j) : P(j, k);
}

double CorrelationMap::detection_total() const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < P.rows(); ++j)
    for (Eigen::Index k = j; k < P.cols(); ++k) s += detection_probability(int(j), int(k));
  return s;
}

CorrelationMap correlation_map(const ManyBodyState& s) {
  const FockBasis& b = *s.basis;
  if (b.particles() != 2) throw InvalidArgument("correlation_map: two-particle state required");
  const int L = b.sites();
  CorrelationMap m;
  m.P = Eigen::MatrixXd::Zero(L, L);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& st = b.state(i);
    const double p = std::norm(s.amplitudes(static_cast<Eigen::Index>(i)));
    if (st[0] == st[1]) {
      m.P(st[0], st[0]) += 2.0 * p;
    } else {
      m.P(st[0], st[1]) += p;
      m.P(st[1], st[0]) += p;
    }
  }
  m.marginals = m.P.rowwise().sum();
  m.C = m.P - m.marginals * m.marginals.transpose();
  return m;
}

QuadrantSums quadrant_sums(const Eigen::MatrixXd& m) {
  const Eigen::Index L = m.rows();
  const Eigen::Index half = L / 2; // the center row and column of odd chains are skipped
  QuadrantSums q;
  q.same_side = m.topLeftCorner(half, half).sum() + m.bottomRightCorner(half, half).sum();
  q.cross_side = m.topRightCorner(half, half).sum() + m.bottomLeftCorner(half, half).sum();
  return q;
}

Table correlation_table(const CorrelationMap& m) {
  Table t;
  t.columns = {"j", "k", "P", "C"};
  t.metadata.emplace_back("diagonal_convention", diagonal_convention);
  for (Eigen::Index j = 0; j < m.P.rows(); ++j)
    for (Eigen::Index k = 0; k < m.P.cols(); ++k)
      t.add_row({std::int64_t(j + 1), std::int64_t(k + 1), m.P(j, k), m.C(j, k)});
  return t;
}

ThreeBodyProbe::ThreeBodyProbe(int L, double u, const CouplingScheme& scheme,
                               EvolutionMethod method)
    : L_(L) {
  if (L > max_length)
    throw InvalidArgument("three-body probe: L = " + std::to_string(L) + " exceeds the sector cap " +
                          std::to_string(max_length));
  const Calibration c = find_beta5050(L, scheme);
  beta_ = c.value;
  t_star_ = c.t_star;
  const PotentialProfile p[] = {CenterImpurity{beta_}};
  gen_ = build_generator(build_chain(L, scheme, p), Statistics::boson(u), 3);
  ev_ = make_evolver(gen_.matrix, method);
}

ManyBodyState ThreeBodyProbe::final_state(int m) const {
  if (m < 2 || m > L_ - 1) throw InvalidArgument("three-body probe: m must lie in [2, L-1]");
  return evolve(*ev_, fock_state(gen_, {0, L_ - 1, m - 1}), t_star_);
}

double ThreeBodyProbe::p11(int m) const { return correlator(final_state(m), 0, 0); }
double ThreeBodyProbe::pLL(int m) const { return correlator(final_state(m), L_ - 1, L_ - 1); }

double three_body_probe(int L, double u, int m, const CouplingScheme& scheme) {
  return ThreeBodyProbe(L, u, scheme).p11(m);
}

} // namespace lopt
