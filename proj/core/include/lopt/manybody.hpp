#pragma once

#include "lopt/chain.hpp"
#include "lopt/evolution.hpp"
#include "lopt/fock.hpp"
#include "lopt/table.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace lopt {

struct Statistics {
  enum class Kind { Boson, Fermion, HardCore };
  Kind kind = Kind::Boson;
  double u = 0.0; // on-site interaction, bosons only

  static Statistics boson(double u = 0.0);
  static Statistics fermion();
  static Statistics hard_core();

  bool exclusive() const { return kind != Kind::Boson; }
  std::string name() const;
};

Statistics parse_statistics(const std::string& name, double u = 0.0);

// Real symmetric generator K of the Schroedinger equation i dA/dt = K A in the
// normalised occupation basis.
struct Generator {
  std::shared_ptr<const FockBasis> basis;
  Statistics stats;
  Eigen::SparseMatrix<double> matrix;
};

Generator build_generator(const ChainSpec& spec, const Statistics& stats, int particles = 2);

struct ManyBodyState {
  std::shared_ptr<const FockBasis> basis;
  Statistics stats;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
  // coefficient of the normalised occupation state with the given sites
  std::complex<double> coefficient(std::vector<int> sites) const;
};
using TwoBodyState = ManyBodyState;

ManyBodyState fock_state(const Generator& gen, std::vector<int> sites);
// a+_first a+_last |0>, on the chain ports
ManyBodyState hom_initial_state(const Generator& gen, const ChainSpec& spec);

ManyBodyState evolve(const Evolver& ev, const ManyBodyState& s, double t);
ManyBodyState evolve_two_body(const Generator& gen, const ManyBodyState& s, double t,
                              EvolutionMethod method = EvolutionMethod::Auto);

// <a+_j a+_k a_k a_j> = <n_j (n_k - delta_jk)>
double correlator(const ManyBodyState& s, int j, int k);
// weights w_s with <a+_j a+_k a_k a_j> = sum_s w_s |c_s|^2
Eigen::VectorXd correlator_weights(const FockBasis& basis, int j, int k);

// Two-particle correlations. Off-diagonal P_jk = |c_jk|^2 is the probability of
// detecting one particle at j and one at k; the diagonal is the correlator
// P_jj = 2 |c_jj|^2, so the pair detection probability at j is P_jj / 2.
struct CorrelationMap {
  Eigen::MatrixXd P;
  Eigen::VectorXd marginals; // P_j = sum_k P_jk
  Eigen::MatrixXd C;         // P_jk - P_j P_k

  double detection_probability(int j, int k) const;
  double detection_total() const; // sum over j <= k
};

inline constexpr const char* diagonal_convention =
    "P_jj = <n_j(n_j-1)> = 2|c_jj|^2; pair detection probability at j is P_jj/2";

CorrelationMap correlation_map(const ManyBodyState& s);

// Sums of P (or C) over the same-half and opposite-half blocks, center excluded.
struct QuadrantSums {
  double same_side = 0.0;
  double cross_side = 0.0;
  double ratio() const { return same_side / cross_side; }
};
QuadrantSums quadrant_sums(const Eigen::MatrixXd& m);

Table correlation_table(const CorrelationMap& m);

// Three bosons a+_1 a+_L a+_m |0> on a calibrated splitter; P_11 and P_LL at t*.
class ThreeBodyProbe {
public:
  ThreeBodyProbe(int L, double u, const CouplingScheme& scheme,
                 EvolutionMethod method = EvolutionMethod::Auto);

  int length() const { return L_; }
  double beta() const { return beta_; }
  double t_star() const { return t_star_; }
  // m is the 1-based starting site of the extra particle, 2 <= m <= L - 1
  double p11(int m) const;
  double pLL(int m) const;
  ManyBodyState final_state(int m) const;

  static constexpr int max_length = 35;

private:
  int L_;
  double beta_;
  double t_star_;
  Generator gen_;
  std::unique_ptr<Evolver> ev_;
};

double three_body_probe(int L, double u, int m, const CouplingScheme& scheme);

} // namespace lopt
