#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <memory>
#include <span>

namespace lopt {

enum class EvolutionMethod { Auto, Dense, Krylov };

// Auto switches to the Krylov propagator above this dimension.
inline constexpr Eigen::Index dense_dimension_limit = 2000;

// psi(t) = exp(-i K t) psi for a real symmetric generator K.
class Evolver {
public:
  virtual ~Evolver() = default;
  virtual Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const = 0;
  virtual Eigen::Index dimension() const = 0;

  using Visitor = std::function<void(std::size_t, const Eigen::VectorXcd&)>;
  // Calls visit(i, psi(times[i])) for ascending nonnegative times.
  virtual void evolve_grid(const Eigen::VectorXcd& psi, std::span<const double> times,
                           const Visitor& visit) const;
};

class DenseEvolver final : public Evolver {
public:
  explicit DenseEvolver(const Eigen::SparseMatrix<double>& K);
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const override;
  Eigen::Index dimension() const override { return energies_.size(); }
  const Eigen::VectorXd& energies() const { return energies_; }

private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

struct KrylovOptions {
  double tolerance = 1e-12; // local error per unit time
  int max_dimension = 40;
};

// Lanczos propagator with adaptive substeps and full reorthogonalisation.
class KrylovEvolver final : public Evolver {
public:
  explicit KrylovEvolver(Eigen::SparseMatrix<double> K, KrylovOptions opt = {});
  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const override;
  Eigen::Index dimension() const override { return K_.rows(); }
  // Each Lanczos basis serves every grid time inside its step.
  void evolve_grid(const Eigen::VectorXcd& psi, std::span<const double> times,
                   const Visitor& visit) const override;

private:
  Eigen::SparseMatrix<double> K_;
  KrylovOptions opt_;
};

std::unique_ptr<Evolver> make_evolver(const Eigen::SparseMatrix<double>& K,
                                      EvolutionMethod method = EvolutionMethod::Auto);

} // namespace lopt
