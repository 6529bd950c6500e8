#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lopt {

// Hopping schemes. All couplings are in units of the bulk coupling J = 1.
struct Uniform {};
struct Optimal {
  double x = 1.0; // first and last coupling
};
struct DoubleOptimal {
  double x1 = 1.0; // first and last coupling
  double x2 = 1.0; // second and second-to-last coupling
};
struct CustomCouplings {
  std::vector<double> couplings; // L - 1 values
};
using CouplingScheme = std::variant<Uniform, Optimal, DoubleOptimal, CustomCouplings>;

// On-site potential profiles. A positive strength is a barrier in the sense
// that the site energy becomes -strength.
struct CenterImpurity {
  double beta = 0.0;
};
struct CouplingImpurity {
  double eta = 1.0; // factor on the central bond of an even chain
};
struct Step {
  double gamma_r = 0.0; // added to the right half, center excluded
};
struct GaussianImpurity {
  double beta = 0.0;
  double sigma = 1.0; // profile exp(-(j - c)^2 / sigma^2)

  static GaussianImpurity from_fwhm(double beta, double fwhm);
  double fwhm() const;
};
struct Walls {
  double beta_walls = 0.0; // two extra end sites carrying this barrier
};
struct Harmonic {
  double omega = 0.0; // potential += -omega^2 (j - c)^2 / 2, c the chain center
};
using PotentialProfile =
    std::variant<CenterImpurity, CouplingImpurity, Step, GaussianImpurity, Walls, Harmonic>;

struct ChainRecipe {
  int length = 0;
  CouplingScheme scheme = Uniform{};
  std::vector<PotentialProfile> profiles;
};

std::string scheme_name(const CouplingScheme& s);
std::string profile_name(const PotentialProfile& p);

// Concrete tight-binding chain: L - 1 couplings, L potentials and two ports.
// The single-particle Hamiltonian is H_jj = -potential_j, H_j,j+1 = -coupling_j / 2.
class ChainSpec {
public:
  ChainSpec(std::vector<double> couplings, std::vector<double> potentials);
  ChainSpec(std::vector<double> couplings, std::vector<double> potentials, int first_port,
            int last_port);

  int length() const { return static_cast<int>(potentials_.size()); }
  const std::vector<double>& couplings() const { return couplings_; }
  const std::vector<double>& potentials() const { return potentials_; }
  double coupling(int bond) const { return couplings_.at(bond); }
  double potential(int site) const { return potentials_.at(site); }
  int first_port() const { return first_port_; }
  int last_port() const { return last_port_; }
  // Number of sites between the ports, inclusive (L of the scattering region).
  int port_span() const { return last_port_ - first_port_ + 1; }

  const std::optional<ChainRecipe>& recipe() const { return recipe_; }
  void set_recipe(ChainRecipe r) { recipe_ = std::move(r); }

  ChainSpec reversed() const;

private:
  std::vector<double> couplings_;
  std::vector<double> potentials_;
  int first_port_ = 0;
  int last_port_ = 0;
  std::optional<ChainRecipe> recipe_;
};

// Assemble a chain. Profiles add; Walls, if present, is applied last and
// embeds the chain between two extra sites (ports stay on the original ends).
ChainSpec build_chain(int length, const CouplingScheme& scheme,
                      std::span<const PotentialProfile> profiles = {});
ChainSpec build_chain(const ChainRecipe& recipe);

// Plain-text key/value round trip for recipes.
std::string to_config(const ChainRecipe& recipe);
ChainRecipe recipe_from_config(std::string_view text);

} // namespace lopt
