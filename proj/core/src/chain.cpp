#include "lopt/chain.hpp"

#include "lopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lopt {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidArgument(msg);
}

bool in_unit_interval(double x) { return x > 0.0 && x <= 1.0; }

} // namespace

GaussianImpurity GaussianImpurity::from_fwhm(double beta, double fwhm) {
  require(fwhm > 0.0 && std::isfinite(fwhm), "gaussian impurity: fwhm must be positive");
  return {beta, fwhm / (2.0 * std::sqrt(std::log(2.0)))};
}

double GaussianImpurity::fwhm() const { return 2.0 * sigma * std::sqrt(std::log(2.0)); }

std::string scheme_name(const CouplingScheme& s) {
  return std::visit(overloaded{[](const Uniform&) { return std::string("uniform"); },
                               [](const Optimal&) { return std::string("optimal"); },
                               [](const DoubleOptimal&) { return std::string("double_optimal"); },
                               [](const CustomCouplings&) { return std::string("custom"); }},
                    s);
}

std::string profile_name(const PotentialProfile& p) {
  return std::visit(
      overloaded{[](const CenterImpurity&) { return std::string("center_impurity"); },
                 [](const CouplingImpurity&) { return std::string("coupling_impurity"); },
                 [](const Step&) { return std::string("step"); },
                 [](const GaussianImpurity&) { return std::string("gaussian"); },
                 [](const Walls&) { return std::string("walls"); },
                 [](const Harmonic&) { return std::string("harmonic"); }},
      p);
}

ChainSpec::ChainSpec(std::vector<double> couplings, std::vector<double> potentials)
    : ChainSpec(std::move(couplings), std::move(potentials), 0,
                -1) {}

ChainSpec::ChainSpec(std::vector<double> couplings, std::vector<double> potentials,
                     int first_port, int last_port)
    : couplings_(std::move(couplings)), potentials_(std::move(potentials)),
      first_port_(first_port), last_port_(last_port) {
  const int L = static_cast<int>(potentials_.size());
  require(L >= 2, "chain needs at least 2 sites");
  require(static_cast<int>(couplings_.size()) == L - 1,
          "chain with " + std::to_string(L) + " sites needs " + std::to_string(L - 1) +
              " couplings, got " + std::to_string(couplings_.size()));
  for (std::size_t b = 0; b < couplings_.size(); ++b)
    require(couplings_[b] > 0.0 && std::isfinite(couplings_[b]),
            "coupling " + std::to_string(b) + " must be positive and finite");
  for (std::size_t j = 0; j < potentials_.size(); ++j)
    require(std::isfinite(potentials_[j]), "potential " + std::to_string(j) + " is not finite");
  if (last_port_ < 0) last_port_ = L - 1;
  require(first_port_ >= 0 && first_port_ < last_port_ && last_port_ < L, "invalid port sites");
}

ChainSpec ChainSpec::reversed() const {
  std::vector<double> c(couplings_.rbegin(), couplings_.rend());
  std::vector<double> p(potentials_.rbegin(), potentials_.rend());
  const int L = length();
  return ChainSpec(std::move(c), std::move(p), L - 1 - last_port_, L - 1 - first_port_);
}

ChainSpec build_chain(int L, const CouplingScheme& scheme,
                      std::span<const PotentialProfile> profiles) {
  require(L >= 3, "build_chain: L must be at least 3, got " + std::to_string(L));
  std::vector<double> J(L - 1, 1.0);
  std::vector<double> mu(L, 0.0);

  std::visit(overloaded{[](const Uniform&) {},
                        [&](const Optimal& o) {
                          require(in_unit_interval(o.x), "optimal coupling must lie in (0, 1]");
                          J.front() = o.x;
                          J.back() = o.x;
                        },
                        [&](const DoubleOptimal& o) {
                          require(L >= 4, "double optimal scheme needs L >= 4");
                          require(in_unit_interval(o.x1) && in_unit_interval(o.x2),
                                  "double optimal couplings must lie in (0, 1]");
                          J[1] = o.x2;
                          J[L - 3] = o.x2;
                          J.front() = o.x1;
                          J.back() = o.x1;
                        },
                        [&](const CustomCouplings& c) {
                          require(static_cast<int>(c.couplings.size()) == L - 1,
                                  "custom couplings need L - 1 entries");
                          J = c.couplings;
                        }},
             scheme);

  const bool odd = (L % 2) == 1;
  const int N = L / 2; // center index (0-based) for odd L
  const double center = 0.5 * (L - 1);
  const Walls* walls = nullptr;

  for (const auto& prof : profiles) {
    std::visit(
        overloaded{[&](const CenterImpurity& p) {
                     require(odd, "center impurity requires odd L");
                     mu[N] += p.beta;
                   },
                   [&](const CouplingImpurity& p) {
                     require(!odd, "coupling impurity requires even L");
                     require(in_unit_interval(p.eta), "coupling impurity eta must lie in (0, 1]");
                     J[N - 1] *= p.eta;
                   },
                   [&](const Step& p) {
                     require(odd, "step profile requires odd L");
                     for (int j = N + 1; j < L; ++j) mu[j] += p.gamma_r;
                   },
                   [&](const GaussianImpurity& p) {
                     require(odd, "gaussian impurity requires odd L");
                     require(p.sigma > 0.0, "gaussian impurity sigma must be positive");
                     for (int j = 0; j < L; ++j) {
                       const double d = (j - N) / p.sigma;
                       mu[j] += p.beta * std::exp(-d * d);
                     }
                   },
                   [&](const Walls& p) {
                     require(walls == nullptr, "at most one walls profile");
                     walls = &p;
                   },
                   [&](const Harmonic& p) {
                     require(p.omega >= 0.0, "harmonic omega must be nonnegative");
                     for (int j = 0; j < L; ++j) {
                       const double x = j - center;
                       mu[j] -= 0.5 * p.omega * p.omega * x * x;
                     }
                   }},
        prof);
  }

  for (std::size_t b = 0; b < J.size(); ++b)
    require(J[b] > 0.0 && std::isfinite(J[b]),
            "non-positive coupling at bond " + std::to_string(b) + " after scheme application");

  ChainRecipe recipe{L, scheme, {profiles.begin(), profiles.end()}};
  if (walls) {
    std::vector<double> Jw(L + 1, 1.0);
    std::copy(J.begin(), J.end(), Jw.begin() + 1);
    std::vector<double> mw(L + 2, walls->beta_walls);
    std::copy(mu.begin(), mu.end(), mw.begin() + 1);
    ChainSpec spec(std::move(Jw), std::move(mw), 1, L);
    spec.set_recipe(std::move(recipe));
    return spec;
  }
  ChainSpec spec(std::move(J), std::move(mu));
  spec.set_recipe(std::move(recipe));
  return spec;
}

ChainSpec build_chain(const ChainRecipe& recipe) {
  return build_chain(recipe.length, recipe.scheme, recipe.profiles);
}

} // namespace lopt
