#include "lopt/fock.hpp"

#include "lopt/errors.hpp"

#include <algorithm>
#include <functional>

namespace lopt {

FockBasis::FockBasis(int sites, int particles, bool exclusive)
    : sites_(sites), particles_(particles), exclusive_(exclusive) {
  if (sites < 1 || particles < 1) throw InvalidArgument("FockBasis: need sites >= 1 and particles >= 1");
  if (exclusive && particles > sites) throw InvalidArgument("FockBasis: too many exclusive particles");
  std::vector<int> cur(particles);
  std::function<void(int, int)> rec = [&](int slot, int start) {
    if (slot == particles) {
      lookup_.emplace(key(cur), states_.size());
      states_.push_back(cur);
      return;
    }
    for (int s = start; s < sites; ++s) {
      cur[slot] = s;
      rec(slot + 1, exclusive ? s + 1 : s);
    }
  };
  rec(0, 0);
}

std::size_t FockBasis::dimension(int sites, int particles, bool exclusive) {
  // C(sites + particles - 1, particles) or C(sites, particles)
  const int n = exclusive ? sites : sites + particles - 1;
  if (particles > n) return 0;
  std::size_t c = 1;
  for (int i = 1; i <= particles; ++i) c = c * static_cast<std::size_t>(n - particles + i) / i;
  return c;
}

int FockBasis::occupation(std::size_t i, int site) const {
  const auto& s = states_[i];
  return static_cast<int>(std::count(s.begin(), s.end(), site));
}

std::uint64_t FockBasis::key(const std::vector<int>& sorted) const {
  std::uint64_t k = 0;
  for (int s : sorted) k = k * static_cast<std::uint64_t>(sites_) + static_cast<std::uint64_t>(s);
  return k;
}

std::optional<std::size_t> FockBasis::index(std::vector<int> s) const {
  if (static_cast<int>(s.size()) != particles_) return std::nullopt;
  std::sort(s.begin(), s.end());
  for (int x : s)
    if (x < 0 || x >= sites_) return std::nullopt;
  auto it = lookup_.find(key(s));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

} // namespace lopt
