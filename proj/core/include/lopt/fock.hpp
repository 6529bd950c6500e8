#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace lopt {

// Fixed-particle-number occupation basis on L sites. A state is stored as the
// ascending list of occupied sites (repeated for multiple occupancy); states are
// ordered lexicographically.
class FockBasis {
public:
  FockBasis(int sites, int particles, bool exclusive);

  int sites() const { return sites_; }
  int particles() const { return particles_; }
  bool exclusive() const { return exclusive_; }
  std::size_t size() const { return states_.size(); }

  const std::vector<int>& state(std::size_t i) const { return states_[i]; }
  int occupation(std::size_t i, int site) const;
  std::optional<std::size_t> index(std::vector<int> sites) const; // any order

  static std::size_t dimension(int sites, int particles, bool exclusive);

private:
  std::uint64_t key(const std::vector<int>& sorted) const;

  int sites_;
  int particles_;
  bool exclusive_;
  std::vector<std::vector<int>> states_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

} // namespace lopt
