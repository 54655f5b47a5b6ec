#include "dagmm/types.hpp"

#include <numeric>
#include <utility>

namespace dagmm {

Ordering::Ordering(std::vector<int> nodes) : nodes_(std::move(nodes)), positions_(nodes_.size(), -1) {
  const int n = static_cast<int>(nodes_.size());
  for (int p = 0; p < n; ++p) {
    const int r = nodes_[p];
    if (r < 0 || r >= n || positions_[r] != -1)
      throw ConfigError("ordering is not a permutation of 0.." + std::to_string(n - 1));
    positions_[r] = p;
  }
}

Ordering Ordering::identity(std::size_t n) {
  std::vector<int> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  return Ordering(std::move(nodes));
}

Ordering Ordering::inverse() const { return Ordering(positions_); }

void Ordering::swap_positions(std::size_t p, std::size_t q) {
  std::swap(nodes_[p], nodes_[q]);
  positions_[nodes_[p]] = static_cast<int>(p);
  positions_[nodes_[q]] = static_cast<int>(q);
}

}  // namespace dagmm
