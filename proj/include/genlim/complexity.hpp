#pragma once

// Non-uniform complexity m_C(L_i): the largest finite intersection over
// subcollections of L_1..L_i that include L_i, or 0 when every such
// intersection is infinite.

#include <cstddef>
#include <vector>

#include "genlim/collections.hpp"

namespace genlim {

/// Walks L_1..L_{i-1} keeping the distinct intersections reachable from L_i,
/// so the cost tracks the number of distinct sets rather than 2^(i-1).
inline std::size_t nonuniform_complexity(const Collection& c, std::size_t i) {
  const Language& target = c.language(i);
  std::vector<SymbolicSet> reach{target.body()};
  for (std::size_t j = 1; j < i; ++j) {
    const SymbolicSet& lj = c.language(j).body();
    const std::size_t n = reach.size();
    for (std::size_t k = 0; k < n; ++k) {
      SymbolicSet next = intersect(reach[k], lj);
      if (std::find(reach.begin(), reach.end(), next) == reach.end()) reach.push_back(std::move(next));
    }
  }
  std::size_t best = 0;
  for (const auto& s : reach)
    if (auto n = s.cardinality()) best = std::max(best, *n);
  return best;
}

/// Sufficient |S_t| for the greedy generator to be correct on L_{i_star}.
inline std::size_t nonuniform_bound(const Collection& c, std::size_t i_star) {
  return std::max(i_star, nonuniform_complexity(c, i_star) + 1);
}

}  // namespace genlim
