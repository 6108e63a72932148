#pragma once

// Helpers shared by the unit tests and the acceptance driver.

#include <random>

#include "genlim/langset.hpp"
#include "genlim/literal.hpp"

namespace genlim::fixtures {

inline RawSet random_raw(std::mt19937_64& rng, Int max_period = 6, Int span = 50) {
  std::uniform_int_distribution<Int> per(1, max_period);
  std::uniform_int_distribution<Int> pos(-span, span);
  std::bernoulli_distribution coin(0.5);
  RawSet raw;
  raw.period = per(rng);
  Int a = pos(rng), b = pos(rng);
  raw.lo = std::min(a, b);
  raw.hi = std::max(a, b);
  for (Int x = raw.lo; x <= raw.hi; ++x)
    if (coin(rng)) raw.members.push_back(x);
  // Bias toward finite and one-sided sets now and then.
  const int shape = static_cast<int>(rng() % 4);
  for (Int r = 0; r < raw.period; ++r) {
    if (shape != 1 && shape != 3 && coin(rng)) raw.left_residues.push_back(r);
    if (shape != 2 && shape != 3 && coin(rng)) raw.right_residues.push_back(r);
  }
  return raw;
}

/// Membership straight from the unnormalized description.
inline bool raw_contains(const RawSet& raw, Int x) {
  auto has = [](const std::vector<Int>& v, Int y) { return std::find(v.begin(), v.end(), y) != v.end(); };
  if (x < raw.lo) return has(raw.left_residues, floor_mod(x, raw.period));
  if (x > raw.hi) return has(raw.right_residues, floor_mod(x, raw.period));
  return has(raw.members, x);
}

}  // namespace genlim::fixtures

namespace genlim {
// Readable gtest failure messages.
inline void PrintTo(const SymbolicSet& s, std::ostream* os) { *os << print_set(s); }
}  // namespace genlim
