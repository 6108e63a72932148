#pragma once

// Exact two-sided eventually-periodic subsets of the integers.
//
// A set is described by a period p, a window [lo, hi], the members that
// fall inside the window, and two residue patterns mod p that decide
// membership below lo (left) and above hi (right). Every value is kept in
// canonical form, so structural equality is semantic equality.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace genlim {

using Int = std::int64_t;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline constexpr Int floor_mod(Int x, Int p) {
  Int r = x % p;
  return r < 0 ? r + p : r;
}

/// The fixed enumeration 0, -1, 1, -2, 2, ... of the integers.
namespace canonical {

inline constexpr Int at(std::uint64_t rank) {
  if (rank == 0) return 0;
  const Int k = static_cast<Int>((rank + 1) / 2);
  return (rank % 2 == 1) ? -k : k;
}

inline constexpr std::uint64_t rank(Int x) {
  if (x == 0) return 0;
  if (x < 0) return 2 * static_cast<std::uint64_t>(-x) - 1;
  return 2 * static_cast<std::uint64_t>(x);
}

inline constexpr bool before(Int a, Int b) { return rank(a) < rank(b); }

struct Less {
  constexpr bool operator()(Int a, Int b) const { return before(a, b); }
};

}  // namespace canonical

/// Unvalidated, possibly non-canonical description of a set.
struct RawSet {
  Int period = 1;
  Int lo = 0;
  Int hi = 0;
  std::vector<Int> members;  // all within [lo, hi]
  std::vector<Int> left_residues;
  std::vector<Int> right_residues;
};

enum class SetOp { intersect, unite, difference, complement };

class SymbolicSet {
 public:
  /// The empty set.
  SymbolicSet() : left_(1, false), right_(1, false) {}

  static SymbolicSet normalize(const RawSet& raw) {
    if (raw.period < 1) throw ValidationError("period must be at least 1");
    if (raw.lo > raw.hi) throw ValidationError("window must satisfy lo <= hi");
    const Int p = raw.period;
    std::vector<bool> left(static_cast<std::size_t>(p), false);
    std::vector<bool> right(static_cast<std::size_t>(p), false);
    for (Int r : raw.left_residues) {
      if (r < 0 || r >= p) throw ValidationError("left residue out of range");
      left[static_cast<std::size_t>(r)] = true;
    }
    for (Int r : raw.right_residues) {
      if (r < 0 || r >= p) throw ValidationError("right residue out of range");
      right[static_cast<std::size_t>(r)] = true;
    }
    std::vector<bool> window(static_cast<std::size_t>(raw.hi - raw.lo + 1), false);
    for (Int x : raw.members) {
      if (x < raw.lo || x > raw.hi) throw ValidationError("explicit member outside window");
      window[static_cast<std::size_t>(x - raw.lo)] = true;
    }
    return canonicalize(p, raw.lo, raw.hi, window, left, right);
  }

  static SymbolicSet empty() { return {}; }

  static SymbolicSet all() {
    SymbolicSet s;
    s.left_ = {true};
    s.right_ = {true};
    s.members_ = {0};
    return s;
  }

  static SymbolicSet finite(std::span<const Int> xs) {
    if (xs.empty()) return empty();
    RawSet raw;
    raw.lo = *std::min_element(xs.begin(), xs.end());
    raw.hi = *std::max_element(xs.begin(), xs.end());
    raw.members.assign(xs.begin(), xs.end());
    return normalize(raw);
  }
  static SymbolicSet finite(std::initializer_list<Int> xs) {
    return finite(std::span<const Int>(xs.begin(), xs.size()));
  }

  /// {n, n+1, n+2, ...}
  static SymbolicSet at_least(Int n) {
    return normalize({1, n, n, {n}, {}, {0}});
  }
  /// {..., n-1, n}
  static SymbolicSet at_most(Int n) {
    return normalize({1, n, n, {n}, {0}, {}});
  }
  /// All x with x mod p == r.
  static SymbolicSet residue_class(Int p, Int r) {
    if (p < 1) throw ValidationError("modulus must be at least 1");
    const Int rr = floor_mod(r, p);
    RawSet raw{p, 0, 0, {}, {rr}, {rr}};
    if (rr == 0) raw.members = {0};
    return normalize(raw);
  }

  bool contains(Int x) const {
    if (x < lo_) return left_[static_cast<std::size_t>(floor_mod(x, period_))];
    if (x > hi_) return right_[static_cast<std::size_t>(floor_mod(x, period_))];
    return std::binary_search(members_.begin(), members_.end(), x);
  }

  Int period() const { return period_; }
  Int lo() const { return lo_; }
  Int hi() const { return hi_; }
  const std::vector<Int>& members() const { return members_; }
  std::vector<Int> left_residues() const { return residues(left_); }
  std::vector<Int> right_residues() const { return residues(right_); }
  bool left_has(Int residue) const { return left_[static_cast<std::size_t>(floor_mod(residue, period_))]; }
  bool right_has(Int residue) const { return right_[static_cast<std::size_t>(floor_mod(residue, period_))]; }

  bool is_finite() const { return !any(left_) && !any(right_); }
  bool is_empty() const { return is_finite() && members_.empty(); }
  bool is_all() const { return period_ == 1 && left_[0] && right_[0] && members_.size() == 1; }

  /// Number of elements; only meaningful for finite sets.
  std::optional<std::size_t> cardinality() const {
    if (!is_finite()) return std::nullopt;
    return members_.size();
  }

  RawSet raw() const {
    return {period_, lo_, hi_, members_, left_residues(), right_residues()};
  }

  friend bool operator==(const SymbolicSet&, const SymbolicSet&) = default;

  friend SymbolicSet combine(const SymbolicSet& a, const SymbolicSet& b, SetOp op);
  friend SymbolicSet complement(const SymbolicSet& a);
  friend bool is_subset(const SymbolicSet& a, const SymbolicSet& b);

 private:
  static bool any(const std::vector<bool>& v) {
    return std::find(v.begin(), v.end(), true) != v.end();
  }

  static std::vector<Int> residues(const std::vector<bool>& v) {
    std::vector<Int> out;
    for (std::size_t r = 0; r < v.size(); ++r)
      if (v[r]) out.push_back(static_cast<Int>(r));
    return out;
  }

  static Int minimal_period(const std::vector<bool>& pattern) {
    const Int p = static_cast<Int>(pattern.size());
    for (Int d = 1; d < p; ++d) {
      if (p % d != 0) continue;
      bool ok = true;
      for (Int r = d; r < p && ok; ++r)
        ok = pattern[static_cast<std::size_t>(r)] == pattern[static_cast<std::size_t>(r % d)];
      if (ok) return d;
    }
    return p;
  }

  // Builds the canonical form of the set that agrees with `window` on
  // [lo, hi], with `left` below lo and with `right` above hi.
  static SymbolicSet canonicalize(Int p, Int lo, Int hi, const std::vector<bool>& window,
                                  const std::vector<bool>& left, const std::vector<bool>& right) {
    const Int np = std::lcm(minimal_period(left), minimal_period(right));
    auto L = [&](Int x) { return left[static_cast<std::size_t>(floor_mod(x, p))]; };
    auto R = [&](Int x) { return right[static_cast<std::size_t>(floor_mod(x, p))]; };
    auto member = [&](Int x) {
      if (x < lo) return L(x);
      if (x > hi) return R(x);
      return static_cast<bool>(window[static_cast<std::size_t>(x - lo)]);
    };

    // Smallest h such that every x > h follows the right pattern.
    std::optional<Int> hi_min;
    for (Int h = hi; h >= lo; --h) {
      if (member(h) != R(h)) {
        hi_min = h;
        break;
      }
    }
    if (!hi_min) {
      for (Int h = lo - 1; h >= lo - np; --h) {
        if (L(h) != R(h)) {
          hi_min = h;
          break;
        }
      }
    }
    // Largest l such that every x < l follows the left pattern.
    std::optional<Int> lo_max;
    for (Int l = lo; l <= hi; ++l) {
      if (member(l) != L(l)) {
        lo_max = l;
        break;
      }
    }
    if (!lo_max) {
      for (Int l = hi + 1; l <= hi + np; ++l) {
        if (L(l) != R(l)) {
          lo_max = l;
          break;
        }
      }
    }

    SymbolicSet out;
    out.period_ = np;
    out.left_.assign(static_cast<std::size_t>(np), false);
    out.right_.assign(static_cast<std::size_t>(np), false);
    for (Int r = 0; r < np; ++r) {
      out.left_[static_cast<std::size_t>(r)] = L(r);
      out.right_[static_cast<std::size_t>(r)] = R(r);
    }
    if (!hi_min) {
      // Purely periodic: both patterns agree everywhere.
      out.lo_ = out.hi_ = 0;
    } else if (*lo_max <= *hi_min) {
      out.lo_ = *lo_max;
      out.hi_ = *hi_min;
    } else {
      out.lo_ = out.hi_ = *hi_min;
    }
    out.members_.clear();
    for (Int x = out.lo_; x <= out.hi_; ++x)
      if (member(x)) out.members_.push_back(x);
    return out;
  }

  Int period_ = 1;
  Int lo_ = 0;
  Int hi_ = 0;
  std::vector<Int> members_;
  std::vector<bool> left_;
  std::vector<bool> right_;
};

inline SymbolicSet combine(const SymbolicSet& a, const SymbolicSet& b, SetOp op) {
  auto apply = [op](bool x, bool y) {
    switch (op) {
      case SetOp::intersect: return x && y;
      case SetOp::unite: return x || y;
      case SetOp::difference: return x && !y;
      case SetOp::complement: return !x;
    }
    return false;
  };
  const Int p = std::lcm(a.period_, b.period_);
  const Int lo = std::min(a.lo_, b.lo_);
  const Int hi = std::max(a.hi_, b.hi_);
  std::vector<bool> window(static_cast<std::size_t>(hi - lo + 1));
  for (Int x = lo; x <= hi; ++x)
    window[static_cast<std::size_t>(x - lo)] = apply(a.contains(x), b.contains(x));
  std::vector<bool> left(static_cast<std::size_t>(p)), right(static_cast<std::size_t>(p));
  for (Int r = 0; r < p; ++r) {
    left[static_cast<std::size_t>(r)] = apply(a.left_has(r), b.left_has(r));
    right[static_cast<std::size_t>(r)] = apply(a.right_has(r), b.right_has(r));
  }
  return SymbolicSet::canonicalize(p, lo, hi, window, left, right);
}

inline SymbolicSet complement(const SymbolicSet& a) {
  return combine(a, SymbolicSet::empty(), SetOp::complement);
}

inline SymbolicSet intersect(const SymbolicSet& a, const SymbolicSet& b) {
  return combine(a, b, SetOp::intersect);
}
inline SymbolicSet unite(const SymbolicSet& a, const SymbolicSet& b) {
  return combine(a, b, SetOp::unite);
}
inline SymbolicSet difference(const SymbolicSet& a, const SymbolicSet& b) {
  return combine(a, b, SetOp::difference);
}

/// Dispatches on `op`; `b` is ignored for complement and required otherwise.
inline SymbolicSet algebra(SetOp op, const SymbolicSet& a, const std::optional<SymbolicSet>& b = std::nullopt) {
  if (op == SetOp::complement) {
    if (b) throw ValidationError("complement takes one argument");
    return complement(a);
  }
  if (!b) throw ValidationError("binary set operation needs two arguments");
  return combine(a, *b, op);
}

/// A \ B == {} without materializing the difference.
inline bool is_subset(const SymbolicSet& a, const SymbolicSet& b) {
  const Int p = std::lcm(a.period_, b.period_);
  for (Int r = 0; r < p; ++r) {
    if (a.left_has(r) && !b.left_has(r)) return false;
    if (a.right_has(r) && !b.right_has(r)) return false;
  }
  const Int lo = std::min(a.lo_, b.lo_);
  const Int hi = std::max(a.hi_, b.hi_);
  for (Int x = lo; x <= hi; ++x)
    if (a.contains(x) && !b.contains(x)) return false;
  return true;
}

struct Cardinality {
  bool finite = true;
  std::size_t count = 0;  // valid when finite

  static Cardinality infinite() { return {false, 0}; }
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

inline Cardinality classify(const SymbolicSet& s) {
  if (auto n = s.cardinality()) return {true, *n};
  return Cardinality::infinite();
}

/// Smallest canonical rank >= from_rank whose integer lies in s.
inline std::optional<std::uint64_t> next_member_rank(const SymbolicSet& s, std::uint64_t from_rank) {
  if (s.is_finite()) {
    std::optional<std::uint64_t> best;
    for (Int x : s.members()) {
      const auto r = canonical::rank(x);
      if (r >= from_rank && (!best || r < *best)) best = r;
    }
    return best;
  }
  for (std::uint64_t r = from_rank;; ++r)
    if (s.contains(canonical::at(r))) return r;
}

/// The (k+1)-th element of s in canonical order.
inline Int enumerate_rank(const SymbolicSet& s, std::uint64_t k) {
  if (s.is_finite()) {
    if (k >= s.members().size()) throw RangeError("enumerate_rank: index beyond finite set");
    std::vector<Int> sorted = s.members();
    std::sort(sorted.begin(), sorted.end(), canonical::Less{});
    return sorted[static_cast<std::size_t>(k)];
  }
  std::uint64_t seen = 0;
  for (std::uint64_t r = 0;; ++r) {
    const Int x = canonical::at(r);
    if (s.contains(x)) {
      if (seen == k) return x;
      ++seen;
    }
  }
}

/// Canonical-order least element, if any.
inline std::optional<Int> least(const SymbolicSet& s) {
  auto r = next_member_rank(s, 0);
  if (!r) return std::nullopt;
  return canonical::at(*r);
}

}  // namespace genlim
