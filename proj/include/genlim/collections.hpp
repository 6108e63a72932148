#pragma once

// Indexed language collections, the four oracles over them, the two-language
// construction used by the membership-query adversary, and builders for the
// example collections.
//
// Every builder also supplies an exact closure: given finite sets P and N it
// returns the intersection of all languages that contain P and avoid N, over
// the whole (infinite) collection. That is what makes closure dimensions and
// effective intersections exact rather than horizon-approximated.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "genlim/langset.hpp"

namespace genlim {

using IntSet = std::set<Int>;

class Language {
 public:
  explicit Language(SymbolicSet body) : body_(std::move(body)) {
    if (body_.is_finite()) throw ValidationError("languages must be infinite");
  }
  const SymbolicSet& body() const { return body_; }
  bool contains(Int x) const { return body_.contains(x); }
  friend bool operator==(const Language&, const Language&) = default;

 private:
  SymbolicSet body_;
};

/// Result of intersecting every language that contains P and avoids N.
/// `consistent` is false when no language qualifies.
struct Closure {
  bool consistent = false;
  SymbolicSet intersection;
};

class Collection {
 public:
  using Indexer = std::function<Language(std::size_t)>;
  using ClosureFn = std::function<Closure(const IntSet& P, const IntSet& N)>;
  using BoundFn = std::function<std::size_t(Int window)>;

  static Collection finite(std::string name, std::vector<Language> langs) {
    if (langs.empty()) throw ValidationError("a collection needs at least one language");
    Collection c;
    c.name_ = std::move(name);
    c.size_ = langs.size();
    auto shared = std::make_shared<std::vector<Language>>(std::move(langs));
    c.indexer_ = [shared](std::size_t i) { return (*shared)[i - 1]; };
    const std::size_t n = c.size_.value();
    c.bound_ = [n](Int) { return n; };
    return c;
  }

  /// `closure` and `bound` document the closed form; both must be exact.
  static Collection lazy(std::string name, Indexer indexer, ClosureFn closure, BoundFn bound) {
    Collection c;
    c.name_ = std::move(name);
    c.indexer_ = std::move(indexer);
    c.closure_ = std::move(closure);
    c.bound_ = std::move(bound);
    return c;
  }

  const std::string& name() const { return name_; }
  std::optional<std::size_t> size() const { return size_; }
  bool is_finite() const { return size_.has_value(); }

  bool valid_index(std::size_t i) const { return i >= 1 && (!size_ || i <= *size_); }

  /// References stay valid for the lifetime of the collection.
  const Language& language(std::size_t i) const {
    if (!valid_index(i))
      throw RangeError("collection '" + name_ + "': index " + std::to_string(i) + " out of range");
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->langs.find(i);
    if (it != cache_->langs.end()) return it->second;
    return cache_->langs.emplace(i, indexer_(i)).first->second;
  }

  /// First min(n, size) languages as a finite collection.
  Collection prefix(std::size_t n) const {
    if (n == 0) throw ValidationError("prefix length must be positive");
    const std::size_t m = size_ ? std::min(n, *size_) : n;
    std::vector<Language> langs;
    langs.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) langs.push_back(language(i));
    return finite(name_ + "[:" + std::to_string(m) + "]", std::move(langs));
  }

  /// A prefix length n such that every language past n agrees on [-W, W]
  /// with some language among the first n.
  std::size_t prefix_bound(Int window) const { return bound_(window); }

  /// Exact closure over the entire collection.
  Closure closure(const IntSet& P, const IntSet& N = {}) const {
    if (closure_) return closure_(P, N);
    return scan_closure(*size_, P, N);
  }

  /// Closure restricted to the first n languages, by direct scan.
  Closure scan_closure(std::size_t n, const IntSet& P, const IntSet& N) const {
    Closure out;
    out.intersection = SymbolicSet::all();
    const std::size_t m = size_ ? std::min(n, *size_) : n;
    for (std::size_t i = 1; i <= m; ++i) {
      const Language& l = language(i);
      bool ok = true;
      for (Int p : P) ok = ok && l.contains(p);
      for (Int q : N) ok = ok && !l.contains(q);
      if (!ok) continue;
      out.consistent = true;
      out.intersection = intersect(out.intersection, l.body());
    }
    if (!out.consistent) out.intersection = SymbolicSet::empty();
    return out;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<std::size_t, Language> langs;
  };

  Collection() : cache_(std::make_shared<Cache>()) {}

  std::string name_;
  std::optional<std::size_t> size_;
  Indexer indexer_;
  ClosureFn closure_;
  BoundFn bound_;
  std::shared_ptr<Cache> cache_;
};

struct OracleCounts {
  std::size_t membership = 0;
  std::size_t infinite_intersection = 0;
  std::size_t finite_difference = 0;
  std::size_t subset = 0;

  std::size_t non_membership() const { return infinite_intersection + finite_difference + subset; }
  friend bool operator==(const OracleCounts&, const OracleCounts&) = default;
};

/// The oracle interfaces a generator may use. Every call is counted.
class Oracles {
 public:
  explicit Oracles(const Collection& c) : c_(&c) {}

  const Collection& collection() const { return *c_; }
  const OracleCounts& counts() const { return counts_; }
  void reset_counts() { counts_ = {}; }

  bool membership(std::size_t i, Int w) {
    ++counts_.membership;
    return c_->language(i).contains(w);
  }

  /// Empty index set means the intersection of zero languages, i.e. Z.
  bool infinite_intersection(const std::vector<std::size_t>& indices) {
    ++counts_.infinite_intersection;
    SymbolicSet acc = SymbolicSet::all();
    for (std::size_t i : indices) acc = intersect(acc, c_->language(i).body());
    return !acc.is_finite();
  }

  /// Same answer as infinite_intersection(indices + {i}) when `running` is
  /// the intersection of `indices`; lets callers keep the running set.
  bool infinite_intersection_with(const SymbolicSet& running, std::size_t i, SymbolicSet* out = nullptr) {
    ++counts_.infinite_intersection;
    SymbolicSet next = intersect(running, c_->language(i).body());
    const bool inf = !next.is_finite();
    if (out) *out = std::move(next);
    return inf;
  }

  bool finite_difference(std::size_t i, std::size_t j) {
    ++counts_.finite_difference;
    return difference(c_->language(i).body(), c_->language(j).body()).is_finite();
  }

  bool subset(std::size_t i, std::size_t j) {
    ++counts_.subset;
    return is_subset(c_->language(i).body(), c_->language(j).body());
  }

 private:
  const Collection* c_;
  OracleCounts counts_;
};

// ---------------------------------------------------------------------------
// Two languages built up irrevocably, one string at a time.

enum class Placement { unassigned, zero, one, both };

inline const char* placement_name(Placement p) {
  switch (p) {
    case Placement::unassigned: return "unassigned";
    case Placement::zero: return "0";
    case Placement::one: return "1";
    case Placement::both: return "both";
  }
  return "?";
}

class DynamicLanguagePair {
 public:
  struct Entry {
    Int key;
    Placement placement;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  Placement placement(Int w) const {
    auto it = assigned_.find(w);
    return it == assigned_.end() ? Placement::unassigned : it->second;
  }

  int toggle() const { return toggle_; }
  void flip() { toggle_ = 1 - toggle_; }

  void assign(Int w, Placement p) {
    if (p == Placement::unassigned) throw ValidationError("cannot assign 'unassigned'");
    auto [it, inserted] = assigned_.emplace(w, p);
    if (!inserted && it->second != p)
      throw ValidationError("placement of " + std::to_string(w) + " is irrevocable");
    if (inserted) log_.push_back({w, p});
  }

  /// Canonically least string not yet placed.
  Int fresh() {
    while (assigned_.count(canonical::at(cursor_))) ++cursor_;
    return canonical::at(cursor_);
  }

  /// Membership in L_0 or L_1. Strings never placed count as members of both,
  /// so each language stays infinite whatever happened during the run.
  bool contains(int which, Int w) const {
    switch (placement(w)) {
      case Placement::unassigned:
      case Placement::both: return true;
      case Placement::zero: return which == 0;
      case Placement::one: return which == 1;
    }
    return false;
  }

  const std::vector<Entry>& log() const { return log_; }
  std::size_t count(Placement p) const {
    std::size_t n = 0;
    for (const auto& e : log_) n += e.placement == p;
    return n;
  }

  static DynamicLanguagePair replay(const std::vector<Entry>& log) {
    DynamicLanguagePair pair;
    for (const auto& e : log) pair.assign(e.key, e.placement);
    return pair;
  }

  friend bool operator==(const DynamicLanguagePair& a, const DynamicLanguagePair& b) {
    return a.assigned_ == b.assigned_;
  }

 private:
  std::map<Int, Placement> assigned_;
  std::vector<Entry> log_;
  int toggle_ = 0;
  std::uint64_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Builders.

struct CollectionParams {
  std::uint64_t ordering_seed = 0;  // 0 keeps the documented order
  Int evenodd_offset = 0;           // |S_d| = d + offset
};

namespace detail {

inline constexpr std::size_t kOrderBlock = 8;

// Permutation of {0..n-1}; written out so results do not depend on the
// standard library's shuffle.
inline std::vector<std::size_t> fisher_yates(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

// Shuffles indices within consecutive blocks of eight, so any prefix whose
// length is a multiple of eight holds the same languages as before.
inline std::size_t reorder(std::size_t k, std::uint64_t seed) {
  if (seed == 0) return k;
  const std::size_t block = (k - 1) / kOrderBlock;
  const auto perm = fisher_yates(kOrderBlock, seed * 0x9E3779B97F4A7C15ULL + block);
  return block * kOrderBlock + perm[(k - 1) % kOrderBlock] + 1;
}

inline std::size_t round_block(std::size_t n) {
  return (n + kOrderBlock - 1) / kOrderBlock * kOrderBlock;
}

inline SymbolicSet finite_of(const IntSet& xs) {
  std::vector<Int> v(xs.begin(), xs.end());
  return SymbolicSet::finite(v);
}

// (a, b) canonical ranks with a < b, ordered by b then a.
inline std::pair<std::uint64_t, std::uint64_t> diagonal_pair(std::uint64_t q) {
  std::uint64_t b = 1;
  while ((b + 1) * b / 2 <= q) ++b;
  return {q - b * (b - 1) / 2, b};
}

inline Collection make_tails() {
  auto index = [](std::size_t k) {
    if (k == 1) return Language(SymbolicSet::all());
    return Language(SymbolicSet::at_least(canonical::at(k - 2)));
  };
  auto closure = [](const IntSet& P, const IntSet& N) {
    Closure out;
    const bool z_ok = N.empty();
    if (P.empty()) {
      // Infinitely many tails above max N remain; they intersect to nothing.
      out.consistent = true;
      out.intersection = SymbolicSet::empty();
      return out;
    }
    const Int lo = *P.begin();
    const bool tails_ok = N.empty() || *N.rbegin() < lo;
    if (tails_ok) {
      out.consistent = true;
      out.intersection = SymbolicSet::at_least(lo);
    } else if (z_ok) {
      out.consistent = true;
      out.intersection = SymbolicSet::all();
    }
    return out;
  };
  auto bound = [](Int w) { return static_cast<std::size_t>(2 * w + 4); };
  return Collection::lazy("tails", index, closure, bound);
}

inline Collection make_cofinite1() {
  auto index = [](std::size_t k) {
    if (k == 1) return Language(SymbolicSet::all());
    return Language(complement(SymbolicSet::finite({canonical::at(k - 2)})));
  };
  auto closure = [](const IntSet& P, const IntSet& N) {
    Closure out;
    if (N.size() >= 2) return out;
    if (N.size() == 1) {
      const Int y = *N.begin();
      if (P.count(y)) return out;
      out.consistent = true;
      out.intersection = complement(SymbolicSet::finite({y}));
      return out;
    }
    out.consistent = true;
    out.intersection = finite_of(P);
    return out;
  };
  auto bound = [](Int w) { return static_cast<std::size_t>(2 * w + 2); };
  return Collection::lazy("cofinite1", index, closure, bound);
}

struct EvenOddLayout {
  Int offset = 0;
  Int size(Int d) const { return d + offset; }
  Int start(Int d) const { return 1 + (d - 1) * d / 2 + (d - 1) * offset; }
  Int block_of(Int x) const {  // x >= 1
    Int d = 1;
    while (start(d) + size(d) - 1 < x) ++d;
    return d;
  }
  SymbolicSet block(Int d) const {
    return intersect(SymbolicSet::at_least(start(d)), SymbolicSet::at_most(start(d) + size(d) - 1));
  }
};

inline SymbolicSet negative_evens() {
  return intersect(SymbolicSet::residue_class(2, 0), SymbolicSet::at_most(-1));
}
inline SymbolicSet negative_odds() {
  return intersect(SymbolicSet::residue_class(2, 1), SymbolicSet::at_most(-1));
}

inline Collection make_evenodd(Int offset) {
  if (offset < 0) throw ValidationError("evenodd offset must be non-negative");
  const EvenOddLayout lay{offset};
  auto index = [lay](std::size_t k) {
    const Int d = static_cast<Int>((k + 1) / 2);
    const SymbolicSet base = (k % 2 == 1) ? negative_evens() : negative_odds();
    return Language(unite(base, lay.block(d)));
  };
  auto closure = [lay](const IntSet& P, const IntSet& N) {
    Closure out;
    if (P.count(0)) return out;
    std::optional<Int> d;
    for (Int p : P) {
      if (p <= 0) continue;
      const Int b = lay.block_of(p);
      if (d && *d != b) return out;
      d = b;
    }
    out.intersection = SymbolicSet::all();
    for (const SymbolicSet& base : {negative_evens(), negative_odds()}) {
      bool ok = true;
      for (Int p : P)
        if (p < 0 && !base.contains(p)) ok = false;
      for (Int q : N)
        if (q < 0 && base.contains(q)) ok = false;
      if (!ok) continue;
      if (d) {
        const SymbolicSet block = lay.block(*d);
        for (Int q : N)
          if (block.contains(q)) ok = false;
        if (!ok) continue;
        out.consistent = true;
        out.intersection = intersect(out.intersection, unite(base, block));
      } else {
        // All but finitely many blocks avoid N; their union with base
        // intersects to base.
        out.consistent = true;
        out.intersection = intersect(out.intersection, base);
      }
    }
    if (!out.consistent) out.intersection = SymbolicSet::empty();
    return out;
  };
  auto bound = [lay](Int w) {
    Int d = 1;
    while (lay.start(d) <= w) ++d;
    return static_cast<std::size_t>(2 * d);
  };
  return Collection::lazy("evenodd", index, closure, bound);
}

inline Collection make_cofinite12() {
  auto index = [](std::size_t k) {
    if (k % 2 == 1) return Language(complement(SymbolicSet::finite({canonical::at((k - 1) / 2)})));
    const auto [a, b] = diagonal_pair(k / 2 - 1);
    return Language(complement(SymbolicSet::finite({canonical::at(a), canonical::at(b)})));
  };
  auto closure = [](const IntSet& P, const IntSet& N) {
    Closure out;
    if (N.size() > 2) return out;
    for (Int q : N)
      if (P.count(q)) return out;
    out.consistent = true;
    out.intersection = N.size() == 2 ? complement(finite_of(N)) : finite_of(P);
    return out;
  };
  auto bound = [](Int w) {
    const std::uint64_t r = 2 * static_cast<std::uint64_t>(std::max<Int>(w, 1));
    const std::size_t singles = 2 * (r + 2) + 1;
    const std::uint64_t q = r * (r - 1) / 2 + r - 1;
    const std::size_t pairs = 2 * (q + 1);
    return std::max(singles, pairs);
  };
  return Collection::lazy("cofinite12", index, closure, bound);
}

inline Collection with_ordering(const Collection& base, std::uint64_t seed) {
  if (seed == 0 || base.is_finite()) return base;
  return Collection::lazy(
      base.name(), [base, seed](std::size_t k) { return base.language(reorder(k, seed)); },
      [base](const IntSet& P, const IntSet& N) { return base.closure(P, N); },
      [base](Int w) { return round_block(base.prefix_bound(w)); });
}

}  // namespace detail

inline const std::vector<std::string>& paper_collection_names() {
  static const std::vector<std::string> names{"tails", "cofinite1", "evenodd", "cofinite12", "singleton"};
  return names;
}

/// tails:      1 -> Z, k >= 2 -> tail(c(k-2))
/// cofinite1:  1 -> Z, k >= 2 -> Z \ {c(k-2)}
/// evenodd:    2d-1 -> E + S_d, 2d -> O + S_d
/// cofinite12: 2k-1 -> Z \ {c(k-1)}, 2k -> Z \ {c(a), c(b)} for the
///             (k-1)-th pair a < b of ranks, ordered by b then a
/// singleton:  1 -> Z
/// where c is the canonical order 0, -1, 1, -2, 2, ...
inline Collection build_paper_collection(const std::string& name, const CollectionParams& params = {}) {
  Collection base = [&] {
    if (name == "tails") return detail::make_tails();
    if (name == "cofinite1") return detail::make_cofinite1();
    if (name == "evenodd") return detail::make_evenodd(params.evenodd_offset);
    if (name == "cofinite12") return detail::make_cofinite12();
    if (name == "singleton") return Collection::finite("singleton", {Language(SymbolicSet::all())});
    throw ValidationError("unknown collection '" + name + "'");
  }();
  return detail::with_ordering(base, params.ordering_seed);
}

}  // namespace genlim
