#pragma once

// Dimension witnesses and the transcript-level quantities they rest on:
// consistent languages, effective intersections, closure sets, and bounded
// searches of the two uniform-generation games.
//
// Game searches keep every move (inputs and queries) inside a window. A
// reported witness wins that restricted game; "none within budget" only says
// the bounded game has no winning adversary.

#include <array>
#include <bit>
#include <map>
#include <optional>
#include <string>

#include "genlim/adversaries.hpp"
#include "genlim/collections.hpp"
#include "genlim/complexity.hpp"
#include "genlim/generators.hpp"
#include "genlim/transcript.hpp"

namespace genlim {

// ---------------------------------------------------------------------------
// Consistency and effective intersection.

/// Inputs through round r plus yes-answered queries (P) and no-answered
/// queries (N).
struct Evidence {
  IntSet S, yes, no;
};

inline Evidence evidence(const Transcript& T, std::size_t r) {
  return {T.S(r), T.answered(r, true), T.answered(r, false)};
}

inline bool consistent_with(const SymbolicSet& L, const Evidence& ev) {
  for (Int x : ev.S)
    if (!L.contains(x)) return false;
  for (Int y : ev.yes)
    if (!L.contains(y)) return false;
  for (Int y : ev.no)
    if (L.contains(y)) return false;
  return true;
}

/// Indices among the first `prefix` languages consistent with T through r.
inline std::vector<std::size_t> consistent_languages(const Collection& c, const Transcript& T, std::size_t r,
                                                     std::size_t prefix) {
  const auto ev = evidence(T, r);
  const std::size_t n = c.size() ? std::min(prefix, *c.size()) : prefix;
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= n; ++i)
    if (consistent_with(c.language(i).body(), ev)) out.push_back(i);
  return out;
}

/// Intersection of every consistent language in the whole collection, minus
/// the inputs. Throws when nothing is consistent. With no evidence at all the
/// result is Z by convention.
inline SymbolicSet effective_intersection(const Collection& c, const Evidence& ev) {
  if (ev.S.empty() && ev.yes.empty() && ev.no.empty()) return SymbolicSet::all();
  IntSet P = ev.S;
  P.insert(ev.yes.begin(), ev.yes.end());
  const Closure cl = c.closure(P, ev.no);
  if (!cl.consistent) throw ValidationError("no language is consistent with the transcript");
  return difference(cl.intersection, to_set(ev.S));
}

inline SymbolicSet effective_intersection(const Collection& c, const Transcript& T, std::size_t r) {
  return effective_intersection(c, evidence(T, r));
}

/// Same quantity restricted to the first `prefix` languages, by scan.
inline SymbolicSet effective_intersection_prefix(const Collection& c, const Transcript& T, std::size_t r,
                                                 std::size_t prefix) {
  const auto idx = consistent_languages(c, T, r, prefix);
  if (idx.empty()) throw ValidationError("no language in the prefix is consistent with the transcript");
  SymbolicSet acc = SymbolicSet::all();
  for (std::size_t i : idx) acc = intersect(acc, c.language(i).body());
  return difference(acc, to_set(T.S(r)));
}

// ---------------------------------------------------------------------------
// Witnesses.

struct GameBudget {
  std::size_t max_rounds = 8;
  Int window = 8;               // moves range over [-window, window]
  std::size_t branch_cap = 64;  // adversary inputs tried per node
};

struct DimensionWitness {
  std::string kind;  // closure, gnf, gf
  std::size_t d = 0;
  bool found = false;
  IntSet witness_set;             // closure: S; games: inputs on the reported line
  Transcript play;                // games: one line of the winning strategy
  SymbolicSet certificate;        // closure: the finite intersection; games: E_r on the line
  std::size_t nodes = 0;          // states expanded
  std::size_t strategy_nodes = 0; // games: decision points in the winning strategy
};

namespace detail {

/// Window elements in canonical order; bit k of a mask stands for win[k].
inline std::vector<Int> window_elements(Int w) {
  if (w < 0 || 2 * w + 1 > 62) throw ValidationError("move window must lie within [-30, 30]");
  std::vector<Int> out;
  for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(2 * w + 1); ++r) out.push_back(canonical::at(r));
  return out;
}

inline IntSet from_mask(const std::vector<Int>& win, std::uint64_t m) {
  IntSet s;
  for (std::size_t k = 0; k < win.size(); ++k)
    if (m >> k & 1U) s.insert(win[k]);
  return s;
}

}  // namespace detail

/// Exact closure certificate for one set: intersection of every language
/// containing S. Finite means S witnesses closure dimension >= |S|.
inline Closure closure_of(const Collection& c, const IntSet& S) { return c.closure(S, {}); }

/// First size-d subset of [-W, W] (lexicographic in canonical rank) whose
/// containing languages intersect to a finite set.
inline DimensionWitness closure_witness(const Collection& c, std::size_t d, Int window) {
  DimensionWitness out;
  out.kind = "closure";
  out.d = d;
  if (d == 0) throw ValidationError("d must be positive");
  const auto win = detail::window_elements(window);
  if (d > win.size()) return out;
  std::vector<std::size_t> pick(d);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  for (;;) {
    IntSet S;
    for (std::size_t k : pick) S.insert(win[k]);
    ++out.nodes;
    const Closure cl = closure_of(c, S);
    if (cl.consistent && cl.intersection.is_finite()) {
      out.found = true;
      out.witness_set = S;
      out.certificate = cl.intersection;
      return out;
    }
    // Next combination.
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == win.size() - d + i - 1) --i;
    if (i == 0) return out;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
}

// ---------------------------------------------------------------------------
// Game without feedback. The generator's outputs never change which languages
// are consistent, so its universal choice collapses and only the inputs
// matter. Repeating an input gains the adversary nothing, so only fresh
// inputs are searched.

class GnfSearch {
 public:
  GnfSearch(const Collection& c, std::size_t d, GameBudget b)
      : c_(c), d_(d), b_(b), win_(detail::window_elements(b.window)) {}

  DimensionWitness run() {
    DimensionWitness out;
    out.kind = "gnf";
    out.d = d_;
    if (d_ == 0) throw ValidationError("d must be positive");
    out.found = wins(0);
    out.nodes = memo_.size();
    if (!out.found) return out;
    std::uint64_t m = 0;
    for (;;) {
      const auto& e = memo_.at(m);
      if (!e.move) break;
      const Int x = win_[*e.move];
      out.play.rounds.push_back({x, {}, {}, {}, {}});
      m |= std::uint64_t{1} << *e.move;
      ++out.strategy_nodes;
    }
    out.witness_set = detail::from_mask(win_, m);
    out.certificate = effective(m);
    return out;
  }

 private:
  struct Entry {
    bool win;
    std::optional<std::size_t> move;  // nullopt at a terminal win
  };

  SymbolicSet effective(std::uint64_t m) const {
    const IntSet S = detail::from_mask(win_, m);
    return difference(c_.closure(S, {}).intersection, to_set(S));
  }

  bool wins(std::uint64_t m) {
    if (auto it = memo_.find(m); it != memo_.end()) return it->second.win;
    const std::size_t r = static_cast<std::size_t>(std::popcount(m));
    if (r >= d_ && effective(m).is_empty()) return memo_[m] = {true, std::nullopt}, true;
    if (r >= b_.max_rounds) return memo_[m] = {false, std::nullopt}, false;
    std::size_t tried = 0;
    for (std::size_t k = 0; k < win_.size() && tried < b_.branch_cap; ++k) {
      if (m >> k & 1U) continue;
      const std::uint64_t next = m | std::uint64_t{1} << k;
      if (!c_.closure(detail::from_mask(win_, next), {}).consistent) continue;
      ++tried;
      if (wins(next)) return memo_[m] = {true, k}, true;
    }
    return memo_[m] = {false, std::nullopt}, false;
  }

  const Collection& c_;
  std::size_t d_;
  GameBudget b_;
  std::vector<Int> win_;
  std::map<std::uint64_t, Entry> memo_;
};

inline DimensionWitness gnf_witness(const Collection& c, std::size_t d, const GameBudget& b = {}) {
  return GnfSearch(c, d, b).run();
}

// ---------------------------------------------------------------------------
// Game with feedback. State: inputs S, queries answered yes outside S, and
// queries answered no. Each round the adversary picks a fresh input, then for
// every query the generator might ask (or none) must have a consistent answer
// that keeps it winning.

class GfSearch {
 public:
  GfSearch(const Collection& c, std::size_t d, GameBudget b)
      : c_(c), d_(d), b_(b), win_(detail::window_elements(b.window)) {}

  DimensionWitness run() {
    DimensionWitness out;
    out.kind = "gf";
    out.d = d_;
    if (d_ == 0) throw ValidationError("d must be positive");
    const Key root{0, 0, 0};
    out.found = wins(root);
    out.nodes = memo_.size();
    if (!out.found) return out;
    // Report the line where the generator never queries.
    Key k = root;
    for (;;) {
      const auto& e = memo_.at(k);
      if (!e.move) break;
      out.play.rounds.push_back({win_[*e.move], {}, {}, {}, {}});
      k[0] |= std::uint64_t{1} << *e.move;
    }
    out.strategy_nodes = count_strategy(root);
    out.witness_set = detail::from_mask(win_, k[0]);
    out.certificate = effective(k);
    return out;
  }

  using Key = std::array<std::uint64_t, 3>;  // S, yes, no

 private:
  struct Entry {
    bool win;
    std::optional<std::size_t> move;
  };

  Evidence ev(const Key& k) const {
    return {detail::from_mask(win_, k[0]), detail::from_mask(win_, k[1]), detail::from_mask(win_, k[2])};
  }
  bool consistent(const Key& k) const {
    const auto e = ev(k);
    IntSet P = e.S;
    P.insert(e.yes.begin(), e.yes.end());
    return c_.closure(P, e.no).consistent;
  }
  SymbolicSet effective(const Key& k) const { return effective_intersection(c_, ev(k)); }

  bool wins(const Key& k) {
    if (auto it = memo_.find(k); it != memo_.end()) return it->second.win;
    const std::size_t r = static_cast<std::size_t>(std::popcount(k[0]));
    if (r >= d_ && r > 0 && effective(k).is_empty()) return memo_[k] = {true, std::nullopt}, true;
    if (r >= b_.max_rounds) return memo_[k] = {false, std::nullopt}, false;
    memo_[k] = {false, std::nullopt};  // guards against re-entry; states only grow
    std::size_t tried = 0;
    for (std::size_t x = 0; x < win_.size() && tried < b_.branch_cap; ++x) {
      const std::uint64_t bit = std::uint64_t{1} << x;
      if ((k[0] | k[1] | k[2]) & bit) {
        // Already-asked strings may still be entered if answered yes.
        if (!(k[1] & bit)) continue;
      }
      Key after{k[0] | bit, k[1] & ~bit, k[2]};
      if (!consistent(after)) continue;
      ++tried;
      if (survives_all_queries(after)) return memo_[k] = {true, x}, true;
    }
    return false;
  }

  bool survives_all_queries(const Key& k) {
    // No query, or a query about something already settled, changes nothing.
    if (!wins(k)) return false;
    const std::uint64_t known = k[0] | k[1] | k[2];
    for (std::size_t y = 0; y < win_.size(); ++y) {
      const std::uint64_t bit = std::uint64_t{1} << y;
      if (known & bit) continue;
      const Key yes{k[0], k[1] | bit, k[2]}, no{k[0], k[1], k[2] | bit};
      const bool ok = (consistent(yes) && wins(yes)) || (consistent(no) && wins(no));
      if (!ok) return false;
    }
    return true;
  }

  std::size_t count_strategy(const Key& k) {
    const auto it = memo_.find(k);
    if (it == memo_.end() || !it->second.win || !it->second.move) return 0;
    const std::uint64_t bit = std::uint64_t{1} << *it->second.move;
    const Key after{k[0] | bit, k[1] & ~bit, k[2]};
    std::size_t n = 1 + count_strategy(after);
    const std::uint64_t known = after[0] | after[1] | after[2];
    for (std::size_t y = 0; y < win_.size(); ++y) {
      const std::uint64_t ybit = std::uint64_t{1} << y;
      if (known & ybit) continue;
      const Key yes{after[0], after[1] | ybit, after[2]}, no{after[0], after[1], after[2] | ybit};
      if (auto a = memo_.find(yes); a != memo_.end() && a->second.win)
        n += count_strategy(yes);
      else
        n += count_strategy(no);
    }
    return n;
  }

  const Collection& c_;
  std::size_t d_;
  GameBudget b_;
  std::vector<Int> win_;
  std::map<Key, Entry> memo_;
};

inline DimensionWitness gf_witness(const Collection& c, std::size_t d, const GameBudget& b = {}) {
  return GfSearch(c, d, b).run();
}

// ---------------------------------------------------------------------------
// The feedback adversary for the pairs-excluded collection, for a fixed d.
//
// Rounds 1..d: a fresh input if the previous query was already an input (or
// absent), otherwise the previous query itself. Every query is answered yes
// except the round-d query, answered yes iff it is an input. Afterwards a
// language is fixed and enumerated canonically.

class EchoAdversary : public AdversaryStrategy {
 public:
  explicit EchoAdversary(std::size_t d) : d_(d) {
    if (d == 0) throw ValidationError("d must be positive");
  }
  std::string name() const override { return "echo"; }

  Int next_input(const Transcript& past) override {
    const std::size_t t = past.size() + 1;
    if (t <= d_) {
      const IntSet S = past.S();
      if (!past.empty() && past.rounds.back().y && !S.count(*past.rounds.back().y)) return *past.rounds.back().y;
      for (std::uint64_t r = 0;; ++r)
        if (!S.count(canonical::at(r))) return canonical::at(r);
    }
    if (!target_) choose(past);
    return enumerate_rank(*target_, cursor_++);
  }

  bool answer(const Transcript& past, Int x, Int y) override {
    const std::size_t t = past.size() + 1;
    if (t < d_) return true;
    if (t == d_) {
      IntSet S = past.S();
      S.insert(x);
      return S.count(y) > 0;
    }
    return target_->contains(y);
  }

  const std::optional<SymbolicSet>& target() const { return target_; }

 private:
  void choose(const Transcript& past) {
    const IntSet S = past.S(d_);
    const Round& last = past.rounds[d_ - 1];
    if (last.y && last.a && !*last.a) {
      // Exclude the refused query and one more string outside S.
      const Int i = *last.y;
      for (std::uint64_t r = 0;; ++r) {
        const Int j = canonical::at(r);
        if (j != i && !S.count(j)) {
          target_ = complement(SymbolicSet::finite({i, j}));
          return;
        }
      }
    }
    for (std::uint64_t r = 0;; ++r)
      if (!S.count(canonical::at(r))) {
        target_ = complement(SymbolicSet::finite({canonical::at(r)}));
        return;
      }
  }

  std::size_t d_;
  std::optional<SymbolicSet> target_;
  std::uint64_t cursor_ = 0;
};

/// Generator that asks a fixed query per round and emits a fixed output.
/// Used to enumerate every query pattern over a window.
class ScriptedQueryGenerator : public GeneratorStrategy {
 public:
  ScriptedQueryGenerator(std::vector<std::optional<Int>> queries, std::vector<Int> outputs)
      : queries_(std::move(queries)), outputs_(std::move(outputs)) {}
  std::string name() const override { return "scripted-query"; }
  std::optional<Int> query(const Transcript& past, Int) override {
    return past.size() < queries_.size() ? queries_[past.size()] : std::nullopt;
  }
  Generation generate(const Transcript& past, const Turn&) override {
    return {past.size() < outputs_.size() ? outputs_[past.size()] : 0, std::nullopt};
  }

 private:
  std::vector<std::optional<Int>> queries_;
  std::vector<Int> outputs_;
};

// ---------------------------------------------------------------------------
// Uniform generator with feedback read off a failed search: each round ask
// the first query (in canonical order over the window) after which every
// consistent answer leaves the effective intersection nonempty, then emit the
// least element of the effective intersection.

class GfDerivedGenerator : public GeneratorStrategy {
 public:
  GfDerivedGenerator(const Collection& c, Int window) : c_(c), win_(detail::window_elements(window)) {}
  std::string name() const override { return "gf-derived"; }

  std::optional<Int> query(const Transcript& past, Int x) override {
    Evidence ev = evidence(past, past.size());
    ev.S.insert(x);
    for (Int y : win_) {
      if (ev.S.count(y) || ev.yes.count(y) || ev.no.count(y)) continue;
      bool safe = true, any = false;
      for (bool a : {true, false}) {
        Evidence next = ev;
        (a ? next.yes : next.no).insert(y);
        IntSet P = next.S;
        P.insert(next.yes.begin(), next.yes.end());
        if (!c_.closure(P, next.no).consistent) continue;
        any = true;
        if (effective_intersection(c_, next).is_empty()) safe = false;
      }
      if (safe && any) return y;
    }
    return std::nullopt;
  }

  Generation generate(const Transcript& past, const Turn& turn) override {
    Evidence ev = evidence(past, past.size());
    ev.S.insert(turn.x);
    if (turn.query && turn.answer) (*turn.answer ? ev.yes : ev.no).insert(*turn.query);
    IntSet P = ev.S;
    P.insert(ev.yes.begin(), ev.yes.end());
    if (!c_.closure(P, ev.no).consistent) return {std::nullopt, std::nullopt};
    const SymbolicSet E = effective_intersection(c_, ev);
    if (auto z = least(E)) return {z, std::nullopt};
    return {zigzag_next({}, ev.S, true), std::nullopt};
  }

 private:
  const Collection& c_;
  std::vector<Int> win_;
};

}  // namespace genlim
