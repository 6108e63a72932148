#pragma once

// Generator strategies: greedy intersection, the critical-language generator,
// zigzag, and the two generate-only (exhaustive) generators.
//
// Each algorithm exists as a pure function of (collection, S_t, t) and as a
// GeneratorStrategy that drives it from a transcript. Strategies keep a
// per-run consistency cache; the pure functions recompute from scratch.

#include <functional>
#include <memory>
#include <string>

#include "genlim/collections.hpp"
#include "genlim/complexity.hpp"
#include "genlim/transcript.hpp"

namespace genlim {

/// Output of one generator step. A missing z is the "declined" sentinel.
struct Generation {
  std::optional<Int> z;
  std::optional<Enumerator> snapshot;
};

class GeneratorStrategy {
 public:
  virtual ~GeneratorStrategy() = default;
  virtual std::string name() const = 0;
  /// Feedback mode only; nullopt means no query this round.
  virtual std::optional<Int> query(const Transcript& /*past*/, Int /*x*/) { return std::nullopt; }
  virtual Generation generate(const Transcript& past, const Turn& turn) = 0;
  virtual bool has_snapshots() const { return false; }
  /// Oracle usage so far, for generators that go through the oracles.
  virtual std::optional<OracleCounts> oracle_counts() const { return std::nullopt; }
};

using GeneratorPtr = std::unique_ptr<GeneratorStrategy>;

/// Least element of s (canonical order) outside `avoid`, if any.
inline std::optional<Int> least_outside(const SymbolicSet& s, const IntSet& avoid) {
  std::uint64_t r = 0;
  for (;;) {
    auto next = next_member_rank(s, r);
    if (!next) return std::nullopt;
    const Int x = canonical::at(*next);
    if (!avoid.count(x)) return x;
    r = *next + 1;
  }
}

inline IntSet with_input(const Transcript& past, Int x) {
  IntSet s = past.S();
  s.insert(x);
  return s;
}

// ---------------------------------------------------------------------------
// Which of L_1..L_t contain S_t, via membership calls.

class ConsistencyTracker {
 public:
  /// `inputs` lists distinct inputs in arrival order. If it extends the
  /// previous call's list only the new work is done; otherwise start over.
  std::vector<std::size_t> update(Oracles& o, const std::vector<Int>& inputs, std::size_t t) {
    const bool extends = inputs.size() >= seen_.size() && std::equal(seen_.begin(), seen_.end(), inputs.begin());
    if (!extends) {
      seen_.clear();
      alive_.clear();
    }
    const auto& c = o.collection();
    const std::size_t n = c.size() ? std::min(t, *c.size()) : t;
    // New inputs against languages already tracked.
    for (std::size_t k = seen_.size(); k < inputs.size(); ++k)
      for (std::size_t i = 1; i <= alive_.size(); ++i)
        if (alive_[i - 1] && !o.membership(i, inputs[k])) alive_[i - 1] = false;
    seen_ = inputs;
    // Languages entering the window get checked against everything.
    while (alive_.size() < n) {
      const std::size_t i = alive_.size() + 1;
      bool ok = true;
      for (Int x : seen_)
        if (!o.membership(i, x)) {
          ok = false;
          break;
        }
      alive_.push_back(ok);
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i <= n; ++i)
      if (alive_[i - 1]) out.push_back(i);
    return out;
  }

 private:
  std::vector<Int> seen_;
  std::vector<bool> alive_;
};

inline std::vector<Int> arrival_order(const Transcript& past, Int x) {
  std::vector<Int> out;
  IntSet seen;
  for (const auto& r : past.rounds)
    if (seen.insert(r.x).second) out.push_back(r.x);
  if (seen.insert(x).second) out.push_back(x);
  return out;
}

inline std::vector<std::size_t> consistent_indices(Oracles& o, const IntSet& S, std::size_t t) {
  ConsistencyTracker tr;
  return tr.update(o, std::vector<Int>(S.begin(), S.end()), t);
}

// ---------------------------------------------------------------------------
// Greedy intersection.

struct GreedyResult {
  Int z = 0;
  SymbolicSet I;                      // final running intersection
  std::vector<std::size_t> absorbed;  // indices intersected into I
};

namespace detail {

inline GreedyResult greedy_from(Oracles& o, const std::vector<std::size_t>& consistent, const IntSet& S,
                                const IntSet& avoid) {
  GreedyResult res;
  res.I = SymbolicSet::all();
  for (std::size_t i : consistent) {
    SymbolicSet next;
    if (o.infinite_intersection_with(res.I, i, &next)) {
      res.I = std::move(next);
      res.absorbed.push_back(i);
    }
  }
  IntSet skip = S;
  skip.insert(avoid.begin(), avoid.end());
  // I is infinite and skip finite, so this always succeeds.
  res.z = *least_outside(res.I, skip);
  return res;
}

}  // namespace detail

/// `avoid` holds earlier outputs when repeats are disallowed.
inline GreedyResult greedy_intersection_next(Oracles& o, const IntSet& S, std::size_t t, const IntSet& avoid = {}) {
  return detail::greedy_from(o, consistent_indices(o, S, t), S, avoid);
}
inline GreedyResult greedy_intersection_next(const Collection& c, const IntSet& S, std::size_t t) {
  Oracles o(c);
  return greedy_intersection_next(o, S, t);
}

// ---------------------------------------------------------------------------
// Critical languages.

struct CriticalResult {
  std::vector<std::size_t> consistent;
  std::vector<std::size_t> critical;  // subset of consistent, ascending
  std::optional<std::size_t> last_critical;
  std::optional<Int> z;  // nullopt: no consistent language
};

namespace detail {

inline CriticalResult critical_from(Oracles& o, std::vector<std::size_t> consistent, const IntSet& S) {
  CriticalResult res;
  res.consistent = std::move(consistent);
  for (std::size_t j = 0; j < res.consistent.size(); ++j) {
    bool crit = true;
    for (std::size_t k = 0; k < j && crit; ++k) crit = o.subset(res.consistent[j], res.consistent[k]);
    if (crit) res.critical.push_back(res.consistent[j]);
  }
  if (!res.critical.empty()) {
    res.last_critical = res.critical.back();
    res.z = least_outside(o.collection().language(*res.last_critical).body(), S);
  }
  return res;
}

}  // namespace detail

inline CriticalResult km_critical(Oracles& o, const IntSet& S, std::size_t t) {
  return detail::critical_from(o, consistent_indices(o, S, t), S);
}

/// nullopt when no language among L_1..L_t contains S_t.
inline std::optional<Int> km_critical_next(const Collection& c, const IntSet& S, std::size_t t) {
  Oracles o(c);
  return km_critical(o, S, t).z;
}

// ---------------------------------------------------------------------------
// Zigzag: 0, -1, 1, -2, 2, ... ignoring the input.

/// Next canonical element not yet emitted; with `skip_inputs`, inputs are
/// skipped as well.
inline Int zigzag_next(const IntSet& emitted, const IntSet& inputs = {}, bool skip_inputs = false) {
  for (std::uint64_t r = 0;; ++r) {
    const Int x = canonical::at(r);
    if (emitted.count(x)) continue;
    if (skip_inputs && inputs.count(x)) continue;
    return x;
  }
}

// ---------------------------------------------------------------------------
// Exhaustive generator built on the critical languages: start from the last
// critical language and add back every finite gap to an earlier critical one.

struct PatchedResult {
  CriticalResult base;
  std::vector<std::size_t> patched;  // critical indices whose gap was added
  Enumerator snapshot = Enumerator::flagged_empty();
};

namespace detail {

inline PatchedResult patch_from(Oracles& o, CriticalResult base) {
  PatchedResult res;
  res.base = std::move(base);
  if (!res.base.last_critical) return res;
  const std::size_t last = *res.base.last_critical;
  const auto& c = o.collection();
  SymbolicSet support = c.language(last).body();
  for (std::size_t j : res.base.critical) {
    if (j == last) continue;
    if (!o.finite_difference(j, last)) continue;
    support = unite(support, difference(c.language(j).body(), c.language(last).body()));
    res.patched.push_back(j);
  }
  res.snapshot = Enumerator::transparent(std::move(support));
  return res;
}

}  // namespace detail

inline PatchedResult exhaustive_critical(Oracles& o, const IntSet& S, std::size_t t) {
  return detail::patch_from(o, km_critical(o, S, t));
}

inline Enumerator exhaustive_critical_snapshot(const Collection& c, const IntSet& S, std::size_t t) {
  Oracles o(c);
  return exhaustive_critical(o, S, t).snapshot;
}

// ---------------------------------------------------------------------------
// Tell-tale generator, membership calls only.

class TellTaleProvider {
 public:
  using Fn = std::function<IntSet(std::size_t i, std::size_t n)>;

  /// Every tell-tale is empty.
  TellTaleProvider() : fn_([](std::size_t, std::size_t) { return IntSet{}; }) {}
  explicit TellTaleProvider(Fn fn) : fn_(std::move(fn)) {}

  /// T_i is `lists(i)`, revealed one element per step.
  static TellTaleProvider from_lists(std::function<std::vector<Int>(std::size_t)> lists) {
    return TellTaleProvider([lists = std::move(lists)](std::size_t i, std::size_t n) {
      const auto all = lists(i);
      return IntSet(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(n, all.size())));
    });
  }

  IntSet telltale(std::size_t i, std::size_t n) const { return fn_(i, n); }

 private:
  Fn fn_;
};

struct TellTaleResult {
  std::vector<std::size_t> candidates;  // C_n
  std::optional<std::size_t> g;
  std::optional<Int> z;
  Enumerator snapshot = Enumerator::flagged_empty();
};

namespace detail {

inline TellTaleResult telltale_from(Oracles& o, const TellTaleProvider& p, const std::vector<std::size_t>& consistent,
                                    const IntSet& S, std::size_t n) {
  TellTaleResult res;
  for (std::size_t i : consistent) {
    bool ok = true;
    for (Int w : p.telltale(i, n))
      if (!S.count(w)) ok = false;
    if (ok) res.candidates.push_back(i);
  }
  if (res.candidates.empty()) return res;
  res.g = res.candidates.front();
  const SymbolicSet& body = o.collection().language(*res.g).body();
  res.z = least_outside(body, S);
  res.snapshot = Enumerator::transparent(body);
  return res;
}

}  // namespace detail

inline TellTaleResult telltale(Oracles& o, const TellTaleProvider& p, const IntSet& S, std::size_t n) {
  return detail::telltale_from(o, p, consistent_indices(o, S, n), S, n);
}

inline Enumerator telltale_snapshot(const Collection& c, const TellTaleProvider& p, const IntSet& S, std::size_t n) {
  Oracles o(c);
  return telltale(o, p, S, n).snapshot;
}

// ---------------------------------------------------------------------------
// Strategies.

class OracleGenerator : public GeneratorStrategy {
 public:
  explicit OracleGenerator(const Collection& c) : oracles_(c) {}
  std::optional<OracleCounts> oracle_counts() const override { return oracles_.counts(); }

 protected:
  std::vector<std::size_t> consistent(const Transcript& past, Int x) {
    return tracker_.update(oracles_, arrival_order(past, x), past.size() + 1);
  }

  Oracles oracles_;
  ConsistencyTracker tracker_;
};

class GreedyGenerator : public OracleGenerator {
 public:
  GreedyGenerator(const Collection& c, bool no_repeat = false) : OracleGenerator(c), no_repeat_(no_repeat) {}
  std::string name() const override { return "greedy"; }
  Generation generate(const Transcript& past, const Turn& turn) override {
    const IntSet S = with_input(past, turn.x);
    const IntSet avoid = no_repeat_ ? past.Z_before(past.size() + 1) : IntSet{};
    last_ = detail::greedy_from(oracles_, consistent(past, turn.x), S, avoid);
    return {last_.z, std::nullopt};
  }
  const GreedyResult& last() const { return last_; }

 private:
  bool no_repeat_;
  GreedyResult last_;
};

/// Generates from the last critical language; its snapshot is that
/// language, unpatched.
class KmGenerator : public OracleGenerator {
 public:
  using OracleGenerator::OracleGenerator;
  std::string name() const override { return "km"; }
  bool has_snapshots() const override { return true; }
  Generation generate(const Transcript& past, const Turn& turn) override {
    const IntSet S = with_input(past, turn.x);
    auto res = detail::critical_from(oracles_, consistent(past, turn.x), S);
    if (!res.last_critical) return {std::nullopt, Enumerator::flagged_empty()};
    return {res.z, Enumerator::transparent(oracles_.collection().language(*res.last_critical).body())};
  }
};

class ZigzagGenerator : public GeneratorStrategy {
 public:
  explicit ZigzagGenerator(bool skip_inputs = false) : skip_(skip_inputs) {}
  std::string name() const override { return skip_ ? "zigzag-skip" : "zigzag"; }
  bool has_snapshots() const override { return true; }
  Generation generate(const Transcript& past, const Turn& turn) override {
    const IntSet emitted = past.Z_before(past.size() + 1);
    const IntSet S = with_input(past, turn.x);
    IntSet gone = emitted;
    if (skip_) gone.insert(S.begin(), S.end());
    return {zigzag_next(emitted, S, skip_), Enumerator::transparent(difference(SymbolicSet::all(), to_set(gone)))};
  }

 private:
  bool skip_;
};

/// z_t is the critical-language output; the snapshot is the patched support.
class ExhaustiveCriticalGenerator : public OracleGenerator {
 public:
  using OracleGenerator::OracleGenerator;
  std::string name() const override { return "exhaustive-critical"; }
  bool has_snapshots() const override { return true; }
  Generation generate(const Transcript& past, const Turn& turn) override {
    const IntSet S = with_input(past, turn.x);
    auto res = detail::patch_from(oracles_, detail::critical_from(oracles_, consistent(past, turn.x), S));
    return {res.base.z, res.snapshot};
  }
};

class TellTaleGenerator : public OracleGenerator {
 public:
  TellTaleGenerator(const Collection& c, TellTaleProvider p) : OracleGenerator(c), provider_(std::move(p)) {}
  std::string name() const override { return "telltale"; }
  bool has_snapshots() const override { return true; }
  Generation generate(const Transcript& past, const Turn& turn) override {
    const IntSet S = with_input(past, turn.x);
    const std::size_t n = past.size() + 1;
    auto res = detail::telltale_from(oracles_, provider_, consistent(past, turn.x), S, n);
    return {res.z, res.snapshot};
  }

 private:
  TellTaleProvider provider_;
};

struct GeneratorOptions {
  bool no_repeat = false;   // greedy
  bool skip_inputs = false;  // zigzag
  TellTaleProvider telltales;
};

inline const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names{"greedy", "km", "zigzag", "exhaustive-critical", "telltale"};
  return names;
}

inline GeneratorPtr make_generator(const std::string& name, const Collection& c, const GeneratorOptions& opt = {}) {
  if (name == "greedy") return std::make_unique<GreedyGenerator>(c, opt.no_repeat);
  if (name == "km") return std::make_unique<KmGenerator>(c);
  if (name == "zigzag") return std::make_unique<ZigzagGenerator>(opt.skip_inputs);
  if (name == "exhaustive-critical") return std::make_unique<ExhaustiveCriticalGenerator>(c);
  if (name == "telltale") return std::make_unique<TellTaleGenerator>(c, opt.telltales);
  throw ValidationError("unknown generator '" + name + "'");
}

}  // namespace genlim
