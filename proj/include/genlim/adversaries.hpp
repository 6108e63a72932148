#pragma once

// Input strategies. The fair enumerator is the honest baseline; the rest are
// constructive lower bounds that adapt to the generator they face.

#include <functional>
#include <memory>
#include <string>

#include "genlim/collections.hpp"
#include "genlim/generators.hpp"
#include "genlim/transcript.hpp"

namespace genlim {

class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;
  virtual std::string name() const = 0;
  virtual Int next_input(const Transcript& past) = 0;
  /// Feedback answer for query y in the current round.
  virtual bool answer(const Transcript& past, Int x, Int y) = 0;
  /// Set when the adversary has nothing further to do (e.g. a proof run is
  /// complete); the driver stops early.
  virtual bool finished() const { return false; }
};

using AdversaryPtr = std::unique_ptr<AdversaryStrategy>;

/// Extends `past` to `rounds` rounds, or fewer if the adversary finishes.
/// Queries are asked only when the generator offers one. On an exception the
/// rounds completed so far stay in `past`.
inline void play(AdversaryStrategy& adv, GeneratorStrategy& gen, std::size_t rounds, Transcript& past) {
  while (past.size() < rounds && !adv.finished()) {
    Round r;
    r.x = adv.next_input(past);
    if (adv.finished()) break;
    Turn turn{r.x, {}, {}};
    if (auto y = gen.query(past, r.x)) {
      turn.query = y;
      turn.answer = adv.answer(past, r.x, *y);
      r.y = turn.query;
      r.a = turn.answer;
    }
    auto g = gen.generate(past, turn);
    r.z = g.z;
    r.snapshot = std::move(g.snapshot);
    past.rounds.push_back(std::move(r));
  }
}

inline Transcript play(AdversaryStrategy& adv, GeneratorStrategy& gen, std::size_t rounds) {
  Transcript past;
  play(adv, gen, rounds, past);
  return past;
}

// ---------------------------------------------------------------------------
// Fair enumeration of a fixed target.

struct Schedule {
  enum class Kind { canonical, permuted, scripted };
  Kind kind = Kind::canonical;
  std::uint64_t seed = 0;
  std::vector<Int> script;

  static Schedule canonical() { return {}; }
  static Schedule permuted(std::uint64_t seed) { return {Kind::permuted, seed, {}}; }
  static Schedule scripted(std::vector<Int> xs) { return {Kind::scripted, 0, std::move(xs)}; }
};

inline constexpr std::size_t kPermuteBlock = 16;

class FairEnumerator : public AdversaryStrategy {
 public:
  FairEnumerator(SymbolicSet target, Schedule schedule) : target_(std::move(target)), schedule_(std::move(schedule)) {
    if (target_.is_finite()) throw ValidationError("fair enumerator needs an infinite target");
    for (Int x : schedule_.script)
      if (!target_.contains(x)) throw ValidationError("scripted input " + std::to_string(x) + " is not in the target");
  }

  std::string name() const override { return "fair"; }
  const SymbolicSet& target() const { return target_; }

  /// t-th input, 1-based.
  Int at(std::size_t t) {
    while (stream_.size() < t) stream_.push_back(produce(stream_.size()));
    return stream_[t - 1];
  }

  Int next_input(const Transcript& past) override { return at(past.size() + 1); }
  bool answer(const Transcript&, Int, Int y) override { return target_.contains(y); }

 private:
  Int produce(std::size_t k) {
    switch (schedule_.kind) {
      case Schedule::Kind::canonical: return enumerate_rank(target_, k);
      case Schedule::Kind::permuted: {
        const std::size_t block = k / kPermuteBlock;
        const auto perm = detail::fisher_yates(kPermuteBlock, schedule_.seed * 0xD1B54A32D192ED03ULL + block);
        return enumerate_rank(target_, block * kPermuteBlock + perm[k % kPermuteBlock]);
      }
      case Schedule::Kind::scripted: {
        if (k < schedule_.script.size()) {
          seen_.insert(schedule_.script[k]);
          return schedule_.script[k];
        }
        for (;;) {
          const Int x = enumerate_rank(target_, cursor_++);
          if (seen_.insert(x).second) return x;
        }
      }
    }
    return 0;
  }

  SymbolicSet target_;
  Schedule schedule_;
  std::vector<Int> stream_;
  IntSet seen_;
  std::uint64_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Membership-query adversary: two languages grown so that the generator can
// never tell them apart, then a commitment that makes its last output wrong.

/// Membership query "w in L_which?" answered by the environment.
using MqOracle = std::function<bool(Int w, int which)>;

/// A generator that sees only its inputs and asks membership questions about
/// the two-language collection {L_0, L_1}.
class MqGenerator {
 public:
  virtual ~MqGenerator() = default;
  virtual std::string name() const = 0;
  /// The |S_t| threshold this generator claims for both languages.
  virtual std::size_t declared_bound() const = 0;
  virtual Int generate(const std::vector<Int>& inputs, const MqOracle& ask) = 0;
};

using MqGeneratorPtr = std::unique_ptr<MqGenerator>;

struct QueryBudgetExceeded : std::runtime_error {
  QueryBudgetExceeded() : std::runtime_error("per-step query budget exhausted") {}
};

class MqAdversary {
 public:
  /// Step (1): a fresh string goes into both languages.
  Int need_input() {
    const Int x = pair_.fresh();
    pair_.assign(x, Placement::both);
    return x;
  }

  /// Step (3): answer a query, placing an unseen string in L_a and flipping a.
  bool query(Int w, int which) {
    if (pair_.placement(w) == Placement::unassigned) {
      pair_.assign(w, pair_.toggle() == 0 ? Placement::zero : Placement::one);
      const bool yes = which == pair_.toggle();
      pair_.flip();
      return yes;
    }
    return pair_.contains(which, w);
  }

  /// Step (4): an unseen output is placed the same way.
  void generated(Int z) {
    if (pair_.placement(z) != Placement::unassigned) return;
    pair_.assign(z, pair_.toggle() == 0 ? Placement::zero : Placement::one);
    pair_.flip();
  }

  /// The true language is the one the last output missed. An output that
  /// sits in both is an input, hence wrong for either; L_0 is then chosen.
  int commit(Int z) const { return pair_.placement(z) == Placement::zero ? 1 : 0; }

  const DynamicLanguagePair& pair() const { return pair_; }

 private:
  DynamicLanguagePair pair_;
};

struct MqQuery {
  std::size_t phase;
  Int w;
  int which;
  bool answer;
};

struct MqReport {
  enum class Outcome { mistake_forced, budget_exhausted };
  Outcome outcome = Outcome::mistake_forced;
  std::string generator;
  std::size_t declared_bound = 0;
  std::size_t phases = 0;  // phase at which the run ended
  std::vector<Int> inputs;
  std::vector<Int> outputs;
  std::vector<MqQuery> queries;
  std::optional<int> committed;
  std::vector<DynamicLanguagePair::Entry> log;
};

inline const char* outcome_name(MqReport::Outcome o) {
  return o == MqReport::Outcome::mistake_forced ? "mistake_forced" : "budget_exhausted";
}

struct MqOptions {
  std::size_t query_budget = 10000;  // per step
  std::optional<std::size_t> commit_phase;  // default: the declared bound
};

inline MqReport run_mq_adversary(MqGenerator& gen, const MqOptions& opt = {}) {
  MqAdversary adv;
  MqReport rep;
  rep.generator = gen.name();
  rep.declared_bound = gen.declared_bound();
  const std::size_t n = std::max<std::size_t>(1, opt.commit_phase.value_or(rep.declared_bound));
  for (std::size_t m = 1; m <= n; ++m) {
    rep.phases = m;
    rep.inputs.push_back(adv.need_input());
    std::size_t used = 0;
    MqOracle ask = [&](Int w, int which) {
      if (which != 0 && which != 1) throw ValidationError("membership query must name L_0 or L_1");
      if (++used > opt.query_budget) throw QueryBudgetExceeded();
      const bool a = adv.query(w, which);
      rep.queries.push_back({m, w, which, a});
      return a;
    };
    Int z;
    try {
      z = gen.generate(rep.inputs, ask);
    } catch (const QueryBudgetExceeded&) {
      rep.outcome = MqReport::Outcome::budget_exhausted;
      rep.log = adv.pair().log();
      return rep;
    }
    adv.generated(z);
    rep.outputs.push_back(z);
  }
  rep.committed = adv.commit(rep.outputs.back());
  rep.log = adv.pair().log();
  return rep;
}

// Concrete membership-query generators.

namespace detail {

inline std::vector<Int> candidates_outside(const std::vector<Int>& inputs, std::size_t count) {
  const IntSet S(inputs.begin(), inputs.end());
  std::vector<Int> out;
  for (std::uint64_t r = 0; out.size() < count; ++r)
    if (!S.count(canonical::at(r))) out.push_back(canonical::at(r));
  return out;
}

}  // namespace detail

/// Keeps the languages that contain every input, then looks for a string
/// outside S in all of them. Gives up after `cap` candidates and emits the
/// first one.
class ClosureStyleMq : public MqGenerator {
 public:
  explicit ClosureStyleMq(std::size_t bound = 4, std::size_t cap = 32) : bound_(bound), cap_(cap) {}
  std::string name() const override { return "closure-style"; }
  std::size_t declared_bound() const override { return bound_; }
  Int generate(const std::vector<Int>& inputs, const MqOracle& ask) override {
    std::vector<int> live;
    for (int j : {0, 1}) {
      bool ok = true;
      for (Int x : inputs) ok = ok && ask(x, j);
      if (ok) live.push_back(j);
    }
    const auto cands = detail::candidates_outside(inputs, cap_);
    for (Int w : cands) {
      bool all = true;
      for (int j : live) all = all && ask(w, j);
      if (all) return w;
    }
    return cands.front();
  }

 private:
  std::size_t bound_, cap_;
};

/// Emits the first string outside S that L_0 is said to contain.
class FirstYesProber : public MqGenerator {
 public:
  explicit FirstYesProber(std::size_t bound = 3, std::size_t cap = 32) : bound_(bound), cap_(cap) {}
  std::string name() const override { return "first-yes"; }
  std::size_t declared_bound() const override { return bound_; }
  Int generate(const std::vector<Int>& inputs, const MqOracle& ask) override {
    const auto cands = detail::candidates_outside(inputs, cap_);
    for (Int w : cands)
      if (ask(w, 0)) return w;
    return cands.front();
  }

 private:
  std::size_t bound_, cap_;
};

/// Fixed behaviour: at step m asks about 100m and 100m+1 in L_{m mod 2},
/// then emits 100m+2.
class ScriptedMq : public MqGenerator {
 public:
  explicit ScriptedMq(std::size_t bound = 5) : bound_(bound) {}
  std::string name() const override { return "scripted"; }
  std::size_t declared_bound() const override { return bound_; }
  Int generate(const std::vector<Int>& inputs, const MqOracle& ask) override {
    const Int m = static_cast<Int>(inputs.size());
    ask(100 * m, static_cast<int>(m % 2));
    ask(100 * m + 1, static_cast<int>(m % 2));
    return 100 * m + 2;
  }

 private:
  std::size_t bound_;
};

/// Never stops asking; exercises the budget path.
class EndlessMq : public MqGenerator {
 public:
  std::string name() const override { return "endless"; }
  std::size_t declared_bound() const override { return 2; }
  Int generate(const std::vector<Int>&, const MqOracle& ask) override {
    for (Int w = 1000;; ++w) ask(w, 0);
  }
};

inline MqGeneratorPtr make_mq_generator(const std::string& name, std::size_t bound) {
  if (name == "closure-style") return std::make_unique<ClosureStyleMq>(bound);
  if (name == "first-yes") return std::make_unique<FirstYesProber>(bound);
  if (name == "scripted") return std::make_unique<ScriptedMq>(bound);
  if (name == "endless") return std::make_unique<EndlessMq>();
  throw ValidationError("unknown membership-query generator '" + name + "'");
}

// ---------------------------------------------------------------------------
// Stabilization detection.

struct DetectorConfig {
  enum class Mode { transparent, windowed };
  Mode mode = Mode::transparent;
  Int window = 50;           // windowed: exceptions assumed inside [-W, W]
  std::size_t samples = 400; // windowed: emissions inspected per check
  std::size_t patience = 3;  // windowed: consecutive agreeing checks
};

/// Decides from a snapshot whether the generator has settled on a language.
/// Transparent mode is exact. Windowed mode only looks at a finite sample of
/// emissions and demands `patience` agreeing checks in a row.
class StabilizationDetector {
 public:
  StabilizationDetector() = default;
  explicit StabilizationDetector(DetectorConfig cfg) : cfg_(cfg) {}

  const DetectorConfig& config() const { return cfg_; }
  bool exact() const { return cfg_.mode == DetectorConfig::Mode::transparent; }

  /// |support \ L| < infinity.
  bool finite_excess(const Enumerator& snap, const SymbolicSet& L) {
    if (exact()) return difference(transparent_support(snap), L).is_finite();
    return streak(sampled(snap, L, false));
  }

  /// support == L.
  bool equals(const Enumerator& snap, const SymbolicSet& L) {
    if (exact()) return transparent_support(snap) == L;
    return streak(sampled(snap, L, true));
  }

  void reset() { run_ = 0; }

 private:
  static const SymbolicSet& transparent_support(const Enumerator& snap) {
    if (snap.kind() == Enumerator::Kind::opaque)
      throw ValidationError("transparent detection needs symbolic snapshots");
    return snap.support();
  }

  bool sampled(const Enumerator& snap, const SymbolicSet& L, bool exact_match) const {
    if (snap.flagged()) return false;
    IntSet seen;
    for (std::size_t k = 0; k < cfg_.samples; ++k) {
      Int v;
      try {
        v = snap.emit(k);
      } catch (const RangeError&) {
        break;
      }
      seen.insert(v);
      const bool inside = v >= -cfg_.window && v <= cfg_.window;
      if (!L.contains(v) && (exact_match || !inside)) return false;
    }
    if (exact_match)
      for (Int x = -cfg_.window; x <= cfg_.window; ++x)
        if (L.contains(x) && !seen.count(x)) return false;
    return true;
  }

  bool streak(bool ok) {
    run_ = ok ? run_ + 1 : 0;
    return run_ >= cfg_.patience;
  }

  DetectorConfig cfg_;
  std::size_t run_ = 0;
};

// ---------------------------------------------------------------------------
// Shared report pieces for the phased lower bounds.

enum class ProofVerdict { violation, inconclusive, condition_satisfied };

inline const char* verdict_name(ProofVerdict v) {
  switch (v) {
    case ProofVerdict::violation: return "violation";
    case ProofVerdict::inconclusive: return "inconclusive";
    case ProofVerdict::condition_satisfied: return "condition_satisfied";
  }
  return "?";
}

struct PhaseRecord {
  std::size_t phase = 0;
  std::size_t t_detect = 0;  // first round the detector fired in this phase
  std::size_t t_end = 0;     // round the phase closed
  Int end_value = 0;         // input presented at t_end
  SymbolicSet language;      // language the phase was steering towards
};

/// A round at which, by the adversary's reckoning, the generator breaks the
/// target's requirement. Harness checkers re-verify it from the transcript.
struct ViolationClaim {
  std::string kind;  // "exhaustive-coverage" or "breadth-equality"
  std::size_t round = 0;
  SymbolicSet target;
  std::optional<Int> missing;  // a target element the generator will never cover
};

struct PhasedReport {
  std::string adversary;
  std::string generator;
  ProofVerdict verdict = ProofVerdict::inconclusive;
  std::vector<PhaseRecord> phases;
  std::vector<ViolationClaim> claims;
  std::string note;
  Transcript transcript;
};

struct PhasedLimits {
  std::size_t max_phases = 4;
  std::size_t max_rounds = 500;
  std::size_t phase_patience = 200;  // rounds a phase may run before stalling
};

// ---------------------------------------------------------------------------
// Lower bound for exhaustive generation on the tails collection.
//
// Phase i presents -i, -i+1, ... (a valid enumeration of tail(-i) when
// continued) until the detector sees the generator commit to tail(-i) up to
// finitely many extras, and the presented value exceeds the previous phase's
// last value. Concatenated, the phases enumerate all of Z; at each phase end
// the generator cannot cover the negative integers below -i.

class ExhaustiveLbAdversary : public AdversaryStrategy {
 public:
  ExhaustiveLbAdversary(StabilizationDetector det, PhasedLimits lim) : det_(std::move(det)), lim_(lim) {}
  std::string name() const override { return "exhaustive-lb"; }
  bool answer(const Transcript&, Int, Int) override { return true; }  // target is Z
  bool finished() const override { return done_; }

  Int next_input(const Transcript& past) override {
    if (!past.empty()) observe(past);
    if (done_) return 0;
    if (restart_) {
      restart_ = false;
      value_ = -static_cast<Int>(phase_);
      phase_start_ = past.size() + 1;
    } else {
      ++value_;
    }
    if (past.size() + 1 - phase_start_ >= lim_.phase_patience) {
      stall("phase " + std::to_string(phase_) + " did not stabilise within patience");
      return 0;
    }
    return value_;
  }

  const std::vector<PhaseRecord>& phases() const { return phases_; }
  const std::vector<ViolationClaim>& claims() const { return claims_; }
  bool stalled() const { return stalled_; }
  const std::string& note() const { return note_; }

 private:
  void observe(const Transcript& past) {
    const std::size_t t = past.size();
    const Round& r = past.rounds.back();
    const SymbolicSet Li = SymbolicSet::at_least(-static_cast<Int>(phase_));
    const bool settled = r.snapshot && det_.finite_excess(*r.snapshot, Li);
    if (settled && !detect_) detect_ = t;
    const bool far_enough = phases_.empty() || r.x > phases_.back().end_value;
    if (settled && far_enough) {
      phases_.push_back({phase_, *detect_, t, r.x, Li});
      // Coverage of Z fails: the generator's future output is tail(-i) plus
      // finitely many extras, and only finitely many strings were seen.
      IntSet covered = past.S();
      const IntSet z = past.Z_before(t + 1);
      covered.insert(z.begin(), z.end());
      const SymbolicSet gap =
          difference(difference(SymbolicSet::all(), r.snapshot->is_transparent() ? r.snapshot->support() : Li),
                     to_set(covered));
      claims_.push_back({"exhaustive-coverage", t, SymbolicSet::all(), least(gap)});
      ++phase_;
      detect_.reset();
      det_.reset();
      restart_ = true;
      if (phase_ >= lim_.max_phases) done_ = true;
    }
    if (t >= lim_.max_rounds && !done_) stall("round limit reached");
  }

  void stall(std::string why) {
    stalled_ = true;
    done_ = true;
    note_ = std::move(why);
  }

  StabilizationDetector det_;
  PhasedLimits lim_;
  std::size_t phase_ = 0;
  Int value_ = 0;
  bool restart_ = true;
  std::size_t phase_start_ = 1;
  std::optional<std::size_t> detect_;
  std::vector<PhaseRecord> phases_;
  std::vector<ViolationClaim> claims_;
  bool done_ = false, stalled_ = false;
  std::string note_;
};

inline PhasedReport finish_phased(const std::string& adv, const std::string& gen, std::vector<PhaseRecord> phases,
                                  std::vector<ViolationClaim> claims, bool stalled, std::string note, Transcript tr) {
  PhasedReport rep;
  rep.adversary = adv;
  rep.generator = gen;
  rep.phases = std::move(phases);
  rep.claims = std::move(claims);
  rep.note = std::move(note);
  rep.transcript = std::move(tr);
  rep.verdict = rep.claims.empty() ? ProofVerdict::inconclusive : ProofVerdict::violation;
  if (stalled && rep.claims.empty() && rep.note.empty()) rep.note = "stalled";
  return rep;
}

inline PhasedReport run_exhaustive_lb(GeneratorStrategy& gen, StabilizationDetector det = {}, PhasedLimits lim = {}) {
  ExhaustiveLbAdversary adv(std::move(det), lim);
  auto tr = play(adv, gen, lim.max_rounds);
  return finish_phased(adv.name(), gen.name(), adv.phases(), adv.claims(), adv.stalled(), adv.note(), std::move(tr));
}

// ---------------------------------------------------------------------------
// Lower bound for generation with breadth on cofinite1 (L_n = Z \ {n}).

/// Successor in the canonical order 0, -1, 1, -2, 2, ...
inline Int canonical_next(Int x) {
  if (x < 0) return -x;
  if (x > 0) return -(x + 1);
  return -1;
}

class BreadthLbAdversary : public AdversaryStrategy {
 public:
  BreadthLbAdversary(StabilizationDetector det, PhasedLimits lim) : det_(std::move(det)), lim_(lim) {}
  std::string name() const override { return "breadth-lb"; }
  bool answer(const Transcript&, Int, Int) override { return true; }
  bool finished() const override { return done_; }

  Int next_input(const Transcript& past) override {
    if (!past.empty()) observe(past);
    if (done_) return 0;
    if (past.size() + 1 - phase_start_ >= lim_.phase_patience) {
      stall("phase " + std::to_string(phase_) + " did not stabilise within patience");
      return 0;
    }
    if (!pending_.empty()) {
      const Int x = pending_.front();
      pending_.erase(pending_.begin());
      return x;
    }
    for (;;) {
      const Int x = canonical::at(cursor_++);
      if (x != skip_) return x;
    }
  }

  Int skipped() const { return skip_; }
  const std::vector<PhaseRecord>& phases() const { return phases_; }
  const std::vector<ViolationClaim>& claims() const { return claims_; }
  const std::vector<Int>& n_values() const { return n_; }
  const std::vector<Int>& n_prime_values() const { return n_prime_; }
  bool stalled() const { return stalled_; }
  const std::string& note() const { return note_; }

 private:
  void observe(const Transcript& past) {
    const std::size_t t = past.size();
    const Round& r = past.rounds.back();
    const SymbolicSet L = complement(SymbolicSet::finite({skip_}));
    const bool settled = r.snapshot && det_.equals(*r.snapshot, L);
    if (settled && !detect_) detect_ = t;
    const bool far_enough = n_prime_.empty() || std::abs(r.x) > std::abs(n_prime_.back());
    if (settled && far_enough) {
      phases_.push_back({phase_, *detect_, t, r.x, L});
      claims_.push_back({"breadth-equality", t, SymbolicSet::all(), skip_});
      n_prime_.push_back(r.x);
      n_.push_back(canonical_next(r.x));
      ++phase_;
      detect_.reset();
      det_.reset();
      phase_start_ = t + 1;
      // Re-insert the string the previous phase withheld, then run the
      // canonical order again from 0 without the new omission.
      if (phase_ >= 2) pending_.push_back(skip_);
      skip_ = n_.back();
      cursor_ = 0;
      if (phase_ >= lim_.max_phases) done_ = true;
    }
    if (t >= lim_.max_rounds && !done_) stall("round limit reached");
  }

  void stall(std::string why) {
    stalled_ = true;
    done_ = true;
    note_ = std::move(why);
  }

  StabilizationDetector det_;
  PhasedLimits lim_;
  std::size_t phase_ = 0;
  Int skip_ = 0;               // phase 0 enumerates Z \ {0}
  std::uint64_t cursor_ = 1;   // phase 0 starts at -1
  std::vector<Int> pending_;
  std::size_t phase_start_ = 1;
  std::optional<std::size_t> detect_;
  std::vector<Int> n_, n_prime_;
  std::vector<PhaseRecord> phases_;
  std::vector<ViolationClaim> claims_;
  bool done_ = false, stalled_ = false;
  std::string note_;
};

inline PhasedReport run_breadth_lb(GeneratorStrategy& gen, StabilizationDetector det = {}, PhasedLimits lim = {}) {
  BreadthLbAdversary adv(std::move(det), lim);
  auto tr = play(adv, gen, lim.max_rounds);
  return finish_phased(adv.name(), gen.name(), adv.phases(), adv.claims(), adv.stalled(), adv.note(), std::move(tr));
}

// ---------------------------------------------------------------------------
// Adversary for collections that fail the (weak) existence condition at L.

struct WitnessSearch {
  std::size_t budget = 64;  // languages inspected, smallest index first
  bool exhaustive = true;   // also demand |L \ L'| infinite
};

/// Smallest index i within budget with T inside L_i, L_i a proper subset of
/// L, and (exhaustive mode) L \ L_i infinite.
inline std::optional<std::size_t> find_violation_witness(const Collection& c, const SymbolicSet& L, const IntSet& T,
                                                         const WitnessSearch& ws = {}) {
  const std::size_t n = c.size() ? std::min(ws.budget, *c.size()) : ws.budget;
  for (std::size_t i = 1; i <= n; ++i) {
    const SymbolicSet& Li = c.language(i).body();
    bool ok = true;
    for (Int x : T) ok = ok && Li.contains(x);
    if (!ok || Li == L || !is_subset(Li, L)) continue;
    if (ws.exhaustive && difference(L, Li).is_finite()) continue;
    return i;
  }
  return std::nullopt;
}

struct StageRecord {
  std::size_t stage = 0;
  IntSet T;
  std::size_t witness = 0;   // index of L' in the collection
  SymbolicSet language;
  std::size_t t_detect = 0;  // 0 when the stage never settled
  std::optional<Int> presented;  // element of L \ L' shown after settling
};

struct ExistenceReport {
  ProofVerdict verdict = ProofVerdict::inconclusive;
  std::string mode;  // "exhaustive" or "breadth"
  std::string generator;
  std::vector<StageRecord> stages;
  std::vector<ViolationClaim> claims;
  std::string note;
  Transcript transcript;
};

class ExistenceViolationAdversary : public AdversaryStrategy {
 public:
  ExistenceViolationAdversary(const Collection& c, SymbolicSet L, WitnessSearch ws, StabilizationDetector det,
                              PhasedLimits lim)
      : c_(c), L_(std::move(L)), ws_(ws), det_(std::move(det)), lim_(lim) {}

  std::string name() const override { return "existence-violation"; }
  bool answer(const Transcript&, Int, Int y) override { return L_.contains(y); }
  bool finished() const override { return done_; }

  Int next_input(const Transcript& past) override {
    if (stages_.empty()) {
      // Stage 1: the first string of L alone.
      const Int x1 = enumerate_rank(L_, 0);
      if (!open_stage({x1})) return 0;
      seen_.insert(x1);
      return x1;
    }
    observe(past);
    if (done_) return 0;
    if (present_) {
      const Int x = *present_;
      present_.reset();
      seen_.insert(x);
      return x;
    }
    if (past.size() + 1 - stage_start_ >= lim_.phase_patience) {
      stall("stage " + std::to_string(stages_.size()) + " did not stabilise within patience");
      return 0;
    }
    // Continue the current L' in L's order, skipping what was shown.
    const SymbolicSet& cur = stages_.back().language;
    for (;;) {
      const Int x = enumerate_rank(L_, cursor_++);
      if (cur.contains(x) && seen_.insert(x).second) return x;
    }
  }

  const std::vector<StageRecord>& stages() const { return stages_; }
  const std::vector<ViolationClaim>& claims() const { return claims_; }
  bool satisfied() const { return satisfied_; }
  bool stalled() const { return stalled_; }
  const std::string& note() const { return note_; }

 private:
  bool open_stage(IntSet T) {
    auto w = find_violation_witness(c_, L_, T, ws_);
    if (!w) {
      satisfied_ = true;
      done_ = true;
      note_ = "condition satisfied (within budget of " + std::to_string(ws_.budget) + " languages) for T of size " +
              std::to_string(T.size());
      return false;
    }
    StageRecord s;
    s.stage = stages_.size() + 1;
    s.T = std::move(T);
    s.witness = *w;
    s.language = c_.language(*w).body();
    stages_.push_back(std::move(s));
    cursor_ = 0;
    det_.reset();
    return true;
  }

  void observe(const Transcript& past) {
    const std::size_t t = past.size();
    if (t < stage_start_) return;  // round belongs to the presenting step
    const Round& r = past.rounds.back();
    auto& s = stages_.back();
    const bool settled = r.snapshot && (ws_.exhaustive ? det_.finite_excess(*r.snapshot, s.language)
                                                       : det_.equals(*r.snapshot, s.language));
    if (!settled) {
      if (t >= lim_.max_rounds) stall("round limit reached");
      return;
    }
    s.t_detect = t;
    // The witness must avoid everything already covered: the support, the
    // earlier outputs and the inputs.
    const SymbolicSet support = r.snapshot->is_transparent() ? r.snapshot->support() : s.language;
    SymbolicSet gap = difference(L_, support);
    if (ws_.exhaustive) gap = difference(difference(gap, to_set(past.Z_before(t))), to_set(past.S()));
    claims_.push_back({ws_.exhaustive ? "exhaustive-coverage" : "breadth-equality", t, L_, least(gap)});
    // Least unseen element of L \ L' in L's order.
    const SymbolicSet rest = difference(L_, s.language);
    for (std::uint64_t k = 0;; ++k) {
      const Int x = enumerate_rank(rest, k);
      if (!seen_.count(x)) {
        s.presented = x;
        break;
      }
    }
    if (stages_.size() >= lim_.max_phases) {
      done_ = true;
      return;
    }
    IntSet T = past.S();
    T.insert(*s.presented);
    present_ = s.presented;
    stage_start_ = t + 1;
    if (!open_stage(std::move(T))) {
      // The new T escapes every candidate: the run cannot continue as a proof.
      present_.reset();
    }
  }

  void stall(std::string why) {
    stalled_ = true;
    done_ = true;
    note_ = std::move(why);
  }

  const Collection& c_;
  SymbolicSet L_;
  WitnessSearch ws_;
  StabilizationDetector det_;
  PhasedLimits lim_;
  std::vector<StageRecord> stages_;
  std::vector<ViolationClaim> claims_;
  IntSet seen_;
  std::uint64_t cursor_ = 0;
  std::optional<Int> present_;
  std::size_t stage_start_ = 1;
  bool done_ = false, satisfied_ = false, stalled_ = false;
  std::string note_;
};

inline ExistenceReport run_existence_violation(const Collection& c, std::size_t target, GeneratorStrategy& gen,
                                               WitnessSearch ws = {}, StabilizationDetector det = {},
                                               PhasedLimits lim = {}) {
  ExistenceViolationAdversary adv(c, c.language(target).body(), ws, std::move(det), lim);
  ExistenceReport rep;
  rep.mode = ws.exhaustive ? "exhaustive" : "breadth";
  rep.generator = gen.name();
  rep.transcript = play(adv, gen, lim.max_rounds);
  rep.stages = adv.stages();
  rep.claims = adv.claims();
  rep.note = adv.note();
  if (adv.satisfied() && rep.stages.empty())
    rep.verdict = ProofVerdict::condition_satisfied;
  else if (!rep.claims.empty())
    rep.verdict = ProofVerdict::violation;
  else
    rep.verdict = ProofVerdict::inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// Registry for the plain (non-query) adversaries driven by `play`.

inline const std::vector<std::string>& adversary_names() {
  static const std::vector<std::string> names{"fair", "mq", "exhaustive-lb", "breadth-lb", "existence-violation"};
  return names;
}

}  // namespace genlim
