#pragma once

// Run configuration, the transcript engine for both game modes, checkers for
// each success criterion, and the gate that re-verifies adversary reports
// before anyone believes them.

#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "genlim/adversaries.hpp"
#include "genlim/collections.hpp"
#include "genlim/complexity.hpp"
#include "genlim/dimensions.hpp"
#include "genlim/generators.hpp"
#include "genlim/literal.hpp"
#include "genlim/transcript.hpp"
#include "json.hpp"

namespace genlim {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration.

enum class RunMode { plain, feedback, exhaustive };

inline const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::plain: return "plain";
    case RunMode::feedback: return "feedback";
    case RunMode::exhaustive: return "exhaustive";
  }
  return "?";
}

struct RunConfig {
  std::string collection = "cofinite1";
  CollectionParams params;
  std::size_t prefix = 0;  // 0: the whole collection
  std::size_t target = 1;

  std::string generator = "greedy";
  bool no_repeat = false;
  bool skip_inputs = false;
  Int query_window = 8;  // gf-derived

  std::string adversary = "fair";
  Schedule::Kind schedule = Schedule::Kind::canonical;
  std::vector<Int> script;
  std::size_t d = 2;  // echo
  DetectorConfig detector;
  PhasedLimits limits;
  WitnessSearch witness;
  std::string mq_generator = "closure-style";
  std::size_t mq_bound = 4;
  std::size_t mq_budget = 10000;

  std::size_t horizon = 50;
  RunMode mode = RunMode::plain;
  std::uint64_t seed = 0;  // permuted schedules
};

namespace detail {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ValidationError("unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad value for '") + key + "': " + e.what());
  }
}

inline const char* schedule_name(Schedule::Kind k) {
  switch (k) {
    case Schedule::Kind::canonical: return "canonical";
    case Schedule::Kind::permuted: return "permuted";
    case Schedule::Kind::scripted: return "scripted";
  }
  return "?";
}

inline Schedule::Kind parse_schedule(const std::string& s) {
  if (s == "canonical") return Schedule::Kind::canonical;
  if (s == "permuted") return Schedule::Kind::permuted;
  if (s == "scripted") return Schedule::Kind::scripted;
  throw ValidationError("unknown schedule '" + s + "'");
}

inline RunMode parse_mode(const std::string& s) {
  if (s == "plain") return RunMode::plain;
  if (s == "feedback") return RunMode::feedback;
  if (s == "exhaustive") return RunMode::exhaustive;
  throw ValidationError("unknown mode '" + s + "'");
}

}  // namespace detail

inline const std::vector<std::string>& run_adversary_names() {
  static const std::vector<std::string> names{"fair", "echo", "exhaustive-lb", "breadth-lb", "existence-violation"};
  return names;
}

inline Collection build_collection(const RunConfig& cfg) {
  Collection c = build_paper_collection(cfg.collection, cfg.params);
  return cfg.prefix ? c.prefix(cfg.prefix) : c;
}

/// Throws ValidationError on anything a run could not sensibly start with.
inline void validate(const RunConfig& cfg) {
  if (cfg.horizon < 1) throw ValidationError("horizon must be at least 1");
  const Collection c = build_collection(cfg);
  if (!c.valid_index(cfg.target))
    throw ValidationError("target " + std::to_string(cfg.target) + " is not in collection '" + cfg.collection + "'");
  const auto& advs = run_adversary_names();
  if (std::find(advs.begin(), advs.end(), cfg.adversary) == advs.end() && cfg.adversary != "mq")
    throw ValidationError("unknown adversary '" + cfg.adversary + "'");
  if (cfg.d < 1) throw ValidationError("d must be positive");
  if (cfg.adversary == "echo" && cfg.mode != RunMode::feedback)
    throw ValidationError("the echo adversary needs feedback mode");
}

inline RunConfig config_from_json(const Json& j) {
  using detail::check_keys;
  using detail::read;
  check_keys(j, {"collection", "target", "generator", "adversary", "horizon", "mode", "seed"}, "config");
  RunConfig cfg;
  if (j.contains("collection")) {
    const auto& c = j["collection"];
    check_keys(c, {"name", "ordering_seed", "evenodd_offset", "prefix"}, "collection");
    read(c, "name", cfg.collection);
    read(c, "ordering_seed", cfg.params.ordering_seed);
    read(c, "evenodd_offset", cfg.params.evenodd_offset);
    read(c, "prefix", cfg.prefix);
  }
  read(j, "target", cfg.target);
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    check_keys(g, {"name", "no_repeat", "skip_inputs", "query_window"}, "generator");
    read(g, "name", cfg.generator);
    read(g, "no_repeat", cfg.no_repeat);
    read(g, "skip_inputs", cfg.skip_inputs);
    read(g, "query_window", cfg.query_window);
  }
  if (j.contains("adversary")) {
    const auto& a = j["adversary"];
    check_keys(a, {"name", "schedule", "script", "d", "detector", "limits", "witness", "mq"}, "adversary");
    read(a, "name", cfg.adversary);
    if (a.contains("schedule")) cfg.schedule = detail::parse_schedule(a["schedule"].get<std::string>());
    read(a, "script", cfg.script);
    read(a, "d", cfg.d);
    if (a.contains("detector")) {
      const auto& d = a["detector"];
      check_keys(d, {"mode", "window", "samples", "patience"}, "detector");
      if (d.contains("mode")) {
        const auto m = d["mode"].get<std::string>();
        if (m == "transparent")
          cfg.detector.mode = DetectorConfig::Mode::transparent;
        else if (m == "windowed")
          cfg.detector.mode = DetectorConfig::Mode::windowed;
        else
          throw ValidationError("unknown detector mode '" + m + "'");
      }
      read(d, "window", cfg.detector.window);
      read(d, "samples", cfg.detector.samples);
      read(d, "patience", cfg.detector.patience);
    }
    if (a.contains("limits")) {
      const auto& l = a["limits"];
      check_keys(l, {"max_phases", "max_rounds", "phase_patience"}, "limits");
      read(l, "max_phases", cfg.limits.max_phases);
      read(l, "max_rounds", cfg.limits.max_rounds);
      read(l, "phase_patience", cfg.limits.phase_patience);
    }
    if (a.contains("witness")) {
      const auto& w = a["witness"];
      check_keys(w, {"budget", "exhaustive"}, "witness");
      read(w, "budget", cfg.witness.budget);
      read(w, "exhaustive", cfg.witness.exhaustive);
    }
    if (a.contains("mq")) {
      const auto& m = a["mq"];
      check_keys(m, {"generator", "bound", "budget"}, "mq");
      read(m, "generator", cfg.mq_generator);
      read(m, "bound", cfg.mq_bound);
      read(m, "budget", cfg.mq_budget);
    }
  }
  read(j, "horizon", cfg.horizon);
  if (j.contains("mode")) cfg.mode = detail::parse_mode(j["mode"].get<std::string>());
  read(j, "seed", cfg.seed);
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["collection"] = {{"name", cfg.collection},
                     {"ordering_seed", cfg.params.ordering_seed},
                     {"evenodd_offset", cfg.params.evenodd_offset},
                     {"prefix", cfg.prefix}};
  j["target"] = cfg.target;
  j["generator"] = {{"name", cfg.generator},
                    {"no_repeat", cfg.no_repeat},
                    {"skip_inputs", cfg.skip_inputs},
                    {"query_window", cfg.query_window}};
  Json a;
  a["name"] = cfg.adversary;
  a["schedule"] = detail::schedule_name(cfg.schedule);
  a["script"] = cfg.script;
  a["d"] = cfg.d;
  a["detector"] = {{"mode", cfg.detector.mode == DetectorConfig::Mode::transparent ? "transparent" : "windowed"},
                   {"window", cfg.detector.window},
                   {"samples", cfg.detector.samples},
                   {"patience", cfg.detector.patience}};
  a["limits"] = {{"max_phases", cfg.limits.max_phases},
                 {"max_rounds", cfg.limits.max_rounds},
                 {"phase_patience", cfg.limits.phase_patience}};
  a["witness"] = {{"budget", cfg.witness.budget}, {"exhaustive", cfg.witness.exhaustive}};
  a["mq"] = {{"generator", cfg.mq_generator}, {"bound", cfg.mq_bound}, {"budget", cfg.mq_budget}};
  j["adversary"] = a;
  j["horizon"] = cfg.horizon;
  j["mode"] = mode_name(cfg.mode);
  j["seed"] = cfg.seed;
  return j;
}

// ---------------------------------------------------------------------------
// Strategy construction.

using GeneratorFactory = std::function<GeneratorPtr()>;

/// The plain registry plus "gf-derived", which needs the query window.
inline GeneratorPtr build_generator(const RunConfig& cfg, const Collection& c) {
  if (cfg.generator == "gf-derived") return std::make_unique<GfDerivedGenerator>(c, cfg.query_window);
  GeneratorOptions opt;
  opt.no_repeat = cfg.no_repeat;
  opt.skip_inputs = cfg.skip_inputs;
  return make_generator(cfg.generator, c, opt);
}

inline GeneratorFactory generator_factory(const RunConfig& cfg, const Collection& c) {
  return [cfg, &c] { return build_generator(cfg, c); };
}

/// The language the run is judged against. The two lower-bound adversaries
/// always present all of Z.
inline SymbolicSet target_language(const RunConfig& cfg, const Collection& c) {
  if (cfg.adversary == "exhaustive-lb" || cfg.adversary == "breadth-lb") return SymbolicSet::all();
  return c.language(cfg.target).body();
}

inline Schedule schedule_of(const RunConfig& cfg) {
  switch (cfg.schedule) {
    case Schedule::Kind::permuted: return Schedule::permuted(cfg.seed);
    case Schedule::Kind::scripted: return Schedule::scripted(cfg.script);
    default: return Schedule::canonical();
  }
}

inline AdversaryPtr build_adversary(const RunConfig& cfg, const Collection& c) {
  const StabilizationDetector det(cfg.detector);
  if (cfg.adversary == "fair") return std::make_unique<FairEnumerator>(target_language(cfg, c), schedule_of(cfg));
  if (cfg.adversary == "echo") return std::make_unique<EchoAdversary>(cfg.d);
  if (cfg.adversary == "exhaustive-lb") return std::make_unique<ExhaustiveLbAdversary>(det, cfg.limits);
  if (cfg.adversary == "breadth-lb") return std::make_unique<BreadthLbAdversary>(det, cfg.limits);
  if (cfg.adversary == "existence-violation")
    return std::make_unique<ExistenceViolationAdversary>(c, target_language(cfg, c), cfg.witness, det, cfg.limits);
  throw ValidationError("adversary '" + cfg.adversary + "' cannot drive a transcript");
}

namespace detail {

/// Hides the query hook so a feedback-capable generator plays the plain game.
class NoQueries : public GeneratorStrategy {
 public:
  explicit NoQueries(GeneratorStrategy& g) : g_(g) {}
  std::string name() const override { return g_.name(); }
  bool has_snapshots() const override { return g_.has_snapshots(); }
  Generation generate(const Transcript& past, const Turn& turn) override { return g_.generate(past, turn); }

 private:
  GeneratorStrategy& g_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Transcript engine.

/// z_t in K \ S_t; the sentinel is never valid.
inline std::vector<bool> validity(const Transcript& tr, const SymbolicSet& K) {
  std::vector<bool> out;
  IntSet S;
  for (const auto& r : tr.rounds) {
    S.insert(r.x);
    out.push_back(r.z && K.contains(*r.z) && !S.count(*r.z));
  }
  return out;
}

/// Least t (1-based) from which every flag through the end is set.
inline std::optional<std::size_t> stable_from(const std::vector<bool>& ok) {
  if (ok.empty() || !ok.back()) return std::nullopt;
  std::size_t t = ok.size();
  while (t > 1 && ok[t - 2]) --t;
  return t;
}

struct ClauseReport {
  std::vector<bool> clause1;         // |Z_{>=t} \ K| finite
  std::vector<bool> clause2;         // K inside S_t + Z_{<t} + Z_{>=t}
  std::vector<bool> strict1;         // Z_{>=t} inside K
  std::vector<bool> breadth;         // Z_{>=t} == K
  std::vector<std::optional<Int>> uncovered;  // least element of K the round leaves out
  bool approximate = false;
  std::optional<std::size_t> t_star, t_star_strict, t_star_breadth;
};

namespace detail {

inline std::vector<bool> both(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<bool> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] && b[k];
  return out;
}

}  // namespace detail

/// Evaluates the exhaustive clauses and the breadth equation at every round
/// from the recorded snapshots. Symbolic snapshots give exact answers;
/// opaque ones fall back to a window and mark the report approximate.
inline ClauseReport check_clauses(const Transcript& tr, const SymbolicSet& K, Int window = 50,
                                  std::size_t samples = 400) {
  ClauseReport rep;
  IntSet S, Zlt;
  for (std::size_t t = 1; t <= tr.size(); ++t) {
    const Round& r = tr.rounds[t - 1];
    S.insert(r.x);
    if (!r.snapshot) throw ValidationError("round " + std::to_string(t) + " carries no snapshot");
    const Enumerator& snap = *r.snapshot;
    if (snap.kind() != Enumerator::Kind::opaque) {
      const SymbolicSet& Zge = snap.support();
      rep.clause1.push_back(difference(Zge, K).is_finite());
      rep.strict1.push_back(is_subset(Zge, K));
      rep.breadth.push_back(Zge == K);
      const SymbolicSet gap = difference(difference(difference(K, Zge), to_set(Zlt)), to_set(S));
      rep.clause2.push_back(gap.is_empty());
      rep.uncovered.push_back(least(gap));
    } else {
      rep.approximate = true;
      IntSet seen;
      bool c1 = true, s1 = true;
      for (std::size_t k = 0; k < samples; ++k) {
        const Int v = snap.emit(k);
        seen.insert(v);
        if (!K.contains(v)) {
          s1 = false;
          if (v < -window || v > window) c1 = false;
        }
      }
      std::optional<Int> miss;
      for (std::uint64_t k = 0;; ++k) {
        const auto x = canonical::at(k);
        if (x < -window || x > window) break;
        if (K.contains(x) && !seen.count(x) && !Zlt.count(x) && !S.count(x)) {
          miss = x;
          break;
        }
      }
      bool eq = s1;
      for (Int x = -window; x <= window && eq; ++x) eq = !K.contains(x) || seen.count(x);
      rep.clause1.push_back(c1);
      rep.strict1.push_back(s1);
      rep.breadth.push_back(eq);
      rep.clause2.push_back(!miss);
      rep.uncovered.push_back(miss);
    }
    if (r.z) Zlt.insert(*r.z);
  }
  rep.t_star = stable_from(detail::both(rep.clause1, rep.clause2));
  rep.t_star_strict = stable_from(detail::both(rep.strict1, rep.clause2));
  rep.t_star_breadth = stable_from(rep.breadth);
  return rep;
}

struct RunResult {
  RunConfig config;
  std::string generator;
  std::string adversary;
  SymbolicSet K;
  Transcript transcript;
  std::vector<bool> valid;
  std::optional<std::size_t> t_star;  // validity, horizon-relative
  std::optional<ClauseReport> clauses;  // exhaustive mode
  std::optional<std::string> error;
};

namespace detail {

inline RunResult drive(const RunConfig& cfg, const Collection& c, AdversaryStrategy& adv, GeneratorStrategy& gen,
                       bool feedback) {
  RunResult res;
  res.config = cfg;
  res.generator = gen.name();
  res.adversary = adv.name();
  res.K = target_language(cfg, c);
  NoQueries plain(gen);
  GeneratorStrategy& g = feedback ? gen : static_cast<GeneratorStrategy&>(plain);
  try {
    play(adv, g, cfg.horizon, res.transcript);
  } catch (const std::exception& e) {
    res.error = std::string("run aborted at round ") + std::to_string(res.transcript.size() + 1) + ": " + e.what();
  }
  if (cfg.adversary == "echo") {
    auto* echo = static_cast<EchoAdversary*>(&adv);
    if (echo->target()) res.K = *echo->target();
  }
  res.valid = validity(res.transcript, res.K);
  res.t_star = stable_from(res.valid);
  if (cfg.mode == RunMode::exhaustive && !res.error) {
    try {
      res.clauses = check_clauses(res.transcript, res.K, cfg.detector.window, cfg.detector.samples);
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  }
  return res;
}

}  // namespace detail

/// Plain (or exhaustive) game: queries are never asked.
inline RunResult run_transcript(const RunConfig& cfg) {
  validate(cfg);
  const Collection c = build_collection(cfg);
  auto gen = build_generator(cfg, c);
  auto adv = build_adversary(cfg, c);
  return detail::drive(cfg, c, *adv, *gen, cfg.mode == RunMode::feedback);
}

/// Four-beat game: x, then the generator's query, the adversary's answer,
/// and the output.
inline RunResult run_feedback_transcript(RunConfig cfg) {
  cfg.mode = RunMode::feedback;
  return run_transcript(cfg);
}

// ---------------------------------------------------------------------------
// Non-uniform generation over an adversary family.

/// Canonical, `permutations` seeded permutations (seeds 1..n) and five
/// scripted openings, each a valid prefix of an enumeration of K.
inline std::vector<Schedule> standard_family(const SymbolicSet& K, std::size_t permutations = 100) {
  std::vector<Schedule> out{Schedule::canonical()};
  for (std::size_t s = 1; s <= permutations; ++s) out.push_back(Schedule::permuted(s));
  std::vector<Int> first20, block, repeat, up, down;
  for (std::uint64_t k = 0; k < 20; ++k) first20.push_back(enumerate_rank(K, k));
  std::reverse(first20.begin(), first20.end());
  for (std::uint64_t k = 40; k < 60; ++k) block.push_back(enumerate_rank(K, k));
  repeat.assign(10, enumerate_rank(K, 0));
  for (Int x = 0; x <= 60; ++x)
    if (K.contains(x)) up.push_back(x);
  for (Int x = 0; x >= -60; --x)
    if (K.contains(x)) down.push_back(x);
  for (auto* s : {&first20, &block, &repeat, &up, &down}) out.push_back(Schedule::scripted(*s));
  return out;
}

struct NonuniformViolation {
  std::size_t target = 0;
  std::size_t schedule = 0;  // index into the family
  std::size_t round = 0;
  std::optional<Int> z;
};

struct NonuniformReport {
  std::string collection, generator;
  std::size_t runs = 0, rounds_checked = 0;
  std::map<std::size_t, std::size_t> bounds;  // target -> max(i*, m+1)
  std::vector<NonuniformViolation> violations;
};

/// For each target and each schedule, every round with |S_t| at least the
/// target's bound must be valid.
inline NonuniformReport check_nonuniform(const Collection& c, const GeneratorFactory& make,
                                         const std::vector<std::size_t>& targets, std::size_t horizon,
                                         std::size_t permutations = 100) {
  NonuniformReport rep;
  rep.collection = c.name();
  rep.generator = make()->name();
  for (std::size_t i : targets) {
    const SymbolicSet& K = c.language(i).body();
    const std::size_t bound = nonuniform_bound(c, i);
    rep.bounds[i] = bound;
    const auto family = standard_family(K, permutations);
    for (std::size_t s = 0; s < family.size(); ++s) {
      FairEnumerator adv(K, family[s]);
      auto gen = make();
      detail::NoQueries plain(*gen);
      const auto tr = play(adv, plain, horizon);
      ++rep.runs;
      IntSet S;
      for (std::size_t t = 1; t <= tr.size(); ++t) {
        const Round& r = tr.rounds[t - 1];
        S.insert(r.x);
        if (S.size() < bound) continue;
        ++rep.rounds_checked;
        if (!(r.z && K.contains(*r.z) && !S.count(*r.z))) rep.violations.push_back({i, s, t, r.z});
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Re-verification of adversary reports.

struct Verification {
  bool confirmed = false;
  std::string reason;
};

namespace detail {

inline bool same_snapshot(const std::optional<Enumerator>& a, const std::optional<Enumerator>& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;  // opaque snapshots never compare equal
}

}  // namespace detail

/// Replays a fresh generator over the recorded inputs and answers through
/// round `upto`, requiring identical queries, outputs and snapshots.
inline Verification replay_generator(const Transcript& tr, std::size_t upto, const GeneratorFactory& make) {
  if (upto > tr.size()) return {false, "transcript shorter than the claimed round"};
  auto gen = make();
  Transcript past;
  for (std::size_t t = 1; t <= upto; ++t) {
    const Round& rec = tr.rounds[t - 1];
    Turn turn{rec.x, {}, {}};
    const auto q = gen->query(past, rec.x);
    if (q != rec.y) return {false, "query differs at round " + std::to_string(t)};
    turn.query = rec.y;
    turn.answer = rec.a;
    auto g = gen->generate(past, turn);
    if (g.z != rec.z) return {false, "output differs at round " + std::to_string(t)};
    if (!detail::same_snapshot(g.snapshot, rec.snapshot))
      return {false, "snapshot differs at round " + std::to_string(t)};
    past.rounds.push_back(rec);
  }
  return {true, "replayed"};
}

/// Accepts a claim only if the generator's recorded behaviour replays and
/// the violated condition holds when recomputed from the raw transcript.
inline Verification verify_violation(const ViolationClaim& claim, const Transcript& tr, const GeneratorFactory& make) {
  if (claim.round == 0 || claim.round > tr.size()) return {false, "claim round outside the transcript"};
  if (auto rp = replay_generator(tr, claim.round, make); !rp.confirmed) return rp;
  const Round& r = tr.rounds[claim.round - 1];
  if (!r.snapshot || !r.snapshot->is_transparent())
    return {false, "claim round has no symbolic snapshot"};
  const SymbolicSet& Zge = r.snapshot->support();
  const SymbolicSet& K = claim.target;
  for (std::size_t t = 1; t <= claim.round; ++t)
    if (!K.contains(tr.rounds[t - 1].x)) return {false, "input outside the target at round " + std::to_string(t)};
  if (claim.kind == "exhaustive-coverage") {
    if (!difference(Zge, K).is_finite()) return {false, "clause 1 does not hold at the claimed round"};
    const SymbolicSet gap =
        difference(difference(difference(K, Zge), to_set(tr.Z_before(claim.round))), to_set(tr.S(claim.round)));
    if (gap.is_empty()) return {false, "clause 2 holds at the claimed round"};
    if (claim.missing && !gap.contains(*claim.missing))
      return {false, "claimed missing element is covered"};
    return {true, "clause 2 fails while clause 1 holds; " + std::to_string(*least(gap)) + " is never covered"};
  }
  if (claim.kind == "breadth-equality") {
    if (Zge == K) return {false, "the snapshot support equals the target"};
    if (claim.missing && (Zge.contains(*claim.missing) == K.contains(*claim.missing)))
      return {false, "claimed witness element does not separate support and target"};
    return {true, "support " + print_set(Zge) + " differs from " + print_set(K)};
  }
  return {false, "unknown claim kind '" + claim.kind + "'"};
}

/// Rebuilds the language pair from the log and checks the forced mistake:
/// inputs lie in both languages, every answer matches the pair, a fresh
/// generator replays the same queries and outputs, and the last output is
/// not in L_committed \ S_n.
inline Verification verify_mq_violation(const MqReport& rep, MqGenerator& fresh) {
  if (rep.outcome != MqReport::Outcome::mistake_forced || !rep.committed)
    return {false, "run ended without a commitment"};
  DynamicLanguagePair pair;
  try {
    pair = DynamicLanguagePair::replay(rep.log);
  } catch (const std::exception& e) {
    return {false, std::string("log does not replay: ") + e.what()};
  }
  for (Int x : rep.inputs)
    if (pair.placement(x) != Placement::both) return {false, "input " + std::to_string(x) + " is not in both"};
  for (const auto& q : rep.queries)
    if (pair.contains(q.which, q.w) != q.answer) return {false, "answer to query " + std::to_string(q.w) + " changed"};
  std::vector<Int> inputs;
  std::size_t qi = 0;
  for (std::size_t m = 1; m <= rep.outputs.size(); ++m) {
    inputs.push_back(rep.inputs.at(m - 1));
    bool drift = false;
    MqOracle ask = [&](Int w, int which) {
      if (qi >= rep.queries.size() || rep.queries[qi].w != w || rep.queries[qi].which != which) drift = true;
      ++qi;
      return pair.contains(which, w);
    };
    const Int z = fresh.generate(inputs, ask);
    if (drift) return {false, "queries differ in phase " + std::to_string(m)};
    if (z != rep.outputs[m - 1]) return {false, "output differs in phase " + std::to_string(m)};
  }
  if (qi != rep.queries.size()) return {false, "recorded queries not reproduced"};
  const Int z = rep.outputs.back();
  const IntSet S(rep.inputs.begin(), rep.inputs.end());
  if (pair.contains(*rep.committed, z) && !S.count(z))
    return {false, "last output is valid for the committed language"};
  return {true, "output " + std::to_string(z) + " misses L_" + std::to_string(*rep.committed) + " \\ S_" +
                    std::to_string(rep.phases)};
}

// ---------------------------------------------------------------------------
// Line-delimited records.

inline std::string snapshot_text(const Enumerator& e) {
  switch (e.kind()) {
    case Enumerator::Kind::transparent: return print_set(e.support());
    case Enumerator::Kind::empty_flagged: return "flagged-empty";
    case Enumerator::Kind::opaque: return "opaque";
  }
  return "?";
}

inline Json opt_json(const std::optional<Int>& v) { return v ? Json(*v) : Json(nullptr); }
inline Json opt_json(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

/// One record per round: t, x, y?, a?, z, valid, snapshot?.
inline void write_rounds(std::ostream& os, const Transcript& tr, const std::vector<bool>& valid) {
  for (std::size_t t = 1; t <= tr.size(); ++t) {
    const Round& r = tr.rounds[t - 1];
    Json j;
    j["t"] = t;
    j["x"] = r.x;
    if (r.y) j["y"] = *r.y;
    if (r.a) j["a"] = *r.a ? "yes" : "no";
    j["z"] = opt_json(r.z);
    j["valid"] = t <= valid.size() && valid[t - 1];
    if (r.snapshot) j["snapshot"] = snapshot_text(*r.snapshot);
    os << j.dump() << '\n';
  }
}

inline void write_summary(std::ostream& os, const Json& body) { os << Json{{"summary", body}}.dump() << '\n'; }

inline Json flags_json(const std::vector<bool>& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

inline Json clauses_json(const ClauseReport& c) {
  Json j;
  j["t_star"] = opt_json(c.t_star);
  j["t_star_strict"] = opt_json(c.t_star_strict);
  j["t_star_breadth"] = opt_json(c.t_star_breadth);
  j["approximate"] = c.approximate;
  j["clause1"] = flags_json(c.clause1);
  j["clause2"] = flags_json(c.clause2);
  j["breadth"] = flags_json(c.breadth);
  return j;
}

inline Json run_summary(const RunResult& res) {
  Json j;
  std::size_t bad = 0;
  for (bool v : res.valid) bad += !v;
  if (res.clauses) {
    j["t_star"] = opt_json(res.clauses->t_star);
  } else {
    j["t_star"] = opt_json(res.t_star);
  }
  j["violations"] = bad;
  if (res.error)
    j["verdict"] = "aborted";
  else if (res.clauses)
    j["verdict"] = res.clauses->t_star ? "exhaustive" : "not-exhaustive";
  else
    j["verdict"] = res.t_star ? "stable" : "unstable";
  j["mode"] = mode_name(res.config.mode);
  j["collection"] = res.config.collection;
  j["target"] = print_set(res.K);
  j["generator"] = res.generator;
  j["adversary"] = res.adversary;
  j["rounds"] = res.transcript.size();
  j["t_star_valid"] = opt_json(res.t_star);
  j["valid"] = flags_json(res.valid);
  if (res.clauses) j["clauses"] = clauses_json(*res.clauses);
  if (res.error) j["error"] = *res.error;
  return j;
}

inline void write_run(std::ostream& os, const RunResult& res) {
  write_rounds(os, res.transcript, res.valid);
  write_summary(os, run_summary(res));
}

inline Json claim_json(const ViolationClaim& c, const Verification& v) {
  return {{"kind", c.kind},
          {"round", c.round},
          {"target", print_set(c.target)},
          {"missing", opt_json(c.missing)},
          {"confirmed", v.confirmed},
          {"reason", v.reason}};
}

inline Json phases_json(const std::vector<PhaseRecord>& ps) {
  Json a = Json::array();
  for (const auto& p : ps)
    a.push_back({{"phase", p.phase},
                 {"t_detect", p.t_detect},
                 {"t_end", p.t_end},
                 {"end_value", p.end_value},
                 {"language", print_set(p.language)}});
  return a;
}

/// Report for a phased lower-bound run. Only confirmed claims count.
inline Json phased_summary(const PhasedReport& rep, const std::vector<Verification>& checks, const ClauseReport& cl) {
  std::size_t confirmed = 0;
  for (const auto& v : checks) confirmed += v.confirmed;
  Json j;
  j["t_star"] = opt_json(rep.adversary == "breadth-lb" ? cl.t_star_breadth : cl.t_star);
  j["violations"] = confirmed;
  j["verdict"] = confirmed ? "violation" : verdict_name(ProofVerdict::inconclusive);
  j["adversary"] = rep.adversary;
  j["generator"] = rep.generator;
  j["rounds"] = rep.transcript.size();
  j["phases"] = phases_json(rep.phases);
  Json claims = Json::array();
  for (std::size_t k = 0; k < rep.claims.size(); ++k) claims.push_back(claim_json(rep.claims[k], checks[k]));
  j["claims"] = claims;
  j["note"] = rep.note;
  return j;
}

inline Json existence_summary(const ExistenceReport& rep, const std::vector<Verification>& checks) {
  std::size_t confirmed = 0;
  for (const auto& v : checks) confirmed += v.confirmed;
  Json j;
  j["t_star"] = nullptr;
  j["violations"] = confirmed;
  j["verdict"] = rep.verdict == ProofVerdict::violation && !confirmed ? "inconclusive" : verdict_name(rep.verdict);
  j["mode"] = rep.mode;
  j["generator"] = rep.generator;
  j["rounds"] = rep.transcript.size();
  Json stages = Json::array();
  for (const auto& s : rep.stages)
    stages.push_back({{"stage", s.stage},
                      {"T", std::vector<Int>(s.T.begin(), s.T.end())},
                      {"witness", s.witness},
                      {"language", print_set(s.language)},
                      {"t_detect", s.t_detect},
                      {"presented", opt_json(s.presented)}});
  j["stages"] = stages;
  Json claims = Json::array();
  for (std::size_t k = 0; k < rep.claims.size(); ++k) claims.push_back(claim_json(rep.claims[k], checks[k]));
  j["claims"] = claims;
  j["note"] = rep.note;
  return j;
}

inline Json mq_json(const MqReport& rep, const Verification& v) {
  Json j;
  j["t_star"] = nullptr;
  j["violations"] = v.confirmed ? 1 : 0;
  j["verdict"] = outcome_name(rep.outcome);
  j["generator"] = rep.generator;
  j["declared_bound"] = rep.declared_bound;
  j["phases"] = rep.phases;
  j["inputs"] = rep.inputs;
  j["outputs"] = rep.outputs;
  Json qs = Json::array();
  for (const auto& q : rep.queries)
    qs.push_back({{"phase", q.phase}, {"w", q.w}, {"which", q.which}, {"answer", q.answer ? "yes" : "no"}});
  j["queries"] = qs;
  j["committed"] = rep.committed ? Json(*rep.committed) : Json(nullptr);
  j["confirmed"] = v.confirmed;
  j["reason"] = v.reason;
  return j;
}

inline Json witness_json(const DimensionWitness& w) {
  Json j;
  j["kind"] = w.kind;
  j["d"] = w.d;
  j["found"] = w.found;
  j["witness_set"] = std::vector<Int>(w.witness_set.begin(), w.witness_set.end());
  Json line = Json::array();
  for (const auto& r : w.play.rounds) line.push_back(r.x);
  j["play"] = line;
  j["certificate"] = w.found ? Json(print_set(w.certificate)) : Json(nullptr);
  j["nodes"] = w.nodes;
  j["strategy_nodes"] = w.strategy_nodes;
  if (!w.found) j["note"] = "no witness within budget";
  return j;
}

inline Json nonuniform_json(const NonuniformReport& rep) {
  Json j;
  j["t_star"] = nullptr;
  j["violations"] = rep.violations.size();
  j["verdict"] = rep.violations.empty() ? "pass" : "fail";
  j["collection"] = rep.collection;
  j["generator"] = rep.generator;
  j["runs"] = rep.runs;
  j["rounds_checked"] = rep.rounds_checked;
  Json b = Json::object();
  for (const auto& [i, n] : rep.bounds) b[std::to_string(i)] = n;
  j["bounds"] = b;
  Json vs = Json::array();
  for (const auto& v : rep.violations)
    vs.push_back({{"target", v.target}, {"schedule", v.schedule}, {"round", v.round}, {"z", opt_json(v.z)}});
  j["counterexamples"] = vs;
  return j;
}

// ---------------------------------------------------------------------------
// Whole-run entry points shared by the CLI and the acceptance suite. Each
// writes line-delimited records to `os` and returns the summary.

inline Json run_phased(const RunConfig& cfg, std::ostream& os) {
  const Collection c = build_collection(cfg);
  auto gen = build_generator(cfg, c);
  const StabilizationDetector det(cfg.detector);
  PhasedReport rep = cfg.adversary == "breadth-lb" ? run_breadth_lb(*gen, det, cfg.limits)
                                                   : run_exhaustive_lb(*gen, det, cfg.limits);
  std::vector<Verification> checks;
  for (const auto& claim : rep.claims) checks.push_back(verify_violation(claim, rep.transcript, generator_factory(cfg, c)));
  const ClauseReport cl = check_clauses(rep.transcript, SymbolicSet::all(), cfg.detector.window, cfg.detector.samples);
  write_rounds(os, rep.transcript, validity(rep.transcript, SymbolicSet::all()));
  Json s = phased_summary(rep, checks, cl);
  write_summary(os, s);
  return s;
}

inline Json run_existence(const RunConfig& cfg, std::ostream& os) {
  const Collection c = build_collection(cfg);
  auto gen = build_generator(cfg, c);
  auto rep = run_existence_violation(c, cfg.target, *gen, cfg.witness, StabilizationDetector(cfg.detector), cfg.limits);
  std::vector<Verification> checks;
  for (const auto& claim : rep.claims) checks.push_back(verify_violation(claim, rep.transcript, generator_factory(cfg, c)));
  write_rounds(os, rep.transcript, validity(rep.transcript, c.language(cfg.target).body()));
  Json s = existence_summary(rep, checks);
  write_summary(os, s);
  return s;
}

inline Json run_mq(const RunConfig& cfg, std::ostream& os) {
  auto gen = make_mq_generator(cfg.mq_generator, cfg.mq_bound);
  auto rep = run_mq_adversary(*gen, {cfg.mq_budget, {}});
  auto fresh = make_mq_generator(cfg.mq_generator, cfg.mq_bound);
  const Verification v = rep.outcome == MqReport::Outcome::mistake_forced ? verify_mq_violation(rep, *fresh)
                                                                          : Verification{false, "query budget exhausted"};
  Json s = mq_json(rep, v);
  write_summary(os, s);
  return s;
}

inline Json run_check(const std::string& kind, const RunConfig& cfg, std::ostream& os) {
  if (kind == "nonuniform") {
    const Collection c = build_collection(cfg);
    std::vector<std::size_t> targets;
    if (cfg.prefix)
      for (std::size_t i = 1; i <= cfg.prefix; ++i) targets.push_back(i);
    else
      targets.push_back(cfg.target);
    Json s = nonuniform_json(check_nonuniform(c, generator_factory(cfg, c), targets, cfg.horizon));
    write_summary(os, s);
    return s;
  }
  if (kind != "exhaustive" && kind != "breadth") throw ValidationError("unknown check '" + kind + "'");
  RunConfig run = cfg;
  run.mode = RunMode::exhaustive;
  const RunResult res = run_transcript(run);
  write_rounds(os, res.transcript, res.valid);
  Json s;
  if (res.error || !res.clauses) {
    s["t_star"] = nullptr;
    s["violations"] = nullptr;
    s["verdict"] = "aborted";
    s["error"] = res.error.value_or("no clause report");
  } else {
    const auto& cl = *res.clauses;
    const bool ex = kind == "exhaustive";
    const auto& t = ex ? cl.t_star : cl.t_star_breadth;
    std::size_t bad = 0;
    for (std::size_t k = 0; k < cl.clause1.size(); ++k) bad += ex ? !(cl.clause1[k] && cl.clause2[k]) : !cl.breadth[k];
    s["t_star"] = opt_json(t);
    s["violations"] = bad;
    s["verdict"] = t ? "holds" : "fails";
    s["check"] = kind;
    s["target"] = print_set(res.K);
    s["generator"] = res.generator;
    s["adversary"] = res.adversary;
    s["clauses"] = clauses_json(cl);
  }
  write_summary(os, s);
  return s;
}

}  // namespace genlim
