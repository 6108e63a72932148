#include <gtest/gtest.h>

#include "genlim/adversaries.hpp"
#include "genlim/literal.hpp"
#include "support.hpp"

using namespace genlim;

namespace {

std::vector<Int> first_inputs(FairEnumerator& e, std::size_t n) {
  std::vector<Int> out;
  for (std::size_t t = 1; t <= n; ++t) out.push_back(e.at(t));
  return out;
}

/// Snapshot generator that always offers the same support.
class FixedSupport : public GeneratorStrategy {
 public:
  explicit FixedSupport(SymbolicSet s) : s_(std::move(s)) {}
  std::string name() const override { return "fixed"; }
  bool has_snapshots() const override { return true; }
  Generation generate(const Transcript& past, const Turn& turn) override {
    return {least_outside(s_, with_input(past, turn.x)), Enumerator::transparent(s_)};
  }

 private:
  SymbolicSet s_;
};

}  // namespace

TEST(Fair, SpecExamples) {
  FairEnumerator z(SymbolicSet::all(), Schedule::canonical());
  EXPECT_EQ(first_inputs(z, 5), (std::vector<Int>{0, -1, 1, -2, 2}));
  FairEnumerator tail(SymbolicSet::at_least(0), Schedule::canonical());
  EXPECT_EQ(first_inputs(tail, 4), (std::vector<Int>{0, 1, 2, 3}));
  FairEnumerator s(parse_set("Z \\ {0}"), Schedule::scripted({5, 7, 9}));
  EXPECT_EQ(first_inputs(s, 6), (std::vector<Int>{5, 7, 9, -1, 1, -2}));
  EXPECT_THROW(FairEnumerator(parse_set("Z \\ {0}"), Schedule::scripted({1, 0})), ValidationError);
  EXPECT_THROW(FairEnumerator(SymbolicSet::finite({1}), Schedule::canonical()), ValidationError);
}

TEST(Fair, EverySchedulePrefixStaysInTargetAndCoversIt) {
  const auto c = build_paper_collection("evenodd");
  for (std::size_t i = 1; i <= 6; ++i) {
    const auto& K = c.language(i).body();
    for (const auto& sched : {Schedule::canonical(), Schedule::permuted(3), Schedule::permuted(4),
                              Schedule::scripted({enumerate_rank(K, 9), enumerate_rank(K, 9), enumerate_rank(K, 2)})}) {
      FairEnumerator e(K, sched);
      IntSet seen;
      for (std::size_t t = 1; t <= 160; ++t) {
        const Int x = e.at(t);
        ASSERT_TRUE(K.contains(x));
        seen.insert(x);
      }
      // Permutations act within blocks of 16 ranks; the first 128 ranks are
      // therefore all present after 160 steps.
      for (std::uint64_t k = 0; k < 128; ++k) EXPECT_TRUE(seen.count(enumerate_rank(K, k)));
    }
  }
  FairEnumerator a(SymbolicSet::all(), Schedule::permuted(9)), b(SymbolicSet::all(), Schedule::permuted(9));
  EXPECT_EQ(first_inputs(a, 64), first_inputs(b, 64));
  FairEnumerator c1(SymbolicSet::all(), Schedule::permuted(10));
  EXPECT_NE(first_inputs(a, 64), first_inputs(c1, 64));
}

TEST(Mq, SpecStepTrace) {
  MqAdversary adv;
  EXPECT_EQ(adv.need_input(), 0);
  EXPECT_EQ(adv.pair().placement(0), Placement::both);
  EXPECT_TRUE(adv.query(1, 0));
  EXPECT_EQ(adv.pair().placement(1), Placement::zero);
  EXPECT_EQ(adv.pair().toggle(), 1);
  EXPECT_TRUE(adv.query(0, 1));
  EXPECT_EQ(adv.pair().toggle(), 1);
  // a = 1: a fresh string asked about L_0 lands in L_1, answer no.
  EXPECT_FALSE(adv.query(2, 0));
  EXPECT_EQ(adv.pair().placement(2), Placement::one);
  EXPECT_EQ(adv.pair().toggle(), 0);
  EXPECT_FALSE(adv.query(1, 1));
  adv.generated(7);
  EXPECT_EQ(adv.pair().placement(7), Placement::zero);
  EXPECT_EQ(adv.commit(7), 1);
  EXPECT_EQ(adv.need_input(), -1);
}

TEST(Mq, ForcesMistakeAgainstEachGenerator) {
  for (const char* name : {"closure-style", "first-yes", "scripted"}) {
    for (std::size_t bound : {1u, 3u, 6u}) {
      auto gen = make_mq_generator(name, bound);
      auto rep = run_mq_adversary(*gen);
      ASSERT_EQ(rep.outcome, MqReport::Outcome::mistake_forced) << name;
      EXPECT_EQ(rep.phases, bound);
      ASSERT_TRUE(rep.committed.has_value());
      const auto pair = DynamicLanguagePair::replay(rep.log);
      // Every input is in both languages; the last output is outside the
      // committed one (or is an input).
      for (Int x : rep.inputs) EXPECT_EQ(pair.placement(x), Placement::both);
      const Int z = rep.outputs.back();
      const IntSet S(rep.inputs.begin(), rep.inputs.end());
      EXPECT_TRUE(!pair.contains(*rep.committed, z) || S.count(z)) << name;
      EXPECT_EQ(pair.placement(z) == Placement::zero || pair.placement(z) == Placement::one, !S.count(z));
      for (const auto& q : rep.queries) EXPECT_EQ(q.answer, pair.contains(q.which, q.w));
    }
  }
}

TEST(Mq, BothLanguagesKeepGrowing) {
  ScriptedMq gen(30);
  auto rep = run_mq_adversary(gen);
  const auto pair = DynamicLanguagePair::replay(rep.log);
  EXPECT_EQ(pair.count(Placement::both), 30u);
  EXPECT_GE(pair.count(Placement::zero), 30u);
  EXPECT_GE(pair.count(Placement::one), 30u);
}

TEST(Mq, EndlessQueriesExhaustBudget) {
  EndlessMq gen;
  auto rep = run_mq_adversary(gen, {50, {}});
  EXPECT_EQ(rep.outcome, MqReport::Outcome::budget_exhausted);
  EXPECT_EQ(rep.phases, 1u);
  EXPECT_EQ(rep.queries.size(), 50u);
  EXPECT_FALSE(rep.committed.has_value());
}

TEST(Detector, TransparentIsExact) {
  StabilizationDetector det;
  const auto snap = Enumerator::transparent(parse_set("tail(0) + {-5}"));
  EXPECT_TRUE(det.finite_excess(snap, SymbolicSet::at_least(0)));
  EXPECT_FALSE(det.finite_excess(snap, intersect(SymbolicSet::at_least(3), SymbolicSet::residue_class(2, 0))));
  EXPECT_FALSE(det.equals(snap, SymbolicSet::at_least(0)));
  EXPECT_TRUE(det.equals(snap, parse_set("tail(0) + {-5}")));
  EXPECT_FALSE(det.finite_excess(Enumerator::transparent(SymbolicSet::all()), SymbolicSet::at_least(0)));
  EXPECT_THROW(det.equals(Enumerator::opaque([](std::uint64_t k) { return Int(k); }), SymbolicSet::all()),
               ValidationError);
}

TEST(Detector, WindowedNeedsPatience) {
  StabilizationDetector det({DetectorConfig::Mode::windowed, 10, 100, 2});
  const auto snap = Enumerator::opaque([](std::uint64_t k) { return static_cast<Int>(k) - 3; });
  EXPECT_FALSE(det.finite_excess(snap, SymbolicSet::at_least(0)));
  EXPECT_TRUE(det.finite_excess(snap, SymbolicSet::at_least(0)));
  det.reset();
  EXPECT_FALSE(det.finite_excess(snap, SymbolicSet::at_least(0)));
  EXPECT_FALSE(det.finite_excess(Enumerator::opaque([](std::uint64_t k) { return -static_cast<Int>(k); }),
                                 SymbolicSet::at_least(0)));
}

TEST(ExhaustiveLb, TraceAgainstCriticalGeneratorOnTails) {
  const auto tails = build_paper_collection("tails");
  ExhaustiveCriticalGenerator gen(tails);
  auto rep = run_exhaustive_lb(gen, StabilizationDetector{}, {4, 500, 200});
  ASSERT_EQ(rep.verdict, ProofVerdict::violation) << rep.note;
  ASSERT_EQ(rep.phases.size(), 4u);
  // Phase 0 presents 0 then 1; the generator settles on tail(0) at round 2.
  EXPECT_EQ(rep.phases[0].t_detect, 2u);
  EXPECT_EQ(rep.phases[0].end_value, 1);
  // Phase 1 starts with -1 at round 3 and settles immediately, then runs on
  // until it passes 1.
  EXPECT_EQ(rep.transcript.rounds[2].x, -1);
  EXPECT_EQ(rep.phases[1].t_detect, 3u);
  EXPECT_EQ(rep.phases[1].end_value, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(rep.phases[i].language, SymbolicSet::at_least(-static_cast<Int>(i)));
    EXPECT_GT(rep.phases[i].end_value, i ? rep.phases[i - 1].end_value : -1);
  }
  // The emitted prefix is the phased sequence 0,1 | -1,0,1,2 | -2,...
  const std::vector<Int> head{0, 1, -1, 0, 1, 2, -2};
  for (std::size_t k = 0; k < head.size(); ++k) EXPECT_EQ(rep.transcript.rounds[k].x, head[k]);
  for (const auto& c : rep.claims) EXPECT_TRUE(c.missing.has_value());
}

TEST(ExhaustiveLb, StallsAgainstFullSupport) {
  FixedSupport gen(SymbolicSet::all());
  auto rep = run_exhaustive_lb(gen, StabilizationDetector{}, {4, 500, 100});
  EXPECT_EQ(rep.verdict, ProofVerdict::inconclusive);
  EXPECT_TRUE(rep.claims.empty());
  EXPECT_FALSE(rep.note.empty());
}

TEST(BreadthLb, NextFunction) {
  EXPECT_EQ(canonical_next(-3), 3);
  EXPECT_EQ(canonical_next(2), -3);
  EXPECT_EQ(canonical_next(0), -1);
  for (std::uint64_t r = 0; r < 100; ++r) EXPECT_EQ(canonical_next(canonical::at(r)), canonical::at(r + 1));
}

TEST(BreadthLb, PhaseZeroStream) {
  FixedSupport gen(SymbolicSet::all());
  BreadthLbAdversary adv(StabilizationDetector{}, {3, 6, 200});
  auto tr = play(adv, gen, 6);
  std::vector<Int> xs;
  for (const auto& r : tr.rounds) xs.push_back(r.x);
  EXPECT_EQ(xs, (std::vector<Int>{-1, 1, -2, 2, -3, 3}));
}

TEST(BreadthLb, TraceAgainstCriticalSnapshots) {
  const auto cof = build_paper_collection("cofinite1");
  KmGenerator gen(cof);
  BreadthLbAdversary adv(StabilizationDetector{}, {3, 500, 200});
  auto tr = play(adv, gen, 500);
  ASSERT_EQ(adv.phases().size(), 3u);
  EXPECT_EQ(adv.phases()[0].t_end, 2u);
  EXPECT_EQ(adv.n_prime_values()[0], 1);
  EXPECT_EQ(adv.n_values()[0], -2);
  EXPECT_EQ(adv.phases()[1].t_end, 6u);
  EXPECT_EQ(adv.n_prime_values()[1], 2);
  EXPECT_EQ(adv.n_values()[1], -3);
  // Phase 1: 0, -1, 1, (skip -2), 2.
  const std::vector<Int> head{-1, 1, 0, -1, 1, 2};
  for (std::size_t k = 0; k < head.size(); ++k) EXPECT_EQ(tr.rounds[k].x, head[k]);
  // Phase 2 re-inserts n_1 = -2 first.
  EXPECT_EQ(tr.rounds[6].x, -2);
  for (std::size_t j = 0; j < 3; ++j)
    EXPECT_EQ(tr.rounds[adv.phases()[j].t_end - 1].snapshot->support(), adv.phases()[j].language);
}

TEST(BreadthLb, CriticalPatchingNeverSettles) {
  const auto cof = build_paper_collection("cofinite1");
  ExhaustiveCriticalGenerator gen(cof);
  auto rep = run_breadth_lb(gen, StabilizationDetector{}, {3, 300, 100});
  EXPECT_EQ(rep.verdict, ProofVerdict::inconclusive);
}

TEST(Existence, WitnessFinderExamples) {
  const auto tails = build_paper_collection("tails");
  EXPECT_EQ(find_violation_witness(tails, SymbolicSet::all(), {0, 3}), std::optional<std::size_t>(2));
  const auto cof = build_paper_collection("cofinite1");
  for (const IntSet& T : {IntSet{}, IntSet{0}, IntSet{1, 2, 3}})
    EXPECT_EQ(find_violation_witness(cof, SymbolicSet::all(), T), std::nullopt);
  // Breadth mode drops the infinite-difference requirement.
  EXPECT_EQ(find_violation_witness(cof, SymbolicSet::all(), {0}, {64, false}), std::optional<std::size_t>(3));
  const auto eo = build_paper_collection("evenodd");
  EXPECT_EQ(find_violation_witness(eo, eo.language(3).body(), {}), std::nullopt);
}

TEST(Existence, StagesOnTails) {
  const auto tails = build_paper_collection("tails");
  ExhaustiveCriticalGenerator gen(tails);
  auto rep = run_existence_violation(tails, 1, gen, {}, StabilizationDetector{}, {5, 500, 200});
  ASSERT_EQ(rep.verdict, ProofVerdict::violation) << rep.note;
  ASSERT_EQ(rep.stages.size(), 5u);
  for (std::size_t s = 0; s < 5; ++s) {
    EXPECT_EQ(rep.stages[s].language, SymbolicSet::at_least(-static_cast<Int>(s)));
    EXPECT_GT(rep.stages[s].t_detect, 0u);
    EXPECT_EQ(rep.stages[s].presented, std::optional<Int>(-static_cast<Int>(s) - 1));
  }
  for (const auto& r : rep.transcript.rounds) EXPECT_TRUE(SymbolicSet::all().contains(r.x));
}

TEST(Existence, ConditionSatisfiedOnCofinite) {
  const auto cof = build_paper_collection("cofinite1");
  ExhaustiveCriticalGenerator gen(cof);
  auto rep = run_existence_violation(cof, 1, gen);
  EXPECT_EQ(rep.verdict, ProofVerdict::condition_satisfied);
  EXPECT_NE(rep.note.find("within budget"), std::string::npos);
  EXPECT_TRUE(rep.transcript.empty());
}
