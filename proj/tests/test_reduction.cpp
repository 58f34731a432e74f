#include <gtest/gtest.h>

#include "atf/generate.hpp"
#include "atf/reduction.hpp"
#include "util.hpp"

using namespace atf;
using testutil::cl;
using testutil::cyc;
using testutil::R;

namespace {

std::vector<HomologyClass> classes(int n, const std::vector<std::string>& s) {
  std::vector<HomologyClass> out;
  for (const auto& x : s) out.push_back(cl(n, x.c_str()));
  return out;
}

bool same_cycle_up_to_rotation(const std::vector<HomologyClass>& a, const std::vector<HomologyClass>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[(r + i) % a.size()] == b[i];
    if (ok) return true;
  }
  return false;
}

// First worked replacement example: case i, f2 non-toric on 2H.
DivisorCycle first_example() { return cyc({"H-E1-E3-E4", "E3", "2H-E2-E3"}, {"1/3", "1/5", "1/6", "1/7"}); }

}  // namespace

TEST(ReducedModel, MonotoneThreeComponent) {
  auto m = reduced_model(cyc({"H", "H-E3", "H-E1-E2"}, {"1/3", "1/3", "1/3"}));
  EXPECT_EQ(m.kase.tag, CaseTag::III);
  EXPECT_EQ(m.kase.a, 1);
  EXPECT_TRUE(same_cycle_up_to_rotation(m.terminal.cycle.components, classes(1, {"H", "H-E1", "H"})));
  ASSERT_EQ(m.gamma.steps.size(), 2u);
  for (const auto& s : m.gamma.steps) EXPECT_EQ(s.kind, BlowupStep::Kind::NonToric);
}

TEST(ReducedModel, FirstReplacementExample) {
  auto m = reduced_model(first_example());
  EXPECT_EQ(m.kase.tag, CaseTag::I);
  EXPECT_EQ(m.kase.branch, Branch::NonToricFirst);
  EXPECT_TRUE(same_cycle_up_to_rotation(m.terminal.cycle.components, classes(1, {"2H", "H-E1"})));
  ASSERT_EQ(m.gamma.steps.size(), 3u);
  EXPECT_EQ(m.gamma.steps[0].kind, BlowupStep::Kind::NonToric);
  EXPECT_EQ(m.terminal.tags[m.gamma.steps[0].location], "C1");
  EXPECT_EQ(m.gamma.steps[1].kind, BlowupStep::Kind::Toric);
  EXPECT_EQ(m.gamma.steps[2].kind, BlowupStep::Kind::NonToric);
}

TEST(ReducedModel, AlreadyTerminalCaseV) {
  auto m = reduced_model(cyc({"3H-E1-2E2", "E2"}, {"1/3", "1/4"}));
  EXPECT_EQ(m.kase.tag, CaseTag::V);
  EXPECT_EQ(m.kase.l, 2);
  EXPECT_TRUE(m.gamma.steps.empty());
}

TEST(ReducedModel, Errors) {
  EXPECT_THROW(reduced_model(cyc({"2H", "H"}, {"1/3"})), Error);
  EXPECT_THROW(reduced_model(cyc({"H-E1-E2", "E2", "2H-E2"}, {"1/5", "1/3"})), Error);  // not reduced
}

TEST(EpsilonReplacement, FirstExample) {
  auto d = first_example();
  auto m = reduced_model(d);
  auto e = epsilon_replacement(m, d);
  EXPECT_EQ(e.x_eps.cycle.components, classes(5, {"H-E1-E3-E4-E5", "E3", "2H-E2-E3-E5", "E5"}));
  EXPECT_TRUE(e.report.replaced);
  ASSERT_EQ(e.report.synthetic.size(), 1u);
  EXPECT_EQ(e.x_eps.cycle.areas.delta(5), e.report.epsilon);
  ASSERT_EQ(e.report.distinguished.size(), 2u);
  EXPECT_EQ(e.report.distinguished[0].first, 3);
  EXPECT_EQ(e.report.distinguished[1].first, 5);
}

TEST(EpsilonReplacement, NestedWithToricOuter) {
  // The literal list entry (H124, E3, 2H-E3-E4, E4) is not a log Calabi-Yau cycle; H1234 is.
  EXPECT_FALSE(validate_cycle(cyc({"H-E1-E2-E4", "E3", "2H-E3-E4", "E4"}, {"1/3", "1/5", "1/6", "1/7"})).ok);
  auto d = cyc({"H-E1-E2-E3-E4", "E3", "2H-E3-E4", "E4"}, {"1/3", "1/5", "1/6", "1/7"});
  auto m = reduced_model(d);
  EXPECT_EQ(m.kase.tag, CaseTag::I);
  EXPECT_EQ(m.kase.branch, Branch::Otherwise);
  auto e = epsilon_replacement(m, d);
  EXPECT_EQ(e.x_eps.cycle.components, classes(5, {"H-E1-E2-E3-E4", "E3-E5", "E5", "2H-E3-E4-E5", "E4"}));
  EXPECT_EQ(e.x_eps.cycle.areas.delta(5), e.report.epsilon);
  ASSERT_EQ(e.report.distinguished.size(), 2u);
  EXPECT_EQ(e.report.distinguished[0].first, 3);
  EXPECT_EQ(e.report.distinguished[1].first, 5);
}

TEST(EpsilonReplacement, TwoSyntheticNested) {
  auto d = cyc({"H-E1-E2-E3", "2H-E4"}, {"1/3", "1/5", "1/6", "1/7"});
  auto m = reduced_model(d);
  auto e = epsilon_replacement(m, d);
  EXPECT_EQ(e.x_eps.cycle.components, classes(6, {"H-E1-E2-E3-E5", "E5-E6", "E6", "2H-E4-E5-E6"}));
  const Rational eps = e.report.epsilon;
  EXPECT_EQ(e.x_eps.cycle.areas.delta(5), eps);
  EXPECT_EQ(e.x_eps.cycle.areas.delta(6), eps / 2);
  EXPECT_TRUE(e.report.nested);
}

TEST(EpsilonReplacement, CaseTwoBothNodes) {
  auto d = cyc({"100H-99E1-E2", "-97H+98E1-E3"}, {"99/100", "1/1000", "1/1000"});
  auto m = reduced_model(d);
  EXPECT_EQ(m.kase.tag, CaseTag::II);
  EXPECT_EQ(m.kase.a, 99);
  EXPECT_EQ(m.kase.branch, Branch::NonToricFirst);
  auto e = epsilon_replacement(m, d);
  EXPECT_EQ(e.x_eps.cycle.components, classes(5, {"100H-99E1-E2-E4-E5", "E4", "-97H+98E1-E3-E4-E5", "E5"}));
  EXPECT_EQ(e.x_eps.cycle.areas.delta(4), e.report.epsilon);
  EXPECT_EQ(e.x_eps.cycle.areas.delta(5), e.report.epsilon);
}

TEST(EpsilonReplacement, EpsilonTooLarge) {
  auto d = first_example();
  auto m = reduced_model(d);
  EXPECT_THROW(epsilon_replacement(m, d, R("1/10")), Error);
}

TEST(EpsilonReplacement, Idempotent) {
  InstanceGenerator gen(99);
  for (const auto& v : all_variants()) {
    for (int i = 0; i < 20; ++i) {
      auto g = gen.draw(v);
      auto m = reduced_model(g.cycle);
      auto e = epsilon_replacement(m, g.cycle);
      auto x = e.x_eps.cycle;
      auto m2 = reduced_model(x);
      auto e2 = epsilon_replacement(m2, x);
      EXPECT_FALSE(e2.report.replaced) << v.name;
      EXPECT_EQ(e2.x_eps.cycle, x) << v.name;
    }
  }
}

TEST(ExceptionalSet, FirstExample) {
  auto d = first_example();
  auto m = reduced_model(d);
  auto e = epsilon_replacement(m, d);
  auto ex = exceptional_set(m.kase, e.x_eps.cycle, nontoric_indices(m.gamma), e.report.distinguished);
  EXPECT_EQ(ex, classes(5, {"E1", "H-E2-E3", "H-E2-E5", "E4"}));
}

TEST(ExceptionalSet, CaseFourOtherwise) {
  auto d = cyc({"H", "H-E1", "E1-E2", "H-E1"}, {"1/2", "1/4"});
  auto m = reduced_model(d);
  EXPECT_EQ(m.kase.tag, CaseTag::IV);
  EXPECT_EQ(m.kase.branch, Branch::Otherwise);
  auto e = epsilon_replacement(m, d);
  EXPECT_FALSE(e.report.replaced);
  auto ex = exceptional_set(m.kase, e.x_eps.cycle, nontoric_indices(m.gamma), e.report.distinguished);
  EXPECT_EQ(ex, classes(2, {"E2"}));
}

TEST(ExceptionalSet, CaseOneOtherwise) {
  auto d = cyc({"H-E1-E2-E3", "2H-E4"}, {"1/3", "1/5", "1/6", "1/7"});
  auto m = reduced_model(d);
  auto e = epsilon_replacement(m, d);
  auto ex = exceptional_set(m.kase, e.x_eps.cycle, nontoric_indices(m.gamma), e.report.distinguished);
  EXPECT_EQ(ex, classes(6, {"E1", "H-E5-E6", "E2", "E3", "E4"}));
}

TEST(ToricModel, FirstExample) {
  auto d = first_example();
  auto r = reduce(d);
  const Rational eps = r.eps.report.epsilon;
  const Rational d2 = R("1/5"), d3 = R("1/6");
  SequenceCycle expect{{-1, 0, 1, 0}, {1 - d3 - eps, 1 - d2, 2 - d2 - d3 - eps, 1 - d2}, {}};
  EXPECT_TRUE(taut_equal(r.toric.sequences, expect));
  EXPECT_EQ(r.raw_params, (TrapezoidParams{1, 1 - d2, 2 - d2 - d3 - eps, 1 - d3 - eps}));
  EXPECT_TRUE(r.plan.chops.empty());
}

TEST(ToricModel, CaseFiveTrivial) {
  auto d = cyc({"3H-E1-2E2", "E2"}, {"1/3", "1/4"});
  auto r = reduce(d);
  EXPECT_EQ(sequence_charge(r.toric.sequences), 0);
  EXPECT_EQ(r.exceptional.size(), 3u);
}

TEST(ToricModel, EmptySetIsIdentity) {
  TaggedCycle t{cyc({"H", "H", "H"}, {}), {"a", "b", "c"}};
  auto tm = toric_model(t, {});
  EXPECT_EQ(tm.sequences.s, (std::vector<long>{1, 1, 1}));
  EXPECT_EQ(tm.sequences.areas, (std::vector<Rational>{1, 1, 1}));
}

TEST(TrapezoidParams, CaseOneBranches) {
  const Rational d2 = R("1/5"), di = R("1/6"), dj = R("1/60");
  AreaVector av{1, {R("1/3"), d2, di, R("1/7"), dj}};
  ReducedCase a{CaseTag::I, 0, 0, Branch::NonToricFirst};
  EXPECT_EQ(trapezoid_params(a, av, {{3, di}, {5, dj}}), (TrapezoidParams{1, 1 - d2, 2 - d2 - di - dj, 1 - di - dj}));
  ReducedCase b{CaseTag::I, 0, 0, Branch::Otherwise};
  EXPECT_EQ(trapezoid_params(b, av, {{3, di}, {5, dj}}), (TrapezoidParams{2, 1 - di, 2 - di - dj, di - dj}));
  EXPECT_THROW(trapezoid_params(b, av, {{3, dj}, {5, di}}), Error);
}

TEST(ChopPlan, SpecialFirstChop) {
  auto d = cyc({"H-E2", "E2", "H-E1-E2", "H"}, {"1/3", "1/4"});
  auto r = reduce(d);
  EXPECT_EQ(r.model.kase.tag, CaseTag::III);
  EXPECT_EQ(r.model.kase.branch, Branch::ToricFirst);
  ASSERT_FALSE(r.plan.chops.empty());
  const auto& c = r.plan.chops.front();
  EXPECT_EQ(c.size, 1 - R("1/3") - R("1/4"));
  // The corner is between an x-edge and the edge of raw length z (orientation may swap y and z).
  const auto& tags = r.plan.edge_tags;
  const std::string zs = r.raw_params.z == r.plan.params.z ? tags[2] : tags[0];
  auto is_x = [&](const std::string& t) { return t == tags[1] || t == tags[3]; };
  EXPECT_TRUE((is_x(c.left) && c.right == zs) || (c.left == zs && is_x(c.right)));
}

TEST(Reduction, SweepAllVariants) {
  InstanceGenerator gen(1234);
  for (const auto& v : all_variants()) {
    for (int i = 0; i < 60; ++i) {
      auto g = gen.draw(v);
      ReductionResult r;
      ASSERT_NO_THROW(r = reduce(g.cycle)) << v.name << " " << to_string(s_area_sequences(g.cycle));
      EXPECT_EQ(r.model.kase.tag, v.tag) << v.name;
      EXPECT_EQ(r.model.kase.branch, v.branch) << v.name;
      EXPECT_EQ(r.model.kase.a, g.kase.a) << v.name;
      // Round trip: the recovered path has the generated sizes and kinds.
      ASSERT_EQ(r.model.gamma.steps.size(), g.gamma.steps.size());
      for (std::size_t k = 0; k < g.gamma.steps.size(); ++k) {
        EXPECT_EQ(r.model.gamma.steps[k].kind, g.gamma.steps[k].kind);
        EXPECT_EQ(r.model.gamma.steps[k].size, g.gamma.steps[k].size);
        EXPECT_EQ(r.model.gamma.steps[k].index, g.gamma.steps[k].index);
      }
      EXPECT_TRUE(same_cycle_up_to_rotation(r.model.terminal.cycle.components, g.terminal.components));
      auto t = r.raw_params;
      EXPECT_EQ(t.y - t.z, Rational(t.k) * t.x);
      for (const auto& s : r.exceptional) EXPECT_TRUE(is_nontoric_exceptional(s, r.eps.x_eps.cycle));
    }
  }
}
