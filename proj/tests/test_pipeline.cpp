#include <gtest/gtest.h>

#include "atf/generate.hpp"
#include "atf/pipeline.hpp"
#include "util.hpp"

using namespace atf;
using testutil::cl;
using testutil::cyc;
using testutil::R;

namespace {

DivisorCycle scaled(DivisorCycle d, const Rational& c) {
  d.areas.c *= c;
  for (auto& x : d.areas.deltas) x *= c;
  return d;
}

Rational volume_of(const AreaVector& a) {
  Rational v = a.c * a.c;
  for (const auto& x : a.deltas) v -= x * x;
  return v / 2;
}

}  // namespace

TEST(Realize, FirstReplacementExample) {
  auto d = cyc({"H-E1-E3-E4", "E3", "2H-E2-E3"}, {"1/3", "1/5", "1/6", "1/7"});
  auto r = realize(d);
  const Rational eps = r.report.epsilon.epsilon;
  EXPECT_EQ(r.report.kase.tag, CaseTag::I);
  EXPECT_EQ(r.report.params, (TrapezoidParams{1, 1 - R("1/5"), 2 - R("1/5") - R("1/6") - eps, 1 - R("1/6") - eps}));
  ASSERT_EQ(r.report.fills.size(), 1u);
  EXPECT_EQ(r.report.fills[0].size, eps);
  EXPECT_EQ(r.diagram.extra_kind(), ExtraKind::FullBite);
  EXPECT_TRUE(r.report.roundtrip.ok) << r.report.roundtrip.message;
  EXPECT_TRUE(check_lemma(r.report.problem));
}

TEST(Realize, MonotoneThreeComponent) {
  auto d = cyc({"H", "H-E3", "H-E1-E2"}, {"1/3", "1/3", "1/3"});
  auto r = realize(d);
  EXPECT_EQ(r.report.kase.tag, CaseTag::III);
  EXPECT_EQ(r.report.kase.a, 1);
  EXPECT_TRUE(r.report.roundtrip.ok) << r.report.roundtrip.message;
  EXPECT_EQ(diagram_volume(r.diagram), volume_of(d.areas));
}

TEST(Realize, TerminalCaseOneDoubleReplacement) {
  auto d = cyc({"2H", "H-E1"}, {"1/3"});
  auto r = realize(d);
  EXPECT_EQ(r.report.epsilon.synthetic.size(), 2u);
  EXPECT_TRUE(r.report.epsilon.nested);
  EXPECT_EQ(r.diagram.extra_kind(), ExtraKind::DegenerateFullBite);
  ASSERT_EQ(r.report.fills.size(), 2u);
  EXPECT_EQ(r.report.fills[0].size * 2, r.report.fills[1].size);
  EXPECT_TRUE(r.report.roundtrip.ok) << r.report.roundtrip.message;
  EXPECT_EQ(diagram_volume(r.diagram), volume_of(d.areas));
}

TEST(Realize, Denormalizes) {
  auto d = scaled(cyc({"H", "H-E3", "H-E1-E2"}, {"1/3", "1/3", "1/3"}), 3);
  auto r = realize(d);
  EXPECT_EQ(r.report.scale, 3);
  EXPECT_TRUE(r.report.roundtrip.ok) << r.report.roundtrip.message;
  EXPECT_EQ(diagram_volume(r.diagram), volume_of(d.areas));
}

TEST(Realize, Errors) {
  EXPECT_THROW(realize(cyc({"2H", "H"}, {"1/3"})), Error);
  EXPECT_THROW(realize(cyc({"H-E1-E2", "E2", "2H-E2"}, {"1/5", "1/3"})), Error);
  try {
    realize(cyc({"H-E1-E2", "E2", "2H-E2"}, {"1/5", "1/3"}));
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "realize");
  }
}

TEST(VerifyRoundtrip, CorruptedBiteIsLocated) {
  auto d = cyc({"H", "H-E3", "H-E1-E2"}, {"1/3", "1/3", "1/3"});
  auto r = realize(d);
  ASSERT_FALSE(r.diagram.triangles.empty());
  auto bad = r.diagram;
  bad.triangles[0].size /= 2;
  auto rt = verify_roundtrip(d, bad);
  EXPECT_FALSE(rt.ok);
  EXPECT_NE(rt.message.find(bad.polygon.label(bad.triangles[0].edge)), std::string::npos) << rt.message;
}

TEST(Realize, SweepAllVariants) {
  InstanceGenerator gen(31337, 8);
  for (const auto& v : all_variants())
    for (int k = 0; k < 25; ++k) {
      auto g = gen.draw(v);
      auto d = k % 5 == 0 ? scaled(g.cycle, R("7/2")) : g.cycle;
      Realization r;
      try {
        r = realize(d, {std::nullopt, false});
      } catch (const Error& e) {
        FAIL() << v.name << " " << to_string(s_area_sequences(d)) << " deltas " << to_string(d.areas.deltas.front()) << ": " << e.what();
      }
      EXPECT_TRUE(r.report.roundtrip.ok) << v.name << ": " << r.report.roundtrip.message;
      EXPECT_EQ(r.report.lemma_holds, check_lemma(r.report.problem));
      EXPECT_EQ(r.report.kase.tag, v.tag);
      EXPECT_TRUE(validate_diagram(r.diagram).ok);
      EXPECT_EQ(diagram_volume(r.diagram), volume_of(d.areas));
      EXPECT_EQ(sequence_charge(boundary_divisor(r.diagram).sequences), charge(d));
    }
}

// Case iii, toric step first, a = 1: the theta check fails although the packing is solvable.
TEST(Realize, ThetaCheckFailsCaseThreeToricFirstUnitA) {
  auto d = cyc({"H-E2", "E2-E3", "E3", "H-E1-E2-E3-E4", "E4", "H-E4"}, {"1/7", "6/49", "12/343", "12/343"});
  try {
    realize(d);
    FAIL() << "expected a packing error";
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "packing");
  }
  auto r = realize(d, {std::nullopt, false});
  EXPECT_FALSE(r.report.lemma_holds);
  EXPECT_EQ(r.report.kase.tag, CaseTag::III);
  EXPECT_EQ(r.report.kase.a, 1);
  EXPECT_TRUE(r.report.roundtrip.ok) << r.report.roundtrip.message;
  EXPECT_EQ(diagram_volume(r.diagram), volume_of(d.areas));
}

TEST(Realize, PackingIndependentOfExceptionalOrder) {
  auto d = cyc({"H-E1-E3-E4", "E3", "2H-E2-E3"}, {"1/3", "1/5", "1/6", "1/7"});
  auto res = reduce(d);
  auto weights_for = [&](std::vector<std::size_t> order) {
    std::vector<std::vector<Rational>> bites(res.plan.polygon.size());
    for (auto i : order) {
      auto e = *res.plan.polygon.find_edge(res.eps.x_eps.tags[res.toric.hosts[i]]);
      bites[e].push_back(res.eps.x_eps.cycle.areas.area(res.exceptional[i]));
    }
    return detail::packing_weights(res.plan.polygon, bites, res.eps.x_eps.cycle.areas, res.eps.report.epsilon);
  };
  std::vector<std::size_t> asc(res.exceptional.size());
  for (std::size_t i = 0; i < asc.size(); ++i) asc[i] = i;
  auto desc = asc;
  std::reverse(desc.begin(), desc.end());
  EXPECT_EQ(weights_for(asc), weights_for(desc));
}

TEST(AtfForManifold, Examples) {
  auto two = atf_for_manifold({1, {R("1/4"), R("1/4")}});
  EXPECT_TRUE(validate_diagram(two.diagram).ok);
  EXPECT_EQ(two.volume, volume_of({1, {R("1/4"), R("1/4")}}));
  ASSERT_TRUE(two.nodal_fill);

  AreaVector mono{1, std::vector<Rational>(5, R("1/3"))};
  auto five = atf_for_manifold(mono);
  EXPECT_TRUE(validate_diagram(five.diagram).ok);
  EXPECT_EQ(five.volume, volume_of(mono));

  auto cp2 = atf_for_manifold({3, {}});
  EXPECT_EQ(cp2.diagram.polygon.size(), 3u);
  EXPECT_EQ(cp2.volume, R("9/2"));
  auto f1 = atf_for_manifold({2, {R("1/2")}});
  EXPECT_EQ(f1.diagram.polygon.size(), 4u);
  EXPECT_FALSE(f1.nodal_fill);
}

TEST(AtfForManifold, TwoBlowupsNearTheReducedBoundary) {
  AreaVector a{1, {R("1/2"), R("49/100")}};
  auto m = atf_for_manifold(a);
  EXPECT_TRUE(validate_diagram(m.diagram).ok);
  EXPECT_EQ(m.volume, volume_of(a));
  EXPECT_THROW(atf_for_manifold({1, {R("1/2"), R("1/2")}}), Error);
}

TEST(AtfForManifold, Errors) {
  try {
    atf_for_manifold({1, std::vector<Rational>(9, R("1/3"))});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "manifold");
  }
  EXPECT_THROW(atf_for_manifold({1, {R("1/5"), R("1/3")}}), Error);
}

TEST(AtfForManifold, RandomReduced) {
  std::mt19937 rng(5);
  int made = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    AreaVector a{1, {}};
    Rational prev = make_rational(1 + static_cast<long>(rng() % 9), 10);
    for (int i = 0; i < n; ++i) {
      a.deltas.push_back(prev);
      prev = prev * make_rational(5 + static_cast<long>(rng() % 6), 10);
    }
    if (!is_reduced(a)) continue;
    Rational sum = 0;
    for (const auto& x : a.deltas) sum += x;
    if (sum >= 3) continue;
    auto m = atf_for_manifold(a);
    EXPECT_TRUE(validate_diagram(m.diagram).ok);
    ++made;
  }
  EXPECT_GT(made, 20);
}
