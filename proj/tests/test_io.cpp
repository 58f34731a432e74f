#include <gtest/gtest.h>

#include "atf/atf.hpp"
#include "util.hpp"

using namespace atf;
using testutil::cyc;
using testutil::R;

TEST(JsonIo, PairRoundTrip) {
  auto d = cyc({"H-E1-E3-E4", "E3", "2H-E2-E3"}, {"1/3", "1/5", "1/6", "1/7"});
  auto j = io::pair(d);
  EXPECT_EQ(j["c"], "1");
  EXPECT_EQ(j["deltas"][0], "1/3");
  EXPECT_EQ(io::pair(j), d);
  EXPECT_EQ(io::pair(io::parse_text(j.dump())), d);
}

TEST(JsonIo, PairAcceptsTextClassesAndChecksAdjacency) {
  auto j = io::parse_text(R"({"n": 3, "c": "1", "deltas": ["1/3","1/3","1/3"],
                               "components": ["H", "H-E3", [1,-1,-1,0]], "adjacency": [[0,1],[1,2],[2,0]]})");
  auto d = io::pair(j);
  EXPECT_EQ(d, cyc({"H", "H-E3", "H-E1-E2"}, {"1/3", "1/3", "1/3"}));
  j["adjacency"] = {{0, 1}, {0, 1}, {1, 2}};
  EXPECT_THROW(io::pair(j), ParseError);
  j.erase("adjacency");
  j["components"][0] = {1, 0};
  EXPECT_THROW(io::pair(j), ParseError);
  j["components"][0] = "H";
  j["deltas"][0] = "x";
  EXPECT_THROW(io::pair(j), ParseError);
  EXPECT_THROW(io::parse_text("{not json"), ParseError);
}

TEST(JsonIo, PolygonLowestTerms) {
  LatticePolygon p({{0, 0}, {R("6/4"), 0}, {0, R("6/4")}}, {"a", "b", "c"});
  auto j = io::polygon(p);
  EXPECT_EQ(j["vertices"][1][0], "3/2");
  auto q = io::polygon(j);
  EXPECT_EQ(q.vertices(), p.vertices());
  EXPECT_EQ(q.labels(), p.labels());
}

TEST(JsonIo, TriangleRecord) {
  SurgeryTriangle t{2, R("1/3"), R("1/2"), {R("1/4"), 1}, "E1"};
  auto j = io::triangle(t);
  EXPECT_EQ(j.dump(), R"({"edge":2,"start":"1/3","size":"1/2","apex":["1/4","1"],"label":"E1"})");
  auto u = io::triangle(j);
  EXPECT_EQ(u.edge, t.edge);
  EXPECT_EQ(u.start, t.start);
  EXPECT_EQ(u.apex, t.apex);
}

TEST(JsonIo, DiagramRoundTripPreservesVerification) {
  for (auto d : {cyc({"H", "H-E3", "H-E1-E2"}, {"1/3", "1/3", "1/3"}, "3"), cyc({"2H", "H-E1"}, {"1/3"}),
                 cyc({"H-E1-E3-E4", "E3", "2H-E2-E3"}, {"1/3", "1/5", "1/6", "1/7"})}) {
    auto r = realize(d);
    auto text = io::diagram(r.diagram).dump();
    auto back = io::diagram(io::parse_text(text));
    EXPECT_EQ(io::diagram(back).dump(), text);
    EXPECT_TRUE(validate_diagram(back).ok);
    EXPECT_TRUE(verify_roundtrip(d, back).ok);
  }
}

TEST(JsonIo, RealizationIsDeterministic) {
  auto d = cyc({"2H", "H-E1"}, {"1/3"});
  EXPECT_EQ(io::realization(realize(d)).dump(2), io::realization(realize(d)).dump(2));
}

TEST(JsonIo, TraceRecordsIntermediateSequences) {
  auto m = reduced_model(cyc({"H", "H-E3", "H-E1-E2"}, {"1/3", "1/3", "1/3"}));
  auto j = io::reduced_model(m);
  EXPECT_EQ(j["case"]["case"], to_string(CaseTag::III));
  ASSERT_EQ(j["trace"]["steps"].size(), m.gamma.steps.size());
  for (const auto& s : j["trace"]["steps"]) {
    EXPECT_TRUE(s.contains("sequences"));
    EXPECT_EQ(s["sequences"]["s"].size(), s["sequences"]["areas"].size());
  }
}

TEST(Svg, DeterministicAndLabelled) {
  auto r = realize(cyc({"2H", "H-E1"}, {"1/3"}));
  auto a = render_svg(r.diagram), b = render_svg(r.diagram);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  for (const auto& l : r.diagram.polygon.labels()) EXPECT_NE(a.find(">" + l + "<"), std::string::npos) << l;
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(a.find("degenerate_full_bite"), std::string::npos);
}
