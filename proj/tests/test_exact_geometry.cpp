#include <gtest/gtest.h>

#include <random>

#include "atf/exact_geometry.hpp"

using namespace atf;

namespace {

Rational R(const char* s) { return parse_rational(s); }
RationalPoint P(long x, long y) { return {Rational(x), Rational(y)}; }

LatticePolygon square(long s) { return LatticePolygon({P(0, 0), P(s, 0), P(s, s), P(0, s)}); }

}  // namespace

TEST(PrimitiveOf, Examples) {
  auto [p1, m1] = primitive_of(4, 6);
  EXPECT_EQ(p1.a, 2);
  EXPECT_EQ(p1.b, 3);
  EXPECT_EQ(m1, 2);
  auto [p2, m2] = primitive_of(1, 0);
  EXPECT_EQ(p2.a, 1);
  EXPECT_EQ(m2, 1);
  auto [p3, m3] = primitive_of(-3, 0);
  EXPECT_EQ(p3.a, -1);
  EXPECT_EQ(p3.b, 0);
  EXPECT_EQ(m3, 3);
  EXPECT_THROW(primitive_of(0, 0), Error);
}

TEST(PrimitiveOf, RationalVector) {
  auto [p, m] = primitive_of(RationalPoint{R("1/2"), R("3/4")});
  EXPECT_EQ(p.a, 2);
  EXPECT_EQ(p.b, 3);
  EXPECT_EQ(m, R("1/4"));
}

TEST(AffineLength, Examples) {
  EXPECT_EQ(affine_length(P(0, 0), P(4, 6)), 2);
  EXPECT_EQ(affine_length(P(0, 0), P(1, 0)), 1);
  EXPECT_EQ(affine_length(P(0, 0), {R("5/2"), 0}), R("5/2"));
  EXPECT_THROW(affine_length(P(1, 1), P(1, 1)), Error);
}

TEST(AffineDistance, Examples) {
  EXPECT_EQ(affine_distance(P(1, 1), P(0, 0), P(3, 0)), 1);
  EXPECT_EQ(affine_distance(P(0, 0), P(1, 0), P(0, 1)), 1);
  EXPECT_EQ(affine_distance(P(2, 2), P(0, 0), P(4, 0)), 2);
}

TEST(AffineDistance, IndependentOfRepresentative) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int it = 0; it < 200; ++it) {
    RationalPoint o{make_rational(d(rng), 3), make_rational(d(rng), 5)};
    RationalPoint a{Rational(d(rng)), Rational(d(rng))};
    long u = d(rng), v = d(rng);
    if (u == 0 && v == 0) continue;
    RationalPoint b = a + RationalPoint{Rational(u), Rational(v)};
    auto [p, m] = primitive_of(u, v);
    RationalPoint a2 = a + make_rational(d(rng), 7) * p.as_point();
    RationalPoint b2 = a2 + Rational(1 + std::abs(d(rng))) * p.as_point();
    EXPECT_EQ(affine_distance(o, a, b), affine_distance(o, a2, b2));
  }
}

TEST(IsDelzant, Examples) {
  EXPECT_TRUE(is_delzant(LatticePolygon({P(0, 0), P(3, 0), P(0, 3)})).delzant);
  EXPECT_TRUE(is_delzant(square(4)).delzant);
  auto rep = is_delzant(LatticePolygon({P(0, 0), P(2, 0), P(0, 1)}));
  EXPECT_FALSE(rep.delzant);
  ASSERT_EQ(rep.violating_vertices.size(), 1u);
  EXPECT_EQ(rep.violating_vertices[0], 2u);  // the vertex (0,1), determinant -2
}

TEST(ChopCorner, Examples) {
  LatticePolygon tri({P(0, 0), P(3, 0), P(0, 3)});
  auto p = chop_corner(tri, 0, 1);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p.vertex(0), P(0, 1));
  EXPECT_EQ(p.vertex(1), P(1, 0));
  EXPECT_EQ(p.edge_length(0), 1);
  EXPECT_TRUE(is_delzant(p).delzant);

  auto q = chop_corner(tri, 1, R("1/2"));
  EXPECT_TRUE(is_delzant(q).delzant);
  EXPECT_EQ(q.edge_length(1), R("1/2"));
  EXPECT_EQ(q.vertex(1), (RationalPoint{R("5/2"), 0}));
  EXPECT_EQ(q.vertex(2), (RationalPoint{R("5/2"), R("1/2")}));

  EXPECT_THROW(chop_corner(tri, 0, 3), Error);
}

TEST(ChopCorner, AreaDropAndDelzant) {
  std::mt19937 rng(11);
  for (int it = 0; it < 100; ++it) {
    LatticePolygon p = make_trapezoid({1, 4, 10, 6});
    for (int c = 0; c < 4; ++c) {
      std::size_t v = rng() % p.size();
      Rational lim = rmin(p.edge_length(p.prev(v)), p.edge_length(v));
      Rational size = lim * make_rational(1 + static_cast<long>(rng() % 5), 7);
      auto q = chop_corner(p, v, size);
      EXPECT_EQ(p.area() - q.area(), size * size / 2);
      EXPECT_TRUE(is_delzant(q).delzant);
      auto s = edge_self_intersections(q);
      long sum = 0;
      for (auto a : s) sum += a;
      EXPECT_EQ(12 - sum - 3 * static_cast<long>(q.size()), 0);
      p = q;
    }
  }
}

TEST(MakeTrapezoid, Examples) {
  auto p = make_trapezoid({2, 6, 16, 4});
  EXPECT_EQ(p.vertices(), (std::vector<RationalPoint>{P(0, 0), P(16, 0), P(4, 6), P(0, 6)}));
  EXPECT_EQ(p.labels(), (std::vector<std::string>{"Y", "X'", "Z", "X"}));
  EXPECT_EQ(make_trapezoid({0, 1, 1, 1}).vertices(), square(1).vertices());
  Rational d2 = R("1/5"), di = R("1/50"), dj = R("1/70");
  auto t = make_trapezoid({1, 1 - d2, 2 - d2 - di - dj, 1 - di - dj});
  EXPECT_TRUE(is_delzant(t).delzant);
  EXPECT_THROW(make_trapezoid({1, 1, 3, 1}), Error);
}

TEST(TrapezoidCanonical, Examples) {
  EXPECT_EQ(trapezoid_canonical({-2, 1, 3, 7}), (TrapezoidParams{2, 1, 7, 3}));
  EXPECT_EQ(trapezoid_canonical({0, 5, 2, 2}), (TrapezoidParams{0, 2, 5, 5}));
  EXPECT_EQ(trapezoid_canonical({1, 1, 2, 1}), (TrapezoidParams{1, 1, 2, 1}));
}

TEST(ApplyAgl, Examples) {
  auto sq = square(1);
  auto t = apply_agl(sq, {{{1, 0}, {0, 1}}}, P(1, 1));
  EXPECT_EQ(t.vertex(0), P(1, 1));
  auto sh = apply_agl(sq, {{{1, 1}, {0, 1}}}, P(0, 0));
  for (std::size_t e = 0; e < 4; ++e) EXPECT_EQ(sh.edge_length(e), 1);
  auto refl = apply_agl(make_trapezoid({1, 1, 3, 2}), {{{0, 1}, {1, 0}}}, P(0, 0));
  EXPECT_GT(refl.area(), 0);
  EXPECT_THROW(apply_agl(sq, {{{2, 0}, {0, 1}}}, P(0, 0)), Error);
}

TEST(ApplyAgl, InvariantLengthsAndDistances) {
  std::mt19937 rng(3);
  const std::vector<IntMatrix2> mats{{{{1, 1}, {0, 1}}}, {{{0, 1}, {1, 0}}}, {{{2, 1}, {1, 1}}}, {{{1, -3}, {0, -1}}},
                                     {{{-1, 0}, {5, 1}}}};
  std::uniform_int_distribution<int> d(-6, 6);
  for (int it = 0; it < 200; ++it) {
    const auto& m = mats[it % mats.size()];
    RationalPoint t{make_rational(d(rng), 3), make_rational(d(rng), 2)};
    auto f = [&](const RationalPoint& p) {
      return RationalPoint{m[0][0] * p.x + m[0][1] * p.y + t.x, m[1][0] * p.x + m[1][1] * p.y + t.y};
    };
    RationalPoint a{Rational(d(rng)), Rational(d(rng))}, b{make_rational(d(rng), 2), Rational(d(rng))},
        o{make_rational(d(rng), 5), Rational(d(rng))};
    if (a == b) continue;
    EXPECT_EQ(affine_length(a, b), affine_length(f(a), f(b)));
    EXPECT_EQ(affine_distance(o, a, b), affine_distance(f(o), f(a), f(b)));
  }
}

TEST(EdgeSelfIntersections, Examples) {
  EXPECT_EQ(edge_self_intersections(LatticePolygon({P(0, 0), P(3, 0), P(0, 3)})), (std::vector<long>{1, 1, 1}));
  EXPECT_EQ(edge_self_intersections(make_trapezoid({3, 1, 5, 2})), (std::vector<long>{3, 0, -3, 0}));
  EXPECT_EQ(edge_self_intersections(square(1)), (std::vector<long>{0, 0, 0, 0}));
  EXPECT_THROW(edge_self_intersections(LatticePolygon({P(0, 0), P(2, 0), P(0, 1)})), Error);
}

TEST(HalfplaneFeasible, Examples) {
  auto sq = square(1);
  std::vector<HalfPlane> hs;
  for (std::size_t e = 0; e < 4; ++e) hs.push_back({sq.vertex(e), sq.edge_direction(e), R("1/4")});
  auto r = halfplane_feasible(hs);
  ASSERT_FALSE(r.empty);
  EXPECT_EQ(r.witness, (RationalPoint{R("1/4"), R("1/4")}));
  EXPECT_EQ(r.vertices.size(), 4u);

  std::vector<HalfPlane> bad{{P(0, 0), {1, 0}, 1}, {P(0, 0), {-1, 0}, 1}};
  EXPECT_TRUE(halfplane_feasible(bad).empty);

  auto big = square(4);
  hs.clear();
  for (std::size_t e = 0; e < 4; ++e) hs.push_back({big.vertex(e), big.edge_direction(e), 2});
  auto pt = halfplane_feasible(hs);
  ASSERT_FALSE(pt.empty);
  EXPECT_EQ(pt.vertices.size(), 1u);
  EXPECT_EQ(pt.witness, P(2, 2));
}

TEST(VerifyEmbedding, Examples) {
  auto sq = square(4);
  EdgeTriangle t1{0, P(1, 0), P(2, 0), {R("3/2"), 1}};
  EXPECT_TRUE(verify_embedding(sq, {t1}).ok);
  EdgeTriangle t2{0, {R("3/2"), 0}, {R("5/2"), 0}, {2, 1}};
  auto rep = verify_embedding(sq, {t1, t2});
  EXPECT_FALSE(rep.ok);
  ASSERT_TRUE(rep.overlapping_pair.has_value());
  EXPECT_EQ(rep.overlapping_pair->first, 0u);
  EXPECT_EQ(rep.overlapping_pair->second, 1u);
  EdgeTriangle corner{0, P(0, 0), P(1, 0), {R("1/2"), 1}};
  EXPECT_FALSE(verify_embedding(sq, {corner}).ok);
}
