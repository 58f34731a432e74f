#pragma once

// Bitten Delzant polygons with extra types, their boundary readout, corner fills,
// and branch moves of a node cut around its eigenline.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atf/packing.hpp"
#include "atf/reduction.hpp"

namespace atf {

enum class ExtraKind { None, FullBite, DegenerateFullBite };

inline std::string to_string(ExtraKind k) {
  switch (k) {
    case ExtraKind::None: return "none";
    case ExtraKind::FullBite: return "full_bite";
    case ExtraKind::DegenerateFullBite: return "degenerate_full_bite";
  }
  return "?";
}

enum class CutSide { Left = -1, Bite = 0, Right = 1 };

inline std::string to_string(CutSide s) {
  switch (s) {
    case CutSide::Left: return "left";
    case CutSide::Bite: return "bite";
    case CutSide::Right: return "right";
  }
  return "?";
}

struct Fill {
  std::string edge;
  Rational size;
  friend bool operator==(const Fill&, const Fill&) = default;
};

struct BittenDiagram {
  TrapezoidParams trapezoid;
  std::array<std::string, 4> edge_tags;  ///< tags on Y, X', Z, X
  std::vector<ChopStep> chops;
  LatticePolygon polygon;  ///< P1, edges labeled by tag
  std::vector<SurgeryTriangle> triangles;
  std::map<std::string, Rational> synthetic;  ///< fillable tags and their shift sizes
  bool nested = false;
  std::vector<Fill> fills;
  std::map<std::string, HomologyClass> classes;
  std::vector<CutSide> cuts;  ///< one per triangle

  ExtraKind extra_kind() const {
    if (fills.empty()) return ExtraKind::None;
    return nested && fills.size() == 2 ? ExtraKind::DegenerateFullBite : ExtraKind::FullBite;
  }

  CutSide cut(std::size_t t) const { return t < cuts.size() ? cuts[t] : CutSide::Bite; }
};

inline bool operator==(const ChopStep& a, const ChopStep& b) {
  return a.left == b.left && a.right == b.right && a.size == b.size && a.label == b.label;
}

/// Toric reading of a Delzant polygon (s, length, label per edge).
inline SequenceCycle polygon_reading(const LatticePolygon& p) {
  SequenceCycle r;
  auto s = edge_self_intersections(p);
  for (std::size_t e = 0; e < p.size(); ++e) {
    r.s.push_back(s[e]);
    r.areas.push_back(p.edge_length(e));
    r.labels.push_back(p.label(e));
  }
  return r;
}

/// Unbitten diagram of a chop plan.
inline BittenDiagram make_diagram(const ChopPlan& plan) {
  BittenDiagram d;
  d.trapezoid = plan.params;
  d.edge_tags = plan.edge_tags;
  d.chops = plan.chops;
  d.polygon = plan.polygon;
  return d;
}

inline ValidationReport validate_diagram(const BittenDiagram& d) {
  ValidationReport r;
  LatticePolygon base;
  try {
    base = make_trapezoid(d.trapezoid, true);
  } catch (const Error& e) {
    r.fail(e.what());
    return r;
  }
  std::vector<std::string> tags(d.edge_tags.begin(), d.edge_tags.end());
  if (d.trapezoid.z == 0) tags.erase(tags.begin() + 2);
  LatticePolygon poly(base.vertices(), tags);
  for (const auto& c : d.chops) {
    std::optional<std::size_t> vtx;
    for (std::size_t v = 0; v < poly.size(); ++v) {
      const auto& a = poly.label(poly.prev(v));
      const auto& b = poly.label(v);
      if ((a == c.left && b == c.right) || (a == c.right && b == c.left)) vtx = v;
    }
    if (!vtx) {
      r.fail("chop " + c.label + ": no corner between " + c.left + " and " + c.right);
      return r;
    }
    try {
      poly = chop_corner(poly, *vtx, c.size, c.label);
    } catch (const Error& e) {
      r.fail("chop " + c.label + ": " + e.what());
      return r;
    }
  }
  if (!(poly == d.polygon)) r.fail("stored polygon differs from the replayed chops");
  if (!is_delzant(d.polygon).delzant) r.fail("polygon is not delzant");
  std::vector<EdgeTriangle> geo;
  for (const auto& t : d.triangles) {
    if (t.edge >= d.polygon.size()) {
      r.fail("triangle " + t.label + " on a missing edge");
      return r;
    }
    geo.push_back(t.geometry(d.polygon));
  }
  auto emb = verify_embedding(d.polygon, geo);
  for (const auto& i : emb.issues) r.fail(i);
  if (!d.cuts.empty() && d.cuts.size() != d.triangles.size()) r.fail("cut states do not match the triangles");
  for (const auto& [tag, size] : d.synthetic) {
    if (!d.polygon.find_edge(tag)) r.fail("synthetic tag " + tag + " has no edge");
    if (size <= 0) r.fail("synthetic shift of " + tag + " must be positive");
  }
  for (const auto& f : d.fills)
    if (!d.synthetic.count(f.edge)) r.fail("fill of non-synthetic edge " + f.edge);
  return r;
}

struct BoundaryReading {
  SequenceCycle sequences;
  std::vector<HomologyClass> classes;  ///< empty when the diagram carries no class labels
};

namespace detail {

inline SequenceCycle bitten_reading(const BittenDiagram& d) {
  SequenceCycle r = polygon_reading(d.polygon);
  for (const auto& t : d.triangles) {
    r.s[t.edge] -= 1;
    r.areas[t.edge] -= t.size;
  }
  return r;
}

inline std::size_t position_of(const SequenceCycle& c, const std::string& label) {
  auto it = std::find(c.labels.begin(), c.labels.end(), label);
  if (it == c.labels.end()) throw Error("diagram", "no component labeled " + label);
  return static_cast<std::size_t>(it - c.labels.begin());
}

}  // namespace detail

/// Boundary divisor: toric reading of P1, each bite lowers s by one and the area by its size,
/// then the recorded fills act as toric blowdowns.
inline BoundaryReading boundary_divisor(const BittenDiagram& d) {
  BoundaryReading out;
  out.sequences = detail::bitten_reading(d);
  const bool labeled = !d.classes.empty();
  if (labeled)
    for (const auto& l : out.sequences.labels) {
      auto it = d.classes.find(l);
      if (it == d.classes.end()) throw Error("boundary_divisor", "edge " + l + " has no class");
      out.classes.push_back(it->second);
    }
  for (const auto& f : d.fills) {
    const std::size_t pos = detail::position_of(out.sequences, f.edge);
    if (out.sequences.areas[pos] != f.size)
      throw Error("boundary_divisor", "filled component " + f.edge + " has area " + to_string(out.sequences.areas[pos]) +
                                          ", expected " + to_string(f.size));
    out.sequences = sequence_toric_blowdown(out.sequences, pos);
    if (labeled) {
      const HomologyClass e = out.classes[pos];
      out.classes.erase(out.classes.begin() + static_cast<std::ptrdiff_t>(pos));
      for (auto& c : out.classes) c += pairing(c, e) * e;
    }
  }
  return out;
}

/// Fills the corner of a synthetic component: the recorded toric blowdown of size equal to its shift.
inline BittenDiagram fill_corner(const BittenDiagram& d, const std::string& edge) {
  auto it = d.synthetic.find(edge);
  if (it == d.synthetic.end()) throw Error("fill_corner", "edge " + edge + " is not a synthetic distinguished component");
  for (const auto& f : d.fills)
    if (f.edge == edge) throw Error("fill_corner", "edge " + edge + " is already filled");
  auto cur = boundary_divisor(d).sequences;
  const std::size_t pos = detail::position_of(cur, edge);
  if (cur.s[pos] != -1 || cur.areas[pos] != it->second)
    throw Error("fill_corner", "component " + edge + " is not a (-1)-curve of area " + to_string(it->second) +
                                   " after its bites");
  BittenDiagram out = d;
  out.fills.push_back({edge, it->second});
  return out;
}

/// Node monodromy fixing the edge direction p: w -> w + det(p, w) p.
struct Shear {
  RationalPoint p;
  bool inverse = false;
  RationalPoint apply(const RationalPoint& w) const {
    const Rational t = det(p, w);
    return inverse ? w - t * p : w + t * p;
  }
  RationalPoint about(const RationalPoint& center, const RationalPoint& x) const { return center + apply(x - center); }
};

/// Polygon after moving one node cut from its bite onto its eigenline.
struct DevelopedView {
  std::vector<RationalPoint> points;   ///< boundary walk; segment j runs from points[j] to points[j+1]
  std::vector<std::string> labels;     ///< label of segment j
  std::size_t cut = 0;                 ///< first segment past the cut point
  std::size_t triangle = 0;
  RationalPoint node;
  RationalPoint cut_end;
  Shear monodromy;                     ///< transport from charts after the cut to before it
  std::vector<std::pair<std::size_t, std::array<RationalPoint, 3>>> others;  ///< remaining triangles, developed
};

namespace detail {

inline bool on_segment(const RationalPoint& a, const RationalPoint& b, const RationalPoint& x) {
  if (det(b - a, x - a) != 0) return false;
  return rmin(a.x, b.x) <= x.x && x.x <= rmax(a.x, b.x) && rmin(a.y, b.y) <= x.y && x.y <= rmax(a.y, b.y);
}

inline bool segments_meet(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c, const RationalPoint& d) {
  auto sgn = [](const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  const int d1 = sgn(det(b - a, c - a)), d2 = sgn(det(b - a, d - a));
  const int d3 = sgn(det(d - c, a - c)), d4 = sgn(det(d - c, b - c));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

inline bool triangle_meets_segment(const std::array<RationalPoint, 3>& t, const RationalPoint& a, const RationalPoint& b) {
  for (int i = 0; i < 3; ++i)
    if (segments_meet(t[i], t[(i + 1) % 3], a, b)) return true;
  auto inside = [&](const RationalPoint& x) {
    auto c = ccw(t);
    for (int i = 0; i < 3; ++i)
      if (det(c[(i + 1) % 3] - c[i], x - c[i]) < 0) return false;
    return true;
  };
  return inside(a) || inside(b);
}

/// First boundary point hit by the ray from an interior point.
inline std::pair<std::size_t, RationalPoint> ray_exit(const LatticePolygon& poly, const RationalPoint& from,
                                                      const RationalPoint& dir) {
  std::optional<Rational> best;
  std::size_t best_e = 0;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const auto u = poly.edge_vector(e);
    const Rational den = det(dir, u);
    if (den == 0) continue;
    const auto w = poly.vertex(e) - from;
    const Rational t = det(w, u) / den;
    const Rational s = det(w, dir) / den;
    if (t > 0 && s >= 0 && s <= 1 && (!best || t < *best)) {
      best = t;
      best_e = e;
    }
  }
  if (!best) throw Error("branch_move", "cut ray does not leave the polygon");
  return {best_e, from + *best * dir};
}

}  // namespace detail

/// Developed picture of a diagram with exactly one triangle moved off its bite.
inline DevelopedView developed_view(const BittenDiagram& d) {
  std::optional<std::size_t> moved;
  for (std::size_t t = 0; t < d.triangles.size(); ++t)
    if (d.cut(t) != CutSide::Bite) {
      // TODO: compose developed charts for several moved cuts.
      if (moved) throw Error("developed_view", "only one moved cut is supported");
      moved = t;
    }
  if (!moved) throw Error("developed_view", "no triangle has a moved cut");
  const auto& poly = d.polygon;
  const auto& tri = d.triangles[*moved];
  const bool right = d.cut(*moved) == CutSide::Right;
  const RationalPoint p = poly.edge_direction(tri.edge).as_point();
  const RationalPoint a = tri.apex, fm = tri.base_start(poly), fp = tri.base_end(poly);
  auto [hit_edge, b] = detail::ray_exit(poly, a, right ? p : RationalPoint{-p.x, -p.y});

  // Original boundary walk with base points and the cut point inserted.
  struct Pt {
    RationalPoint x;
    std::string label;  // outgoing segment
  };
  std::vector<Pt> walk;
  std::optional<std::size_t> idx_fm, idx_fp, idx_b;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    walk.push_back({poly.vertex(e), poly.label(e)});
    if (poly.vertex(e) == b) idx_b = walk.size() - 1;
    if (e == tri.edge) {
      walk.push_back({fm, poly.label(e)});
      idx_fm = walk.size() - 1;
      walk.push_back({fp, poly.label(e)});
      idx_fp = walk.size() - 1;
    }
    if (e == hit_edge && !idx_b && b != poly.vertex(e + 1)) {
      walk.push_back({b, poly.label(e)});
      idx_b = walk.size() - 1;
    }
  }
  if (!idx_b)
    for (std::size_t i = 0; i < walk.size(); ++i)
      if (walk[i].x == b) idx_b = i;
  for (std::size_t t = 0; t < d.triangles.size(); ++t) {
    if (t == *moved) continue;
    const auto g = d.triangles[t].geometry(poly);
    if (detail::triangle_meets_segment({g.base_start, g.base_end, g.apex}, a, b))
      throw Error("branch_move", "cut of triangle " + tri.label + " crosses triangle " + d.triangles[t].label);
  }

  DevelopedView v;
  v.triangle = *moved;
  v.node = a;
  v.cut_end = b;
  v.monodromy = {p, false};
  const Shear forward{p, !right};  // Right: N on the arc F+..B; Left: N^-1 on the arc B..F-
  const std::size_t n = walk.size();
  auto step = [n](std::size_t i) { return (i + 1) % n; };
  if (right) {
    v.points.push_back(fm);
    v.labels.push_back(walk[*idx_fp].label);
    for (std::size_t i = step(*idx_fp); i != *idx_b; i = step(i)) {
      v.points.push_back(forward.about(a, walk[i].x));
      v.labels.push_back(walk[i].label);
    }
    v.cut = v.points.size();
    for (std::size_t i = *idx_b; i != *idx_fm; i = step(i)) {
      v.points.push_back(walk[i].x);
      v.labels.push_back(walk[i].label);
    }
  } else {
    v.points.push_back(fp);
    v.labels.push_back(walk[*idx_fp].label);
    for (std::size_t i = step(*idx_fp); i != *idx_b; i = step(i)) {
      v.points.push_back(walk[i].x);
      v.labels.push_back(walk[i].label);
    }
    v.cut = v.points.size();
    for (std::size_t i = *idx_b; i != *idx_fm; i = step(i)) {
      v.points.push_back(forward.about(a, walk[i].x));
      v.labels.push_back(walk[i].label);
    }
  }
  // The seam point splits the bitten edge into two collinear pieces.
  v.points.erase(v.points.begin());
  v.labels.erase(v.labels.begin());
  v.cut -= 1;
  // Remaining triangles, sheared when they sit in the moved sector.
  for (std::size_t t = 0; t < d.triangles.size(); ++t) {
    if (t == *moved) continue;
    const auto g = d.triangles[t].geometry(poly);
    std::array<RationalPoint, 3> pts{g.base_start, g.base_end, g.apex};
    const RationalPoint c = make_rational(1, 3) * (pts[0] + pts[1] + pts[2]);
    const bool in_sector = right ? det(fp - a, c - a) >= 0 && det(c - a, p) >= 0
                                 : det(RationalPoint{-p.x, -p.y}, c - a) >= 0 && det(c - a, fm - a) >= 0;
    if (in_sector)
      for (auto& x : pts) x = forward.about(a, x);
    v.others.emplace_back(t, pts);
  }
  // The developed boundary must stay simple.
  const std::size_t m = v.points.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (detail::segments_meet(v.points[i], v.points[(i + 1) % m], v.points[j], v.points[(j + 1) % m]))
        throw Error("branch_move", "moving the cut of triangle " + tri.label + " folds the boundary");
    }
  return v;
}

/// Reading of a developed view, transporting directions across the cut by the node monodromy.
inline SequenceCycle developed_reading(const BittenDiagram& d, const DevelopedView& v) {
  const std::size_t m = v.points.size();
  std::vector<RationalPoint> dir(m);
  std::vector<Rational> len(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto [pv, l] = primitive_of(v.points[(j + 1) % m] - v.points[j]);
    dir[j] = pv.as_point();
    len[j] = l;
  }
  // Group consecutive segments into components, starting at a label change.
  std::size_t start = 0;
  while (v.labels[start] == v.labels[(start + m - 1) % m]) {
    start = (start + 1) % m;
    if (start == 0) throw Error("developed_view", "boundary has a single component");
  }
  struct Comp {
    std::string label;
    std::size_t first, last;
    Rational length;
  };
  std::vector<Comp> comps;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t j = (start + k) % m;
    if (comps.empty() || comps.back().label != v.labels[j]) comps.push_back({v.labels[j], j, j, 0});
    comps.back().last = j;
    comps.back().length += len[j];
  }
  auto crosses = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = (from + 1) % m;; i = (i + 1) % m) {
      if (i == v.cut) return true;
      if (i == to) return false;
    }
  };
  SequenceCycle r;
  const std::size_t c = comps.size();
  for (std::size_t k = 0; k < c; ++k) {
    const auto& prev = comps[(k + c - 1) % c];
    const auto& next = comps[(k + 1) % c];
    RationalPoint w = dir[next.first];
    if (crosses(prev.last, next.first)) w = v.monodromy.apply(w);
    const Rational sv = -det(dir[prev.last], w);
    if (sv.get_den() != 1) throw Error("developed_view", "non-integral self-intersection");
    r.s.push_back(detail::to_ll(sv.get_num()));
    r.areas.push_back(comps[k].length);
    r.labels.push_back(comps[k].label);
  }
  for (const auto& [t, pts] : v.others) {
    (void)pts;
    const std::size_t pos = detail::position_of(r, d.polygon.label(d.triangles[t].edge));
    r.s[pos] -= 1;
    r.areas[pos] -= d.triangles[t].size;
  }
  return r;
}

/// Rotates the cut of a triangle's node one step to the given side of its eigenline.
inline BittenDiagram branch_move(const BittenDiagram& d, std::size_t triangle, CutSide side) {
  if (triangle >= d.triangles.size()) throw Error("branch_move", "triangle index out of range");
  if (side == CutSide::Bite) throw Error("branch_move", "side must be left or right");
  BittenDiagram out = d;
  out.cuts.resize(d.triangles.size(), CutSide::Bite);
  const int next = static_cast<int>(out.cuts[triangle]) + static_cast<int>(side);
  if (next < -1 || next > 1) throw Error("branch_move", "cut is already on that side");
  out.cuts[triangle] = static_cast<CutSide>(next);
  if (out.cuts[triangle] != CutSide::Bite) {
    auto v = developed_view(out);
    auto before = detail::bitten_reading(d);
    if (!align_cycles(before, developed_reading(out, v), true))
      throw Error("branch_move", "developed boundary does not match the bitten reading");
  }
  return out;
}

/// Same trapezoid and chopped polygon up to AGL(2,Z), and the same bite sizes per edge.
inline bool rearrangement_equal(const BittenDiagram& a, const BittenDiagram& b) {
  if (!(trapezoid_canonical(a.trapezoid) == trapezoid_canonical(b.trapezoid))) return false;
  auto ra = polygon_reading(a.polygon), rb = polygon_reading(b.polygon);
  const std::size_t n = ra.length();
  if (n != rb.length()) return false;
  auto bites = [](const BittenDiagram& d) {
    std::vector<std::vector<Rational>> out(d.polygon.size());
    for (const auto& t : d.triangles) out[t.edge].push_back(t.size);
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
  };
  const auto ba = bites(a), bb = bites(b);
  for (int refl = 0; refl < 2; ++refl)
    for (std::size_t off = 0; off < n; ++off) {
      CycleAlignment al{off, refl == 1};
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const std::size_t j = al.map(i, n);
        ok = ra.s[j] == rb.s[i] && ra.areas[j] == rb.areas[i] && ba[j] == bb[i];
      }
      if (ok) return true;
    }
  return false;
}

/// Multiplies every length of the diagram by c > 0.
inline BittenDiagram scale_diagram(const BittenDiagram& d, const Rational& c) {
  if (c <= 0) throw Error("diagram", "scale must be positive");
  BittenDiagram out = d;
  out.trapezoid = {d.trapezoid.k, c * d.trapezoid.x, c * d.trapezoid.y, c * d.trapezoid.z};
  for (auto& s : out.chops) s.size *= c;
  std::vector<RationalPoint> verts;
  for (const auto& v : d.polygon.vertices()) verts.push_back(c * v);
  out.polygon = LatticePolygon(std::move(verts), d.polygon.labels());
  for (auto& t : out.triangles) {
    t.start *= c;
    t.size *= c;
    t.apex = c * t.apex;
  }
  for (auto& [tag, s] : out.synthetic) s *= c;
  for (auto& f : out.fills) f.size *= c;
  return out;
}

}  // namespace atf
