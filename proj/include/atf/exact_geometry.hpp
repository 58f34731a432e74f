#pragma once

// Exact planar lattice geometry: primitive vectors, affine length and
// distance, Delzant polygons, corner chopping, AGL(2,Z) action, exact
// half-plane intersection and embedding predicates.

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "atf/rational.hpp"

namespace atf {

struct RationalPoint {
  Rational x;
  Rational y;

  RationalPoint() = default;
  RationalPoint(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {}

  friend RationalPoint operator+(const RationalPoint& a, const RationalPoint& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend RationalPoint operator-(const RationalPoint& a, const RationalPoint& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend RationalPoint operator*(const Rational& s, const RationalPoint& p) {
    return {s * p.x, s * p.y};
  }
  friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const RationalPoint& a, const RationalPoint& b) { return !(a == b); }
  /// Lexicographic (x, then y).
  friend bool operator<(const RationalPoint& a, const RationalPoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
};

inline std::string to_string(const RationalPoint& p) {
  return "(" + to_string(p.x) + "," + to_string(p.y) + ")";
}

inline Rational det(const RationalPoint& a, const RationalPoint& b) { return a.x * b.y - a.y * b.x; }

/// Integer vector with coprime entries, never zero.
struct PrimitiveVector {
  long a = 1;
  long b = 0;

  RationalPoint as_point() const { return {Rational(a), Rational(b)}; }
  friend bool operator==(const PrimitiveVector&, const PrimitiveVector&) = default;
};

inline long det(const PrimitiveVector& u, const PrimitiveVector& v) { return u.a * v.b - u.b * v.a; }

namespace detail {
inline long to_ll(const mpz_class& z) {
  if (!z.fits_slong_p()) throw Error("geometry", "integer overflow in lattice vector");
  return z.get_si();
}
}  // namespace detail

/// Decomposes a nonzero rational vector as multiplier * primitive with a positive multiplier.
inline std::pair<PrimitiveVector, Rational> primitive_of(const RationalPoint& v) {
  if (v.x == 0 && v.y == 0) throw Error("geometry", "primitive_of: zero vector");
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), v.x.get_den_mpz_t(), v.y.get_den_mpz_t());
  mpz_class ix = v.x.get_num() * (l / v.x.get_den());
  mpz_class iy = v.y.get_num() * (l / v.y.get_den());
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), ix.get_mpz_t(), iy.get_mpz_t());
  PrimitiveVector p{detail::to_ll(ix / g), detail::to_ll(iy / g)};
  Rational mult(g, l);
  mult.canonicalize();
  return {p, mult};
}

inline std::pair<PrimitiveVector, Rational> primitive_of(long a, long b) {
  return primitive_of(RationalPoint{Rational(a), Rational(b)});
}

inline Rational affine_length(const RationalPoint& a, const RationalPoint& b) {
  if (a == b) throw Error("geometry", "affine_length: degenerate segment");
  return primitive_of(b - a).second;
}

/// Lattice-normalized distance from `o` to the line through `a`, `b`.
inline Rational affine_distance(const RationalPoint& o, const RationalPoint& a, const RationalPoint& b) {
  if (a == b) throw Error("geometry", "affine_distance: degenerate segment");
  auto p = primitive_of(b - a).first;
  return rabs(det(p.as_point(), a - o));
}

inline Rational signed_area(const std::vector<RationalPoint>& pts) {
  Rational s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += det(pts[i], pts[(i + 1) % pts.size()]);
  return s / 2;
}

/// Strictly convex counterclockwise polygon with rational vertices and optional edge labels.
/// Edge i runs from vertex i to vertex i+1; vertex i sits between edges i-1 and i.
class LatticePolygon {
 public:
  LatticePolygon() = default;
  LatticePolygon(std::vector<RationalPoint> vertices, std::vector<std::string> labels = {})
      : vertices_(std::move(vertices)), labels_(std::move(labels)) {
    if (vertices_.size() < 3) throw Error("geometry", "polygon needs at least 3 vertices");
    if (!labels_.empty() && labels_.size() != vertices_.size())
      throw Error("geometry", "label count must equal edge count");
    for (std::size_t i = 0; i < size(); ++i) {
      auto turn = det(edge_vector(prev(i)), edge_vector(i));
      if (vertices_[i] == vertices_[next(i)]) throw Error("geometry", "repeated vertex");
      if (turn <= 0)
        throw Error("geometry", "polygon not strictly convex counterclockwise at vertex " + std::to_string(i));
    }
    // A locally convex CCW polygon with total turning 2*pi is simple; check winding via area.
    if (signed_area(vertices_) <= 0) throw Error("geometry", "polygon not counterclockwise");
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < size(); ++i)
      if (vertices_[i] < vertices_[lowest]) lowest = i;
    // Exactly one lexicographic minimum per revolution of a convex chain.
    std::size_t descents = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (vertices_[next(i)] < vertices_[i] && !(vertices_[next(next(i))] < vertices_[next(i)])) ++descents;
    if (descents != 1) throw Error("geometry", "polygon winds more than once");
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<RationalPoint>& vertices() const noexcept { return vertices_; }
  const RationalPoint& vertex(std::size_t i) const { return vertices_[i % size()]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(std::size_t edge) const { return labels_.empty() ? std::to_string(edge) : labels_[edge]; }
  std::size_t next(std::size_t i) const noexcept { return (i + 1) % size(); }
  std::size_t prev(std::size_t i) const noexcept { return (i + size() - 1) % size(); }

  RationalPoint edge_vector(std::size_t e) const { return vertex(e + 1) - vertex(e); }
  /// Counterclockwise primitive direction of edge e.
  PrimitiveVector edge_direction(std::size_t e) const { return primitive_of(edge_vector(e)).first; }
  Rational edge_length(std::size_t e) const { return primitive_of(edge_vector(e)).second; }
  /// Inward primitive normal (left of the counterclockwise direction).
  PrimitiveVector inward_normal(std::size_t e) const {
    auto p = edge_direction(e);
    return {-p.b, p.a};
  }
  /// Affine distance of `o` to edge e, signed positive towards the interior.
  Rational signed_distance(const RationalPoint& o, std::size_t e) const {
    return det(edge_direction(e).as_point(), o - vertex(e));
  }

  Rational area() const { return signed_area(vertices_); }

  std::optional<std::size_t> find_edge(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  bool contains(const RationalPoint& p, bool strict = false) const {
    for (std::size_t e = 0; e < size(); ++e) {
      auto d = signed_distance(p, e);
      if (d < 0 || (strict && d == 0)) return false;
    }
    return true;
  }

  friend bool operator==(const LatticePolygon&, const LatticePolygon&) = default;

 private:
  std::vector<RationalPoint> vertices_;
  std::vector<std::string> labels_;
};

/// Delzant check: at each vertex the two emanating primitive edge directions form a Z^2 basis.
struct DelzantReport {
  bool delzant = true;
  std::vector<std::size_t> violating_vertices;
};

inline DelzantReport is_delzant(const LatticePolygon& p) {
  DelzantReport r;
  for (std::size_t v = 0; v < p.size(); ++v) {
    auto u = primitive_of(p.vertex(p.prev(v)) - p.vertex(v)).first;
    auto w = primitive_of(p.vertex(p.next(v)) - p.vertex(v)).first;
    long d = det(u, w);
    if (d != 1 && d != -1) {
      r.delzant = false;
      r.violating_vertices.push_back(v);
    }
  }
  return r;
}

/// Replaces vertex `v` by a new edge of affine length `size`; the new edge takes index `v`.
inline LatticePolygon chop_corner(const LatticePolygon& p, std::size_t v, const Rational& size,
                                  const std::string& new_label = {}) {
  if (v >= p.size()) throw Error("chop", "vertex index out of range");
  if (size <= 0) throw Error("chop", "chop size must be positive");
  const auto& corner = p.vertex(v);
  auto [u, lu] = primitive_of(p.vertex(p.prev(v)) - corner);
  auto [w, lw] = primitive_of(p.vertex(p.next(v)) - corner);
  long d = det(u, w);
  if (d != 1 && d != -1) throw Error("chop", "vertex " + std::to_string(v) + " is not delzant");
  if (!(size < lu) || !(size < lw))
    throw Error("chop", "chop size " + to_string(size) + " not below both adjacent edge lengths at vertex " +
                            std::to_string(v));
  std::vector<RationalPoint> verts;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == v) {
      verts.push_back(corner + size * u.as_point());
      verts.push_back(corner + size * w.as_point());
    } else {
      verts.push_back(p.vertex(i));
    }
  }
  if (!p.labels().empty()) {
    labels = p.labels();
    labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(v), new_label.empty() ? "chop" : new_label);
  } else if (!new_label.empty()) {
    for (std::size_t i = 0; i < p.size(); ++i) labels.push_back(std::to_string(i));
    labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(v), new_label);
  }
  return LatticePolygon(std::move(verts), std::move(labels));
}

/// Hirzebruch moduli: affine edge lengths x, y, x, z with y - z = k x.
struct TrapezoidParams {
  long k = 0;
  Rational x, y, z;
  friend bool operator==(const TrapezoidParams&, const TrapezoidParams&) = default;
};

inline std::string to_string(const TrapezoidParams& t) {
  return "(" + std::to_string(t.k) + "," + to_string(t.x) + "," + to_string(t.y) + "," + to_string(t.z) + ")";
}

/// Edge labels of the canonical trapezoid embedding, in counterclockwise edge order.
inline constexpr std::array<const char*, 4> kTrapezoidEdges{"Y", "X'", "Z", "X"};

/// Canonical embedding (0,0),(y,0),(y-kx,x),(0,x). z = 0 only with `allow_degenerate`.
inline LatticePolygon make_trapezoid(const TrapezoidParams& t, bool allow_degenerate = false) {
  if (t.k < 0) throw Error("trapezoid", "k must be non-negative");
  if (t.x <= 0 || t.y <= 0) throw Error("trapezoid", "x and y must be positive");
  if (t.z < 0 || (t.z == 0 && !allow_degenerate)) throw Error("trapezoid", "z must be positive");
  if (t.y - t.z != Rational(t.k) * t.x)
    throw Error("trapezoid", "moduli constraint y - z = k x violated for " + to_string(t));
  std::vector<std::string> labels(kTrapezoidEdges.begin(), kTrapezoidEdges.end());
  if (t.z == 0) {
    // Triangle: top edge collapses; keep Y, X', X.
    return LatticePolygon({{0, 0}, {t.y, 0}, {0, t.x}}, {"Y", "X'", "X"});
  }
  return LatticePolygon({{0, 0}, {t.y, 0}, {t.y - Rational(t.k) * t.x, t.x}, {0, t.x}}, std::move(labels));
}

/// Representative with k >= 0, y >= z and, for k = 0, x <= y.
inline TrapezoidParams trapezoid_canonical(TrapezoidParams t) {
  if (t.k < 0 || (t.k == 0 && t.y < t.z)) t = {-t.k, t.x, t.z, t.y};
  if (t.k == 0 && t.y < t.x) t = {0, t.y, t.x, t.x};
  return t;
}

using IntMatrix2 = std::array<std::array<long, 2>, 2>;

/// V -> M V + t for unimodular M; vertex order is re-reversed when det M = -1.
inline LatticePolygon apply_agl(const LatticePolygon& p, const IntMatrix2& m, const RationalPoint& t) {
  long d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (d != 1 && d != -1) throw Error("agl", "matrix is not unimodular");
  std::vector<RationalPoint> out;
  out.reserve(p.size());
  for (const auto& v : p.vertices())
    out.push_back({Rational(m[0][0]) * v.x + Rational(m[0][1]) * v.y + t.x,
                   Rational(m[1][0]) * v.x + Rational(m[1][1]) * v.y + t.y});
  std::vector<std::string> labels = p.labels();
  if (d == -1) {
    // Reversed order: new edge i joins old vertices n-i and n-1-i, i.e. old edge n-1-i.
    std::reverse(out.begin(), out.end());
    std::rotate(out.begin(), out.end() - 1, out.end());
    if (!labels.empty()) {
      std::vector<std::string> l2(labels.size());
      const std::size_t n = labels.size();
      for (std::size_t i = 0; i < n; ++i) l2[i] = labels[n - 1 - i];
      labels = std::move(l2);
    }
  }
  return LatticePolygon(std::move(out), std::move(labels));
}

/// Self-intersection a_i of the toric divisor over edge i: nu_{i-1} + nu_{i+1} = -a_i nu_i.
inline std::vector<long> edge_self_intersections(const LatticePolygon& p) {
  if (!is_delzant(p).delzant) throw Error("geometry", "edge_self_intersections needs a delzant polygon");
  std::vector<long> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto a = p.inward_normal(p.prev(i));
    auto b = p.inward_normal(p.next(i));
    auto n = p.inward_normal(i);
    long sx = a.a + b.a, sy = a.b + b.b;
    long ai = n.a != 0 ? -sx / n.a : -sy / n.b;
    if (sx + ai * n.a != 0 || sy + ai * n.b != 0) throw Error("geometry", "fan relation failed");
    out[i] = ai;
  }
  return out;
}

/// The closed half-plane {O : det(direction, O - anchor) >= offset}.
struct HalfPlane {
  RationalPoint anchor;
  PrimitiveVector direction;
  Rational offset;

  Rational value(const RationalPoint& o) const { return det(direction.as_point(), o - anchor) - offset; }
};

struct FeasibleRegion {
  bool empty = true;
  bool unbounded = false;
  /// Counterclockwise vertices; a single point or a segment when degenerate.
  std::vector<RationalPoint> vertices;
  RationalPoint witness;
};

namespace detail {

inline std::optional<RationalPoint> line_intersection(const HalfPlane& a, const HalfPlane& b) {
  // det(d, P) = det(d, anchor) + offset
  const Rational a1 = -Rational(a.direction.b), b1 = Rational(a.direction.a);
  const Rational a2 = -Rational(b.direction.b), b2 = Rational(b.direction.a);
  const Rational c1 = det(a.direction.as_point(), a.anchor) + a.offset;
  const Rational c2 = det(b.direction.as_point(), b.anchor) + b.offset;
  const Rational dd = a1 * b2 - a2 * b1;
  if (dd == 0) return std::nullopt;
  return RationalPoint{(c1 * b2 - c2 * b1) / dd, (a1 * c2 - a2 * c1) / dd};
}

inline void dedupe_cyclic(std::vector<RationalPoint>& pts) {
  std::vector<RationalPoint> out;
  for (auto& p : pts)
    if (out.empty() || out.back() != p) out.push_back(p);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  pts = std::move(out);
}

inline std::vector<RationalPoint> clip(const std::vector<RationalPoint>& poly, const HalfPlane& h) {
  std::vector<RationalPoint> out;
  const std::size_t n = poly.size();
  if (n == 1) {
    if (h.value(poly[0]) >= 0) out.push_back(poly[0]);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cur = poly[i];
    const auto& nxt = poly[(i + 1) % n];
    Rational fc = h.value(cur), fn = h.value(nxt);
    if (fc >= 0) out.push_back(cur);
    if ((fc > 0 && fn < 0) || (fc < 0 && fn > 0)) {
      Rational t = fc / (fc - fn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  dedupe_cyclic(out);
  // Collapse a collinear remainder to its extreme points.
  if (out.size() >= 3 && signed_area(out) == 0) {
    auto [lo, hi] = std::minmax_element(out.begin(), out.end());
    out = *lo == *hi ? std::vector<RationalPoint>{*lo} : std::vector<RationalPoint>{*lo, *hi};
  }
  return out;
}

}  // namespace detail

/// Exact intersection of closed half-planes. The witness is the lexicographically
/// smallest (x, then y) vertex of the region.
inline FeasibleRegion halfplane_feasible(const std::vector<HalfPlane>& constraints) {
  FeasibleRegion r;
  Rational bound = 1;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    bound = rmax(bound, rabs(constraints[i].anchor.x) + rabs(constraints[i].offset));
    bound = rmax(bound, rabs(constraints[i].anchor.y) + rabs(constraints[i].offset));
    for (std::size_t j = i + 1; j < constraints.size(); ++j)
      if (auto p = detail::line_intersection(constraints[i], constraints[j])) {
        bound = rmax(bound, rabs(p->x));
        bound = rmax(bound, rabs(p->y));
      }
  }
  const Rational box = 2 * bound + 1;
  std::vector<RationalPoint> poly{{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  for (const auto& h : constraints) {
    poly = detail::clip(poly, h);
    if (poly.empty()) return r;
  }
  r.empty = false;
  std::vector<RationalPoint> verts;
  for (const auto& p : poly) {
    bool on_box = rabs(p.x) == box || rabs(p.y) == box;
    if (on_box)
      r.unbounded = true;
    else
      verts.push_back(p);
  }
  r.vertices = r.unbounded ? verts : poly;
  if (!r.vertices.empty())
    r.witness = *std::min_element(r.vertices.begin(), r.vertices.end());
  else
    r.witness = *std::min_element(poly.begin(), poly.end(), [](const auto& a, const auto& b) {
      return rabs(a.x) + rabs(a.y) < rabs(b.x) + rabs(b.y);
    });
  return r;
}

/// Triangle with its base on polygon edge `edge`, used by the embedding check.
struct EdgeTriangle {
  std::size_t edge = 0;
  RationalPoint base_start;
  RationalPoint base_end;
  RationalPoint apex;
};

struct EmbeddingReport {
  bool ok = true;
  std::vector<std::string> issues;
  std::optional<std::pair<std::size_t, std::size_t>> overlapping_pair;

  void fail(std::string s) {
    ok = false;
    issues.push_back(std::move(s));
  }
};

namespace detail {

/// Interiors of two counterclockwise triangles are disjoint iff some edge line separates them.
inline bool interiors_disjoint(const std::array<RationalPoint, 3>& a, const std::array<RationalPoint, 3>& b) {
  auto separates = [](const std::array<RationalPoint, 3>& s, const std::array<RationalPoint, 3>& t) {
    for (int i = 0; i < 3; ++i) {
      const auto& p = s[i];
      const auto& q = s[(i + 1) % 3];
      bool all_out = true;
      for (const auto& v : t)
        if (det(q - p, v - p) > 0) {
          all_out = false;
          break;
        }
      if (all_out) return true;
    }
    return false;
  };
  return separates(a, b) || separates(b, a);
}

inline std::array<RationalPoint, 3> ccw(std::array<RationalPoint, 3> t) {
  if (det(t[1] - t[0], t[2] - t[0]) < 0) std::swap(t[1], t[2]);
  return t;
}

}  // namespace detail

inline EmbeddingReport verify_embedding(const LatticePolygon& p, const std::vector<EdgeTriangle>& tris) {
  EmbeddingReport r;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const auto& t = tris[i];
    const std::string tag = "triangle " + std::to_string(i);
    if (t.edge >= p.size()) {
      r.fail(tag + ": edge out of range");
      continue;
    }
    const auto& a = p.vertex(t.edge);
    const auto dir = p.edge_vector(t.edge);
    const Rational len2 = dir.x * dir.x + dir.y * dir.y;
    for (const auto* q : {&t.base_start, &t.base_end}) {
      if (det(dir, *q - a) != 0) {
        r.fail(tag + ": base point off its edge line");
        continue;
      }
      const auto rel = *q - a;
      Rational s = (rel.x * dir.x + rel.y * dir.y) / len2;
      if (!(s > 0 && s < 1)) r.fail(tag + ": base point not strictly inside its edge");
    }
    if (t.base_start == t.base_end) r.fail(tag + ": degenerate base");
    if (!p.contains(t.apex, true)) r.fail(tag + ": apex not in the polygon interior");
  }
  for (std::size_t i = 0; i < tris.size(); ++i)
    for (std::size_t j = i + 1; j < tris.size(); ++j) {
      auto ti = detail::ccw({tris[i].base_start, tris[i].base_end, tris[i].apex});
      auto tj = detail::ccw({tris[j].base_start, tris[j].base_end, tris[j].apex});
      if (tris[i].apex == tris[j].apex || !detail::interiors_disjoint(ti, tj)) {
        r.fail("triangles " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        if (!r.overlapping_pair) r.overlapping_pair = std::make_pair(i, j);
      }
    }
  return r;
}

}  // namespace atf
