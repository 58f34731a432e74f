#pragma once

// Triangle packing on a chopped trapezoid: theta bounds, the sufficiency test,
// exact solution point, and perturbed placement of disjoint surgery triangles.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "atf/exact_geometry.hpp"

namespace atf {

/// Trapezoid data behind a packing problem. Arrays are ordered Y, X', Z, X.
struct PackingProvenance {
  TrapezoidParams trapezoid;
  std::array<std::size_t, 4> edges{};
  std::array<Rational, 4> largest_chop;
};

struct PackingProblem {
  LatticePolygon polygon;
  std::vector<Rational> weights;
  std::optional<PackingProvenance> provenance;

  ValidationReport validate() const {
    ValidationReport r;
    if (weights.size() != polygon.size()) {
      r.fail("expected " + std::to_string(polygon.size()) + " weights, got " + std::to_string(weights.size()));
      return r;
    }
    for (std::size_t e = 0; e < weights.size(); ++e) {
      if (weights[e] <= 0) r.fail("weight on edge " + polygon.label(e) + " must be positive");
      if (!(weights[e] < polygon.edge_length(e)))
        r.fail("weight " + to_string(weights[e]) + " on edge " + polygon.label(e) + " not below its affine length " +
               to_string(polygon.edge_length(e)));
    }
    return r;
  }
};

struct ThetaBounds {
  Rational theta1;
  Rational theta2;
};

inline ThetaBounds theta_bounds(const PackingProblem& p) {
  if (!p.provenance) throw Error("packing", "theta bounds need trapezoid provenance");
  const auto& pv = *p.provenance;
  auto m = [&](int slot) { return rmax(p.weights.at(pv.edges[slot]), pv.largest_chop[slot]); };
  const Rational my = m(0), mxp = m(1), mz = m(2), mx = m(3);
  return {my + mz, mx + mxp + Rational(pv.trapezoid.k) * my};
}

/// Sufficient condition for solvability: theta1 <= x and theta2 <= y.
inline bool check_lemma(const PackingProblem& p) {
  auto t = theta_bounds(p);
  return t.theta1 <= p.provenance->trapezoid.x && t.theta2 <= p.provenance->trapezoid.y;
}

/// Exact region of points O with affine distance at least a_i to every edge.
inline FeasibleRegion packing_region(const PackingProblem& p) {
  auto rep = p.validate();
  if (!rep.ok) throw Error("packing", rep.issues.front());
  std::vector<HalfPlane> hs;
  for (std::size_t e = 0; e < p.polygon.size(); ++e)
    hs.push_back({p.polygon.vertex(e), p.polygon.edge_direction(e), p.weights[e]});
  return halfplane_feasible(hs);
}

/// Lexicographically smallest vertex of the feasible region, if any.
inline std::optional<RationalPoint> solve_packing(const PackingProblem& p) {
  auto r = packing_region(p);
  if (r.empty) return std::nullopt;
  return r.witness;
}

struct SurgeryTriangle {
  std::size_t edge = 0;
  Rational start;  ///< offset of the base along the edge, in primitive units from the edge's first vertex
  Rational size;
  RationalPoint apex;
  std::string label;

  RationalPoint base_start(const LatticePolygon& p) const {
    return p.vertex(edge) + start * p.edge_direction(edge).as_point();
  }
  RationalPoint base_end(const LatticePolygon& p) const {
    return p.vertex(edge) + (start + size) * p.edge_direction(edge).as_point();
  }
  EdgeTriangle geometry(const LatticePolygon& p) const { return {edge, base_start(p), base_end(p), apex}; }
};

struct PlacementOptions {
  std::optional<Rational> epsilon;  ///< initial shift; defaults to a quarter of the smallest edge slack
  int max_halvings = 60;
};

/// Places bites[e][j] on edge e as disjoint surgery triangles around the solution point O.
/// Bases form a centered block with equal gaps. Triangle j on edge i points at
/// O + (eps_i + j mu) p_i with eps_i = (a_1 / a_i) eps; a bite smaller than d(O, Q_i)
/// stops short along that ray. eps and mu shrink until the embedding verifies.
inline std::vector<SurgeryTriangle> place_triangles(const LatticePolygon& poly, const RationalPoint& o,
                                                    const std::vector<Rational>& weights,
                                                    const std::vector<std::vector<Rational>>& bites,
                                                    const PlacementOptions& opt = {}) {
  if (bites.size() != poly.size()) throw Error("placement", "need one bite list per edge");
  if (weights.size() != poly.size()) throw Error("placement", "need one weight per edge");
  if (!poly.contains(o, true)) throw Error("placement", "solution point " + to_string(o) + " is not interior");
  std::vector<Rational> dist(poly.size()), gap(poly.size());
  Rational eps;
  bool have_eps = false;
  std::optional<Rational> ref;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    dist[e] = poly.signed_distance(o, e);
    if (dist[e] < weights[e]) throw Error("placement", "point does not solve the packing at edge " + poly.label(e));
    if (bites[e].empty()) continue;
    if (!ref) ref = weights[e];
    Rational total = 0;
    for (const auto& b : bites[e]) {
      if (b <= 0) throw Error("placement", "bite sizes must be positive");
      if (b > weights[e])
        throw Error("placement", "bite " + to_string(b) + " on edge " + poly.label(e) + " exceeds its weight " +
                                     to_string(weights[e]));
      total += b;
    }
    const Rational slack = poly.edge_length(e) - total;
    if (slack <= 0) throw Error("placement", "bites on edge " + poly.label(e) + " do not fit its affine length");
    gap[e] = slack / Rational(static_cast<long>(bites[e].size()) + 1);
    eps = have_eps ? rmin(eps, slack / 4) : slack / 4;
    have_eps = true;
  }
  std::vector<SurgeryTriangle> out;
  if (!have_eps) return out;
  if (opt.epsilon) {
    if (*opt.epsilon <= 0) throw Error("placement", "epsilon must be positive");
    eps = *opt.epsilon;
  }
  Rational mu = eps / 4;
  for (int attempt = 0; attempt <= opt.max_halvings; ++attempt) {
    out.clear();
    for (std::size_t e = 0; e < poly.size(); ++e) {
      const auto p = poly.edge_direction(e).as_point();
      const Rational eps_e = bites[e].empty() ? Rational(0) : (*ref / weights[e]) * eps;
      Rational pos = gap[e];
      for (std::size_t j = 0; j < bites[e].size(); ++j) {
        const Rational& b = bites[e][j];
        const RationalPoint mid = poly.vertex(e) + (pos + b / 2) * p;
        const RationalPoint shifted = o + (eps_e + Rational(static_cast<long>(j)) * mu) * p;
        out.push_back({e, pos, b, mid + (b / dist[e]) * (shifted - mid), {}});
        pos += b + gap[e];
      }
    }
    std::vector<EdgeTriangle> geo;
    for (const auto& t : out) geo.push_back(t.geometry(poly));
    if (verify_embedding(poly, geo).ok) return out;
    // mu shrinks faster so same-edge offsets vanish relative to the eps_i ratios.
    eps /= 2;
    mu /= 8;
  }
  throw Error("placement", "no disjoint placement found after perturbation refinement");
}

}  // namespace atf
