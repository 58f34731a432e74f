#pragma once

// From a framed log Calabi-Yau cycle to a bitten Delzant polygon whose boundary
// reads back the cycle, and ATF diagrams for rational surfaces.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "atf/diagram.hpp"

namespace atf {

struct BranchMoveRecord {
  std::size_t triangle = 0;
  CutSide side = CutSide::Bite;
};

struct RoundTrip {
  bool ok = false;
  std::string message;
};

struct RealizationReport {
  ReducedCase kase;
  EpsilonReport epsilon;
  TrapezoidParams raw_params;
  TrapezoidParams params;
  std::vector<ChopStep> chops;
  PackingProblem problem;
  ThetaBounds theta;
  bool lemma_holds = true;
  RationalPoint point;
  std::vector<SurgeryTriangle> triangles;  ///< normalized (c = 1)
  std::vector<Fill> fills;
  std::optional<BranchMoveRecord> branch_move;
  Rational scale;
  RoundTrip roundtrip;
};

struct Realization {
  BittenDiagram diagram;
  RealizationReport report;
};

struct RealizeOptions {
  std::optional<Rational> epsilon;  ///< in normalized units
  // Off: a failed theta check falls through to the exact solver instead of throwing.
  bool require_lemma = true;
};

namespace detail {

inline DivisorCycle normalized(const DivisorCycle& d) {
  DivisorCycle out = d;
  out.areas.c = 1;
  for (auto& x : out.areas.deltas) x /= d.areas.c;
  return out;
}

/// Per-edge weights: the largest bite on the edge, else a small default below every delta and epsilon.
inline std::vector<Rational> packing_weights(const LatticePolygon& poly, const std::vector<std::vector<Rational>>& bites,
                                             const AreaVector& areas, const Rational& epsilon) {
  Rational small = epsilon;
  for (const auto& x : areas.deltas) small = rmin(small, x);
  small /= 10;
  std::vector<Rational> w(poly.size(), small);
  for (std::size_t e = 0; e < poly.size(); ++e)
    for (const auto& b : bites[e]) w[e] = rmax(w[e], b);
  return w;
}

}  // namespace detail

/// Checks that the diagram reads back the cycle: sequences up to dihedral symmetry, and
/// component classes once the synthetic indices are dropped.
inline RoundTrip verify_roundtrip(const DivisorCycle& d, const BittenDiagram& g) {
  RoundTrip rt;
  BoundaryReading b;
  try {
    b = boundary_divisor(g);
  } catch (const Error& e) {
    rt.message = e.what();
    return rt;
  }
  const SequenceCycle want = s_area_sequences(d, false);
  const std::size_t n = want.length();
  if (b.sequences.length() != n) {
    rt.message = "diagram reads " + std::to_string(b.sequences.length()) + " components, cycle has " + std::to_string(n);
    return rt;
  }
  std::vector<HomologyClass> classes;
  for (auto c : b.classes) {
    while (c.rank() > d.rank()) {
      if (c.e(c.rank()) != 0) {
        rt.message = "class " + to_string(c) + " keeps a synthetic exceptional index";
        return rt;
      }
      c = c.truncated();
    }
    classes.push_back(c);
  }
  std::string best;
  std::size_t best_bad = n + 1;
  for (int refl = 0; refl < 2; ++refl)
    for (std::size_t off = 0; off < n; ++off) {
      CycleAlignment al{off, refl == 1};
      std::size_t bad = 0;
      std::string msg;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = al.map(i, n);
        const bool seq_ok = b.sequences.s[j] == want.s[i] && b.sequences.areas[j] == want.areas[i];
        const bool cls_ok = classes.empty() || classes[j] == d.components[i];
        if (seq_ok && cls_ok) continue;
        ++bad;
        msg += "component " + std::to_string(i) + " (" + b.sequences.labels[j] + "): reads s=" +
               std::to_string(b.sequences.s[j]) + " area=" + to_string(b.sequences.areas[j]) +
               (classes.empty() ? "" : " class=" + to_string(classes[j])) + ", expected s=" + std::to_string(want.s[i]) +
               " area=" + to_string(want.areas[i]) + " class=" + to_string(d.components[i]) + "; ";
      }
      if (bad < best_bad) {
        best_bad = bad;
        best = msg;
      }
    }
  rt.ok = best_bad == 0;
  rt.message = rt.ok ? "boundary reads back the input cycle" : best;
  return rt;
}

inline Realization realize(const DivisorCycle& input, const RealizeOptions& opt = {}) {
  auto rep = validate_cycle(input);
  if (!rep.ok) throw Error("realize", "input is not a log Calabi-Yau cycle: " + rep.issues.front());
  if (!is_reduced(input.areas)) throw Error("realize", "framing areas are not reduced");
  const DivisorCycle d = detail::normalized(input);
  const ReductionResult r = reduce(d, opt.epsilon);
  const auto& xe = r.eps.x_eps;
  const auto& plan = r.plan;

  Realization out;
  auto& rp = out.report;
  rp.kase = r.model.kase;
  rp.epsilon = r.eps.report;
  rp.raw_params = r.raw_params;
  rp.params = plan.params;
  rp.chops = plan.chops;
  rp.scale = input.areas.c;

  // Bites: each exceptional class sits on the edge of its host component.
  const LatticePolygon& poly = plan.polygon;
  std::vector<std::vector<Rational>> bites(poly.size());
  std::vector<std::vector<std::string>> bite_labels(poly.size());
  for (std::size_t i = 0; i < r.exceptional.size(); ++i) {
    const std::string& tag = xe.tags[r.toric.hosts[i]];
    auto e = poly.find_edge(tag);
    if (!e) throw Error("realize", "host component " + tag + " has no edge");
    bites[*e].push_back(xe.cycle.areas.area(r.exceptional[i]));
    bite_labels[*e].push_back(to_string(r.exceptional[i]));
  }
  rp.problem.polygon = poly;
  rp.problem.weights = detail::packing_weights(poly, bites, xe.cycle.areas, r.eps.report.epsilon);
  PackingProvenance pv;
  pv.trapezoid = plan.params;
  for (std::size_t k = 0; k < 4; ++k) {
    auto e = poly.find_edge(plan.edge_tags[k]);
    if (!e) throw Error("realize", "trapezoid edge " + plan.edge_tags[k] + " missing after chops");
    pv.edges[k] = *e;
    pv.largest_chop[k] = plan.largest_chop.at(kTrapezoidEdges[k]);
  }
  rp.problem.provenance = pv;
  rp.theta = theta_bounds(rp.problem);
  rp.lemma_holds = check_lemma(rp.problem);
  if (!rp.lemma_holds && opt.require_lemma)
    throw Error("packing", "theta bounds (" + to_string(rp.theta.theta1) + ", " + to_string(rp.theta.theta2) +
                               ") exceed (x, y) = (" + to_string(plan.params.x) + ", " + to_string(plan.params.y) + ")");
  auto o = solve_packing(rp.problem);
  if (!o) throw Error("packing", rp.lemma_holds ? "certified packing problem reported infeasible" : "packing problem infeasible");
  rp.point = *o;
  rp.triangles = place_triangles(poly, *o, rp.problem.weights, bites);
  {
    std::size_t t = 0;
    for (std::size_t e = 0; e < poly.size(); ++e)
      for (const auto& l : bite_labels[e]) rp.triangles[t++].label = l;
  }

  BittenDiagram g = make_diagram(plan);
  g.triangles = rp.triangles;
  for (std::size_t i = 0; i < xe.length(); ++i) g.classes.emplace(xe.tags[i], xe.cycle.components[i]);
  for (int k : r.eps.report.synthetic) g.synthetic.emplace("E" + std::to_string(k), xe.cycle.areas.delta(k));
  g.nested = r.eps.report.nested;

  if (g.nested)
    for (std::size_t t = 0; t < g.triangles.size() && !rp.branch_move; ++t) {
      if (!g.synthetic.count(poly.label(g.triangles[t].edge))) continue;
      for (CutSide side : {CutSide::Right, CutSide::Left}) {
        try {
          g = branch_move(g, t, side);
          rp.branch_move = BranchMoveRecord{t, side};
          break;
        } catch (const Error&) {
        }
      }
    }
  // Fill synthetic corners, innermost first.
  for (bool progress = true; progress && g.fills.size() < g.synthetic.size();) {
    progress = false;
    for (auto it = g.synthetic.rbegin(); it != g.synthetic.rend(); ++it) {
      if (std::any_of(g.fills.begin(), g.fills.end(), [&](const Fill& f) { return f.edge == it->first; })) continue;
      try {
        g = fill_corner(g, it->first);
        progress = true;
        break;
      } catch (const Error&) {
      }
    }
  }
  if (g.fills.size() != g.synthetic.size()) throw Error("fill_corner", "a synthetic corner could not be filled");
  rp.fills = g.fills;

  out.diagram = scale_diagram(g, input.areas.c);
  auto v = validate_diagram(out.diagram);
  if (!v.ok) throw Error("realize", "assembled diagram is invalid: " + v.issues.front());
  rp.roundtrip = verify_roundtrip(input, out.diagram);
  return out;
}

/// Base diagram area minus bite areas plus filled corners: the symplectic volume.
inline Rational diagram_volume(const BittenDiagram& g) {
  Rational v = g.polygon.area();
  for (const auto& t : g.triangles) v -= t.size * t.size / 2;
  for (const auto& f : g.fills) v += f.size * f.size / 2;
  return v;
}

struct ManifoldDiagram {
  BittenDiagram diagram;
  std::optional<Fill> nodal_fill;  ///< corner of E_{n+1} filled to forget the divisor
  Rational volume;
};

/// ATF base diagram of the blowup of CP2 with the given areas, through the
/// pair (3H - E_1 - ... - E_n - 2E_{n+1}, E_{n+1}) for a small extra E_{n+1}.
inline ManifoldDiagram atf_for_manifold(const AreaVector& areas) {
  if (areas.c <= 0) throw Error("manifold", "c must be positive");
  if (!is_reduced(areas)) throw Error("manifold", "area vector is not reduced");
  if (!is_symplectic(areas)) throw Error("manifold", "area vector is not a symplectic class");
  Rational sum = 0;
  for (const auto& x : areas.deltas) sum += x;
  if (sum >= 3 * areas.c) throw Error("manifold", "omega . c1 = " + to_string(3 * areas.c - sum) + " is not positive");
  const int n = areas.rank();
  Rational target = areas.c * areas.c;
  for (const auto& x : areas.deltas) target -= x * x;
  target /= 2;

  ManifoldDiagram out;
  const Rational c = areas.c;
  if (n <= 1) {
    BittenDiagram g;
    if (n == 0) {
      g.trapezoid = {1, c, c, 0};
      g.edge_tags = {"H", "H'", "", "H''"};
    } else {
      g.trapezoid = {1, c - areas.delta(1), c, areas.delta(1)};
      g.edge_tags = {"H", "H-E1", "E1", "H-E1'"};
    }
    auto base = make_trapezoid(g.trapezoid, true);
    std::vector<std::string> tags(g.edge_tags.begin(), g.edge_tags.end());
    if (n == 0) tags.erase(tags.begin() + 2);
    g.polygon = LatticePolygon(base.vertices(), tags);
    out.diagram = g;
  } else {
    AreaVector aug = areas;
    Rational room = rmin(areas.delta(n), 3 * c - sum);
    if (n == 2) room = rmin(room, c - areas.delta(1) - areas.delta(2));
    const Rational extra = room / 10;
    aug.deltas.push_back(extra);
    DivisorCycle pair;
    pair.areas = aug;
    auto big = HomologyClass::c1(n + 1);
    big.e(n + 1) = -2;
    pair.components = {big, HomologyClass::E(n + 1, n + 1)};
    auto real = realize(pair);
    if (!real.report.roundtrip.ok) throw Error("manifold", "pair realization failed its round trip: " + real.report.roundtrip.message);
    const auto reading = boundary_divisor(real.diagram);
    std::optional<std::string> host;
    for (std::size_t i = 0; i < reading.classes.size(); ++i) {
      auto cls = reading.classes[i];
      while (cls.rank() > n + 1) cls = cls.truncated();
      if (cls == HomologyClass::E(n + 1, n + 1)) host = reading.sequences.labels[i];
    }
    if (!host) throw Error("manifold", "no component carries E" + std::to_string(n + 1));
    out.diagram = real.diagram;
    out.nodal_fill = Fill{*host, extra};
  }
  auto v = validate_diagram(out.diagram);
  if (!v.ok) throw Error("manifold", "diagram is invalid: " + v.issues.front());
  out.volume = diagram_volume(out.diagram);
  if (out.nodal_fill) out.volume += out.nodal_fill->size * out.nodal_fill->size / 2;
  if (out.volume != target)
    throw Error("manifold", "diagram volume " + to_string(out.volume) + " differs from " + to_string(target));
  return out;
}

}  // namespace atf
