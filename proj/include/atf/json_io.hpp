#pragma once

// JSON encoding of pairs, polygons, traces, packing results and diagrams.
// Rationals are strings "p/q" in lowest terms; classes are coefficient vectors [h, e1, ..., en].

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

#include "atf/pipeline.hpp"

namespace atf::io {

using Json = nlohmann::ordered_json;

inline Json rational(const Rational& r) { return to_string(r); }

inline Rational rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

inline Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(rational(r));
  return out;
}

inline std::vector<Rational> rationals(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational(x));
  return out;
}

inline Json point(const RationalPoint& p) { return Json::array({rational(p.x), rational(p.y)}); }

inline RationalPoint point(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected a point [x, y]");
  return {rational(j[0]), rational(j[1])};
}

inline Json homology_class(const HomologyClass& c) { return c.coeffs(); }

// Accepts a coefficient vector or the textual form "2H-E1-E3".
inline HomologyClass homology_class(const Json& j, int n) {
  if (j.is_string()) return parse_class(n, j.get<std::string>());
  if (!j.is_array()) throw ParseError("expected a class coefficient vector");
  std::vector<long> v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError("class coefficients must be integers");
    v.push_back(x.get<long>());
  }
  if (v.size() != static_cast<std::size_t>(n) + 1)
    throw ParseError("class " + j.dump() + " needs " + std::to_string(n + 1) + " coefficients");
  return HomologyClass(std::move(v));
}

inline Json areas(const AreaVector& a) {
  return {{"n", a.rank()}, {"c", rational(a.c)}, {"deltas", rationals(a.deltas)}};
}

inline AreaVector areas(const Json& j) {
  if (!j.is_object()) throw ParseError("expected an object with c and deltas");
  AreaVector a;
  try {
    a.c = j.contains("c") ? rational(j.at("c")) : Rational(1);
    if (j.contains("deltas")) a.deltas = rationals(j.at("deltas"));
    if (j.contains("n") && j.at("n").get<int>() != a.rank()) throw ParseError("n does not match the number of deltas");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return a;
}

inline Json pair(const DivisorCycle& d) {
  Json j = areas(d.areas);
  Json comps = Json::array();
  for (const auto& c : d.components) comps.push_back(homology_class(c));
  j["components"] = comps;
  Json adj = Json::array();
  for (const auto& [a, b] : d.nodes()) adj.push_back({a, b});
  j["adjacency"] = adj;
  return j;
}

// Components must be listed in cyclic order; adjacency, when given, must be that cycle.
inline DivisorCycle pair(const Json& j) {
  DivisorCycle d;
  try {
    d.areas = areas(j);
    if (!j.contains("components")) throw ParseError("pair needs components");
    for (const auto& c : j.at("components")) d.components.push_back(homology_class(c, d.areas.rank()));
    if (j.contains("adjacency")) {
      std::multiset<std::pair<std::size_t, std::size_t>> given, expected;
      for (const auto& e : j.at("adjacency")) {
        auto a = e.at(0).get<std::size_t>(), b = e.at(1).get<std::size_t>();
        given.insert({std::min(a, b), std::max(a, b)});
      }
      for (const auto& [a, b] : d.nodes()) expected.insert({std::min(a, b), std::max(a, b)});
      if (given != expected) throw ParseError("adjacency must join consecutive components in a single cycle");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return d;
}

inline Json polygon(const LatticePolygon& p) {
  Json vs = Json::array();
  for (const auto& v : p.vertices()) vs.push_back(point(v));
  return {{"vertices", vs}, {"labels", p.labels()}};
}

inline LatticePolygon polygon(const Json& j) {
  std::vector<RationalPoint> vs;
  std::vector<std::string> labels;
  try {
    for (const auto& v : j.at("vertices")) vs.push_back(point(v));
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return LatticePolygon(std::move(vs), std::move(labels));
}

inline Json sequences(const SequenceCycle& s) {
  return {{"s", s.s}, {"areas", rationals(s.areas)}, {"labels", s.labels}};
}

inline Json trapezoid(const TrapezoidParams& t) {
  return {{"k", t.k}, {"x", rational(t.x)}, {"y", rational(t.y)}, {"z", rational(t.z)}};
}

inline TrapezoidParams trapezoid(const Json& j) {
  return {j.at("k").get<long>(), rational(j.at("x")), rational(j.at("y")), rational(j.at("z"))};
}

inline Json kase(const ReducedCase& k) {
  Json j{{"case", to_string(k.tag)}, {"branch", to_string(k.branch)}};
  if (k.tag == CaseTag::II || k.tag == CaseTag::III || k.tag == CaseTag::IV) j["a"] = k.a;
  if (k.tag == CaseTag::V) j["l"] = k.l;
  return j;
}

// Steps of a blowup path with the (s, area) reading after each step.
inline Json trace(const BlowupPath& path) {
  Json steps = Json::array();
  DivisorCycle cur = path.start;
  for (const auto& st : path.steps) {
    Json s{{"kind", to_string(st.kind)}, {"index", st.index}, {"size", rational(st.size)}};
    s[st.kind == BlowupStep::Kind::Toric ? "node" : "component"] = st.location;
    cur = blowup(cur, st);
    s["sequences"] = sequences(s_area_sequences(cur, false));
    steps.push_back(s);
  }
  return {{"start", pair(path.start)}, {"start_sequences", sequences(s_area_sequences(path.start, false))},
          {"steps", steps}};
}

inline Json reduced_model(const ReducedModel& m) {
  Json terminal = pair(m.terminal.cycle);
  terminal["tags"] = m.terminal.tags;
  return {{"case", kase(m.kase)}, {"terminal", terminal}, {"trace", trace(m.gamma)}};
}

inline Json epsilon_report(const EpsilonReport& r) {
  Json dist = Json::array(), marked = Json::array();
  for (const auto& [i, s] : r.distinguished) dist.push_back({{"index", i}, {"size", rational(s)}});
  for (const auto& [a, b] : r.marked_nodes) marked.push_back({a, b});
  return {{"replaced", r.replaced}, {"epsilon", rational(r.epsilon)}, {"distinguished", dist},
          {"synthetic", r.synthetic}, {"marked_nodes", marked}, {"nested", r.nested}};
}

inline Json replacement(const EpsilonReplacement& e) {
  Json x = pair(e.x_eps.cycle);
  x["tags"] = e.x_eps.tags;
  x["sequences"] = sequences(e.x_eps.sequences());
  return {{"x_eps", x}, {"report", epsilon_report(e.report)}, {"trace", trace(e.gamma_eps)}};
}

inline Json chop(const ChopStep& c) {
  return {{"left", c.left}, {"right", c.right}, {"size", rational(c.size)}, {"label", c.label}};
}

inline ChopStep chop(const Json& j) {
  return {j.at("left").get<std::string>(), j.at("right").get<std::string>(), rational(j.at("size")),
          j.at("label").get<std::string>()};
}

inline Json toric_model(const ReductionResult& r) {
  Json ex = Json::array(), tor = Json::array(), chops = Json::array(), largest = Json::object();
  for (std::size_t i = 0; i < r.exceptional.size(); ++i)
    ex.push_back({{"class", homology_class(r.exceptional[i])},
                  {"text", to_string(r.exceptional[i])},
                  {"host", r.eps.x_eps.tags[r.toric.hosts[i]]}});
  for (const auto& c : r.toric.classes) tor.push_back(to_string(c));
  for (const auto& c : r.plan.chops) chops.push_back(chop(c));
  for (const auto& [k, v] : r.plan.largest_chop) largest[k] = rational(v);
  return {{"case", kase(r.model.kase)},
          {"exceptional", ex},
          {"toric_sequences", sequences(r.toric.sequences)},
          {"toric_classes", tor},
          {"raw_params", trapezoid(r.raw_params)},
          {"params", trapezoid(r.plan.params)},
          {"chops", chops},
          {"largest_chop", largest},
          {"polygon", polygon(r.plan.polygon)}};
}

inline Json triangle(const SurgeryTriangle& t) {
  return {{"edge", t.edge}, {"start", rational(t.start)}, {"size", rational(t.size)}, {"apex", point(t.apex)},
          {"label", t.label}};
}

inline SurgeryTriangle triangle(const Json& j) {
  SurgeryTriangle t;
  t.edge = j.at("edge").get<std::size_t>();
  t.start = rational(j.at("start"));
  t.size = rational(j.at("size"));
  t.apex = point(j.at("apex"));
  if (j.contains("label")) t.label = j.at("label").get<std::string>();
  return t;
}

inline Json packing(const PackingProblem& p, const std::optional<ThetaBounds>& th, const std::optional<RationalPoint>& o,
                    const std::vector<SurgeryTriangle>& tris) {
  Json j{{"polygon", polygon(p.polygon)}, {"weights", rationals(p.weights)}};
  if (th) {
    j["theta1"] = rational(th->theta1);
    j["theta2"] = rational(th->theta2);
    j["lemma"] = check_lemma(p);
  }
  j["feasible"] = o.has_value();
  if (o) j["point"] = point(*o);
  Json ts = Json::array();
  for (const auto& t : tris) ts.push_back(triangle(t));
  j["triangles"] = ts;
  return j;
}

inline PackingProblem packing_problem(const Json& j) {
  try {
    PackingProblem p{polygon(j.at("polygon")), rationals(j.at("weights")), std::nullopt};
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

inline CutSide cut_side(const std::string& s) {
  if (s == "left") return CutSide::Left;
  if (s == "bite") return CutSide::Bite;
  if (s == "right") return CutSide::Right;
  throw ParseError("unknown cut side " + s);
}

inline Json diagram(const BittenDiagram& d) {
  Json tris = Json::array(), chops = Json::array(), synth = Json::object(), fills = Json::array(),
       classes = Json::object(), cuts = Json::array();
  for (const auto& t : d.triangles) tris.push_back(triangle(t));
  for (const auto& c : d.chops) chops.push_back(chop(c));
  for (const auto& [k, v] : d.synthetic) synth[k] = rational(v);
  for (const auto& f : d.fills) fills.push_back({{"edge", f.edge}, {"size", rational(f.size)}});
  int rank = 0;
  for (const auto& [k, v] : d.classes) {
    classes[k] = homology_class(v);
    rank = v.rank();
  }
  for (std::size_t t = 0; t < d.triangles.size(); ++t) cuts.push_back(to_string(d.cut(t)));
  return {{"trapezoid", trapezoid(d.trapezoid)},
          {"edge_tags", d.edge_tags},
          {"chops", chops},
          {"polygon", polygon(d.polygon)},
          {"triangles", tris},
          {"cuts", cuts},
          {"synthetic", synth},
          {"nested", d.nested},
          {"fills", fills},
          {"extra", to_string(d.extra_kind())},
          {"rank", rank},
          {"classes", classes}};
}

inline BittenDiagram diagram(const Json& j) {
  try {
    BittenDiagram d;
    d.trapezoid = trapezoid(j.at("trapezoid"));
    d.edge_tags = j.at("edge_tags").get<std::array<std::string, 4>>();
    for (const auto& c : j.at("chops")) d.chops.push_back(chop(c));
    d.polygon = polygon(j.at("polygon"));
    for (const auto& t : j.at("triangles")) d.triangles.push_back(triangle(t));
    if (j.contains("cuts"))
      for (const auto& c : j.at("cuts")) d.cuts.push_back(cut_side(c.get<std::string>()));
    if (j.contains("synthetic"))
      for (const auto& [k, v] : j.at("synthetic").items()) d.synthetic[k] = rational(v);
    d.nested = j.value("nested", false);
    if (j.contains("fills"))
      for (const auto& f : j.at("fills")) d.fills.push_back({f.at("edge").get<std::string>(), rational(f.at("size"))});
    const int rank = j.value("rank", 0);
    if (j.contains("classes"))
      for (const auto& [k, v] : j.at("classes").items()) d.classes[k] = homology_class(v, rank);
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

inline Json roundtrip(const RoundTrip& r) { return {{"ok", r.ok}, {"message", r.message}}; }

inline Json realization(const Realization& r) {
  const auto& rep = r.report;
  Json fills = Json::array();
  for (const auto& f : rep.fills) fills.push_back({{"edge", f.edge}, {"size", rational(f.size)}});
  Json report{{"case", kase(rep.kase)},
              {"epsilon", epsilon_report(rep.epsilon)},
              {"raw_params", trapezoid(rep.raw_params)},
              {"params", trapezoid(rep.params)},
              {"packing", packing(rep.problem, rep.theta, rep.point, rep.triangles)},
              {"fills", fills},
              {"scale", rational(rep.scale)},
              {"roundtrip", roundtrip(rep.roundtrip)}};
  report["packing"]["lemma"] = rep.lemma_holds;
  if (rep.branch_move)
    report["branch_move"] = {{"triangle", rep.branch_move->triangle}, {"side", to_string(rep.branch_move->side)}};
  return {{"diagram", diagram(r.diagram)}, {"report", report}};
}

inline Json manifold(const ManifoldDiagram& m) {
  Json j{{"diagram", diagram(m.diagram)}, {"volume", rational(m.volume)}};
  if (m.nodal_fill) j["nodal_fill"] = {{"edge", m.nodal_fill->edge}, {"size", rational(m.nodal_fill->size)}};
  return j;
}

inline Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace atf::io
