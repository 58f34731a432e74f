#pragma once

// Reduction of a framed log Calabi-Yau pair down to a Hirzebruch trapezoid with
// a corner-chop plan. Intermediate data is kept on the result.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atf/exact_geometry.hpp"
#include "atf/homology.hpp"

namespace atf {

enum class CaseTag { I, II, III, IV, V };

inline std::string to_string(CaseTag t) {
  switch (t) {
    case CaseTag::I: return "i";
    case CaseTag::II: return "ii";
    case CaseTag::III: return "iii";
    case CaseTag::IV: return "iv";
    case CaseTag::V: return "v";
  }
  return "?";
}

/// Which pattern the first blowup f2 of the path follows.
enum class Branch {
  Otherwise,
  NonToricFirst,  ///< f2 is the non-toric blowup on C1
  ToricFirst,     ///< f2 is the toric blowup at the C1-C2 node (cases iii, iv)
};

inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::Otherwise: return "otherwise";
    case Branch::NonToricFirst: return "nontoric-first";
    case Branch::ToricFirst: return "toric-first";
  }
  return "?";
}

struct ReducedCase {
  CaseTag tag = CaseTag::I;
  int a = 0;  ///< parameter of cases ii-iv
  int l = 0;  ///< parameter of case v
  Branch branch = Branch::Otherwise;

  bool f2_special() const noexcept { return branch != Branch::Otherwise; }
  friend bool operator==(const ReducedCase&, const ReducedCase&) = default;
};

/// A divisor cycle whose components carry origin tags: "C1".."C4" for the
/// components of the reduced model, "E<k>" for components created by toric blowup E_k.
struct TaggedCycle {
  DivisorCycle cycle;
  std::vector<std::string> tags;

  std::size_t length() const noexcept { return cycle.length(); }
  std::optional<std::size_t> find(const std::string& tag) const {
    for (std::size_t i = 0; i < tags.size(); ++i)
      if (tags[i] == tag) return i;
    return std::nullopt;
  }
  /// Node whose left/right components (in cyclic order) carry the given tags.
  std::optional<std::size_t> find_node(const std::string& left, const std::string& right) const {
    const std::size_t len = length();
    for (std::size_t k = 0; k < len; ++k)
      if (tags[k] == left && tags[(k + 1) % len] == right) return k;
    return std::nullopt;
  }
  std::pair<std::string, std::string> node_tags(std::size_t k) const {
    return {tags[k], tags[(k + 1) % length()]};
  }
  void apply(const BlowupStep& step) {
    cycle = blowup(cycle, step);
    if (step.kind == BlowupStep::Kind::Toric)
      tags.insert(tags.begin() + static_cast<std::ptrdiff_t>(step.location) + 1, "E" + std::to_string(step.index));
  }
  void rotate_to(std::size_t first) {
    std::rotate(cycle.components.begin(), cycle.components.begin() + static_cast<std::ptrdiff_t>(first),
                cycle.components.end());
    std::rotate(tags.begin(), tags.begin() + static_cast<std::ptrdiff_t>(first), tags.end());
  }
  SequenceCycle sequences() const {
    SequenceCycle s = s_area_sequences(cycle, false);
    s.labels = tags;
    return s;
  }
};

struct ReducedModel {
  ReducedCase kase;
  TaggedCycle terminal;
  /// Path from the terminal cycle up to the input; step locations refer to the replayed cycle.
  BlowupPath gamma;
};

namespace detail {

inline HomologyClass cls(int n, long h, std::initializer_list<std::pair<int, long>> es = {}) {
  auto c = HomologyClass::zero(n);
  std::vector<long> v = c.coeffs();
  v[0] = h;
  for (auto [i, x] : es) v.at(static_cast<std::size_t>(i)) = x;
  return HomologyClass(std::move(v));
}

struct Candidate {
  ReducedCase kase;
  std::vector<std::string> tags;
};

inline std::vector<Candidate> terminal_candidates(const DivisorCycle& t) {
  std::vector<Candidate> out;
  const int n = t.rank();
  const std::size_t len = t.length();
  const auto& c = t.components;
  if (n == 1 && len == 2) {
    for (std::size_t p = 0; p < 2; ++p) {
      if (c[p] == cls(1, 2) && c[1 - p] == cls(1, 1, {{1, -1}})) {
        std::vector<std::string> tags(2);
        tags[p] = "C1";
        tags[1 - p] = "C2";
        out.push_back({{CaseTag::I, 0, 0, Branch::Otherwise}, tags});
      }
    }
    for (std::size_t p = 0; p < 2; ++p) {
      long a = c[p].h() - 1;
      if (a >= 1 && c[p] == cls(1, a + 1, {{1, -a}}) && c[1 - p] == cls(1, 2 - a, {{1, a - 1}})) {
        std::vector<std::string> tags(2);
        tags[p] = "C1";
        tags[1 - p] = "C2";
        out.push_back({{CaseTag::II, static_cast<int>(a), 0, Branch::Otherwise}, tags});
      }
    }
  }
  if (n == 1 && (len == 3 || len == 4)) {
    for (int refl = 0; refl < 2; ++refl)
      for (std::size_t r = 0; r < len; ++r) {
        auto pos = [&](std::size_t i) { return refl ? (r + len - i) % len : (r + i) % len; };
        long a = c[pos(0)].h();
        if (a < 1) continue;
        bool ok = c[pos(0)] == cls(1, a, {{1, 1 - a}}) && c[pos(1)] == cls(1, 1, {{1, -1}});
        if (len == 3) ok = ok && c[pos(2)] == cls(1, 2 - a, {{1, a - 1}});
        if (len == 4) ok = ok && c[pos(2)] == cls(1, 1 - a, {{1, a}}) && c[pos(3)] == cls(1, 1, {{1, -1}});
        if (!ok) continue;
        std::vector<std::string> tags(len);
        for (std::size_t i = 0; i < len; ++i) tags[pos(i)] = "C" + std::to_string(i + 1);
        out.push_back({{len == 3 ? CaseTag::III : CaseTag::IV, static_cast<int>(a), 0, Branch::Otherwise}, tags});
      }
  }
  if (n >= 2 && len == 2) {
    const auto el = HomologyClass::E(n, n);
    for (std::size_t p = 0; p < 2; ++p) {
      if (c[p] != el) continue;
      auto expect = HomologyClass::c1(n);
      expect.e(n) = -2;
      if (c[1 - p] != expect) continue;
      std::vector<std::string> tags(2);
      tags[1 - p] = "C1";
      tags[p] = "C2";
      out.push_back({{CaseTag::V, 0, n, Branch::Otherwise}, tags});
    }
  }
  return out;
}

inline Branch branch_of(const ReducedCase& k, const std::vector<std::string>& tags, const BlowupStep& f2) {
  if (k.tag == CaseTag::V) return Branch::Otherwise;
  if (f2.kind == BlowupStep::Kind::NonToric) return tags[f2.location] == "C1" ? Branch::NonToricFirst : Branch::Otherwise;
  if (k.tag == CaseTag::III || k.tag == CaseTag::IV) {
    const std::string& l = tags[f2.location];
    const std::string& r = tags[(f2.location + 1) % tags.size()];
    if ((l == "C1" && r == "C2") || (l == "C2" && r == "C1")) return Branch::ToricFirst;
  }
  return Branch::Otherwise;
}

/// Index of the rotation aligning `replayed` with `target` componentwise, if any.
inline std::optional<std::size_t> rotation_to(const DivisorCycle& replayed, const DivisorCycle& target) {
  const std::size_t len = target.length();
  if (replayed.length() != len) return std::nullopt;
  for (std::size_t r = 0; r < len; ++r) {
    bool ok = true;
    for (std::size_t i = 0; i < len && ok; ++i) ok = replayed.components[(r + i) % len] == target.components[i];
    if (ok) return r;
  }
  return std::nullopt;
}

}  // namespace detail

/// Blows down E_n, E_{n-1}, ... until rank 1 or a 2-cycle containing the current E_n,
/// then classifies the terminal cycle among the five reduced forms.
inline ReducedModel reduced_model(const DivisorCycle& d) {
  auto rep = validate_cycle(d);
  if (!rep.ok) throw Error("reduced_model", "input is not a log Calabi-Yau cycle: " + rep.issues.front());
  if (!is_reduced(d.areas)) throw Error("reduced_model", "framing areas are not reduced");
  DivisorCycle cur = d;
  std::vector<BlowupStep> steps;
  while (true) {
    const int n = cur.rank();
    if (n <= 1) break;
    if (cur.length() == 2 && std::count(cur.components.begin(), cur.components.end(), HomologyClass::E(n, n)) > 0)
      break;
    try {
      auto [down, step] = blowdown(cur, n);
      steps.insert(steps.begin(), step);
      cur = std::move(down);
    } catch (const Error& e) {
      throw Error("reduced_model", std::string("blowdown failed: ") + e.what());
    }
  }
  auto cands = detail::terminal_candidates(cur);
  if (cands.empty()) throw Error("reduced_model", "terminal cycle matches no reduced form");
  std::size_t pick = 0;
  if (!steps.empty()) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      cands[i].kase.branch = detail::branch_of(cands[i].kase, cands[i].tags, steps.front());
      if (cands[i].kase.branch != Branch::Otherwise) {
        pick = i;
        break;
      }
    }
  }
  ReducedModel m;
  m.kase = cands[pick].kase;
  m.terminal = {cur, cands[pick].tags};
  m.gamma = {cur, steps};
  return m;
}

/// Replays the path with tags and rotates the result to the component order of `target`.
inline TaggedCycle replay_tagged(const ReducedModel& m, const DivisorCycle& target) {
  TaggedCycle t = m.terminal;
  for (const auto& s : m.gamma.steps) t.apply(s);
  auto r = detail::rotation_to(t.cycle, target);
  if (!r) throw Error("reduced_model", "replayed path does not reproduce the input cycle");
  t.rotate_to(*r);
  return t;
}

struct EpsilonReport {
  bool replaced = false;
  Rational epsilon;
  /// Distinguished blowups (index, size); first entry is E_i, second E_j.
  std::vector<std::pair<int, Rational>> distinguished;
  std::vector<int> synthetic;
  /// Marked nodes as ordered (left, right) tag pairs at the time of their blowup.
  std::vector<std::pair<std::string, std::string>> marked_nodes;
  bool nested = false;
};

struct EpsilonReplacement {
  TaggedCycle x_eps;
  /// Gamma followed by the synthetic toric blowups (locations in replay order).
  BlowupPath gamma_eps;
  EpsilonReport report;
};

/// Default epsilon: one tenth of the minimum over component areas and path blowup sizes.
inline Rational default_epsilon(const DivisorCycle& x, const BlowupPath& gamma) {
  Rational m = x.area(0);
  for (std::size_t i = 1; i < x.length(); ++i) m = rmin(m, x.area(i));
  for (const auto& s : gamma.steps) m = rmin(m, s.size);
  return m / 10;
}

inline EpsilonReplacement epsilon_replacement(const ReducedModel& m, const DivisorCycle& x,
                                              std::optional<Rational> eps = std::nullopt) {
  const Rational bound = default_epsilon(x, m.gamma);
  const Rational epsilon = eps.value_or(bound);

  // Replay with tags, recording where each toric blowup happened.
  TaggedCycle t = m.terminal;
  std::vector<std::tuple<std::string, std::string, int>> toric;
  for (const auto& s : m.gamma.steps) {
    if (s.kind == BlowupStep::Kind::Toric) {
      auto [l, r] = t.node_tags(s.location);
      toric.emplace_back(l, r, s.index);
    }
    t.apply(s);
  }
  auto rot = detail::rotation_to(t.cycle, x);
  if (!rot) throw Error("epsilon_replacement", "path does not reproduce the input cycle");
  const std::string first_tag = t.tags[*rot];

  auto first_at = [&](const std::string& l, const std::string& r) -> std::optional<int> {
    for (auto& [tl, tr, idx] : toric)
      if (tl == l && tr == r) return idx;
    return std::nullopt;
  };

  const auto& tt = m.terminal.tags;
  const CaseTag tag = m.kase.tag;
  EpsilonReplacement out;
  out.report.epsilon = epsilon;
  std::vector<std::pair<std::string, std::string>> marked;
  if (tag == CaseTag::I && m.kase.branch != Branch::NonToricFirst) {
    std::pair<std::string, std::string> outer{tt[0], tt[1]};
    if (!toric.empty()) outer = {std::get<0>(toric.front()), std::get<1>(toric.front())};
    marked.push_back(outer);
    out.report.nested = true;
  } else if (tag == CaseTag::I || tag == CaseTag::II || tag == CaseTag::V) {
    marked.push_back({tt[0], tt[1]});
    marked.push_back({tt[1], tt[0]});
  } else if (tag == CaseTag::III) {
    for (std::size_t k = 0; k < m.terminal.length(); ++k) {
      auto [l, r] = m.terminal.node_tags(k);
      if ((l == "C1" && r == "C3") || (l == "C3" && r == "C1")) marked.push_back({l, r});
    }
  }

  // Resolve which marked nodes already carry a toric blowup of the path.
  std::vector<std::optional<int>> occupied;
  for (const auto& [l, r] : marked) occupied.push_back(first_at(l, r));
  std::optional<std::pair<std::string, std::string>> nested_node;
  std::optional<int> nested_idx;
  auto nested_for = [&](const std::string& outer_l, const std::string& ei) {
    // The node between E_i and the 2H-component C1.
    return outer_l == "C1" ? std::make_pair(std::string("C1"), ei) : std::make_pair(ei, std::string("C1"));
  };
  if (out.report.nested && occupied[0]) {
    nested_node = nested_for(marked[0].first, "E" + std::to_string(*occupied[0]));
    nested_idx = first_at(nested_node->first, nested_node->second);
  }
  std::size_t needed = 0;
  for (auto& o : occupied) needed += o ? 0 : 1;
  if (out.report.nested && !nested_idx) ++needed;
  if (needed > 0 && (epsilon <= 0 || epsilon > bound))
    throw Error("epsilon_replacement", "epsilon " + to_string(epsilon) + " not small enough (limit " + to_string(bound) + ")");

  TaggedCycle xe = t;
  BlowupPath path = m.gamma;
  int next_index = x.rank() + 1;
  std::size_t made = 0;
  auto synth = [&](const std::pair<std::string, std::string>& node) {
    auto k = xe.find_node(node.first, node.second);
    if (!k) throw Error("epsilon_replacement", "marked node " + node.first + "/" + node.second + " not present");
    Rational size = (tag == CaseTag::I && needed == 2 && made == 1) ? Rational(epsilon / 2) : epsilon;
    BlowupStep s{BlowupStep::Kind::Toric, *k, size, next_index};
    xe.apply(s);
    path.steps.push_back(s);
    out.report.synthetic.push_back(next_index);
    ++next_index;
    ++made;
    return next_index - 1;
  };
  std::vector<int> dist;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    int idx = occupied[i] ? *occupied[i] : synth(marked[i]);
    dist.push_back(idx);
    out.report.marked_nodes.push_back(marked[i]);
  }
  if (out.report.nested) {
    if (!nested_node) nested_node = nested_for(marked[0].first, "E" + std::to_string(dist[0]));
    int idx = nested_idx ? *nested_idx : synth(*nested_node);
    dist.push_back(idx);
    out.report.marked_nodes.push_back(*nested_node);
  } else {
    std::sort(dist.begin(), dist.end());
  }
  for (int idx : dist) out.report.distinguished.emplace_back(idx, xe.cycle.areas.delta(idx));
  out.report.replaced = !out.report.synthetic.empty();
  auto first = xe.find(first_tag);
  xe.rotate_to(*first);
  out.x_eps = std::move(xe);
  out.gamma_eps = std::move(path);
  return out;
}

/// Indices of the non-toric steps of a path.
inline std::vector<int> nontoric_indices(const BlowupPath& p) {
  std::vector<int> out;
  for (const auto& s : p.steps)
    if (s.kind == BlowupStep::Kind::NonToric) out.push_back(s.index);
  return out;
}

/// The case-specific set of pairwise orthogonal non-toric exceptional classes.
inline std::vector<HomologyClass> exceptional_set(const ReducedCase& k, const DivisorCycle& x_eps,
                                                  const std::vector<int>& nontoric,
                                                  const std::vector<std::pair<int, Rational>>& distinguished) {
  const int n = x_eps.rank();
  auto E = [&](int i) { return HomologyClass::E(n, i); };
  auto Hm = [&](std::initializer_list<int> idx) { return HomologyClass::H_minus(n, idx); };
  const int i = distinguished.size() > 0 ? distinguished[0].first : 0;
  const int j = distinguished.size() > 1 ? distinguished[1].first : 0;
  const bool a_branch = k.branch == Branch::NonToricFirst;
  std::vector<HomologyClass> out;
  auto add_nontoric = [&](int from) {
    for (int idx : nontoric)
      if (idx >= from) out.push_back(E(idx));
  };
  switch (k.tag) {
    case CaseTag::I:
      if (a_branch) {
        out = {E(1), Hm({2, i}), Hm({2, j})};
        add_nontoric(3);
      } else {
        out = {E(1), Hm({i, j})};
        add_nontoric(0);
      }
      break;
    case CaseTag::II:
      if (a_branch) {
        out = {Hm({1, 2}), Hm({1, i}), Hm({1, j})};
        add_nontoric(3);
      } else {
        out = {Hm({1, i}), Hm({1, j})};
        add_nontoric(0);
      }
      break;
    case CaseTag::III:
      if (a_branch) {
        out = {Hm({1, 2}), Hm({1, i})};
        add_nontoric(3);
      } else {
        out = {Hm({1, i})};
        add_nontoric(0);
      }
      break;
    case CaseTag::IV:
      if (a_branch) {
        out = {Hm({1, 2})};
        add_nontoric(3);
      } else {
        add_nontoric(0);
      }
      break;
    case CaseTag::V: {
      const int l = k.l;
      for (int m = 3; m <= l - 1; ++m) out.push_back(E(m));
      for (int m = 1; m <= 2; ++m)
        if (m != l) out.push_back(Hm({m, l}));
      out.push_back(Hm({l, i}));
      out.push_back(Hm({l, j}));
      add_nontoric(0);
      break;
    }
  }
  for (std::size_t a = 0; a < out.size(); ++a) {
    if (!is_nontoric_exceptional(out[a], x_eps))
      throw Error("exceptional_set", to_string(out[a]) + " is not a non-toric exceptional class of the replaced cycle");
    for (std::size_t b = a + 1; b < out.size(); ++b)
      if (pairing(out[a], out[b]) != 0)
        throw Error("exceptional_set", to_string(out[a]) + " and " + to_string(out[b]) + " are not orthogonal");
  }
  return out;
}

struct ToricModel {
  SequenceCycle sequences;                 ///< labeled with the tags of the replaced cycle
  std::vector<HomologyClass> classes;      ///< pushed-forward classes C + (C.S) S
  std::vector<std::size_t> hosts;          ///< host component of each exceptional class
};

inline ToricModel toric_model(const TaggedCycle& x_eps, const std::vector<HomologyClass>& exceptional) {
  ToricModel out;
  out.sequences = x_eps.sequences();
  out.classes = x_eps.cycle.components;
  for (const auto& s : exceptional) {
    std::optional<std::size_t> host;
    for (std::size_t c = 0; c < x_eps.length(); ++c) {
      long p = pairing(x_eps.cycle.components[c], s);
      if (p == 0) continue;
      if (p != 1 || host) throw Error("toric_model", to_string(s) + " meets more than one component");
      host = c;
    }
    if (!host) throw Error("toric_model", to_string(s) + " meets no component");
    out.hosts.push_back(*host);
    out.sequences.s[*host] += 1;
    out.sequences.areas[*host] += x_eps.cycle.areas.area(s);
    for (auto& c : out.classes) c += pairing(c, s) * s;
  }
  if (sequence_charge(out.sequences) != 0) throw Error("toric_model", "result is not toric");
  return out;
}

/// Raw trapezoid quadruple of the classified case; k may be negative before orientation.
inline TrapezoidParams trapezoid_params(const ReducedCase& k, const AreaVector& areas,
                                        const std::vector<std::pair<int, Rational>>& distinguished) {
  if (areas.c != 1) throw Error("trapezoid_params", "areas must be normalized to c = 1");
  auto d = [&](int i) -> Rational { return areas.delta(i); };
  const Rational di = distinguished.size() > 0 ? distinguished[0].second : Rational(0);
  const Rational dj = distinguished.size() > 1 ? distinguished[1].second : Rational(0);
  const long a = k.a;
  const Rational ra(a);
  const bool first = k.branch != Branch::Otherwise;
  TrapezoidParams t;
  switch (k.tag) {
    case CaseTag::I:
      if (k.branch == Branch::NonToricFirst)
        t = {1, 1 - d(2), 2 - d(2) - di - dj, 1 - di - dj};
      else
        t = {2, 1 - di, 2 - di - dj, di - dj};
      break;
    case CaseTag::II:
      if (k.branch == Branch::NonToricFirst)
        t = {2 * a - 2, 1 - d(1), 1 + ra - ra * d(1) - d(2) - di - dj, 3 - ra + (ra - 2) * d(1) - d(2) - di - dj};
      else
        t = {2 * a - 1, 1 - d(1), ra + 1 - ra * d(1) - di - dj, -ra + 2 + (ra - 1) * d(1) - di - dj};
      break;
    case CaseTag::III:
      if (first)
        t = {2 * a - 3, 1 - d(1), ra - (ra - 1) * d(1) - d(2) - di, 3 - ra + (ra - 2) * d(1) - d(2) - di};
      else
        t = {2 * a - 2, 1 - d(1), ra - (ra - 1) * d(1) - di, -ra + 2 + (ra - 1) * d(1) - di};
      break;
    case CaseTag::IV:
      if (first)
        t = {2 * a - 2, 1 - d(1), ra - (ra - 1) * d(1) - d(2), 2 - ra + (ra - 1) * d(1) - d(2)};
      else
        t = {2 * a - 1, 1 - d(1), ra - (ra - 1) * d(1), 1 - ra + ra * d(1)};
      break;
    case CaseTag::V: {
      const int l = k.l;
      if (l >= 3)
        t = {1, 1 - d(l), 3 - d(1) - d(2) - 2 * d(l) - di - dj, 2 - d(1) - d(2) - d(l) - di - dj};
      else if (l == 2)
        t = {2, 1 - d(2), 3 - d(1) - 2 * d(2) - di - dj, 1 - d(1) - di - dj};
      else
        throw Error("trapezoid_params", "case v needs l >= 2");
      break;
    }
  }
  if (t.y - t.z != Rational(t.k) * t.x) throw Error("trapezoid_params", "quadruple violates y - z = k x");
  if (t.x <= 0 || t.y <= 0 || t.z <= 0)
    throw Error("trapezoid_params", "non-positive entry in " + to_string(t) + " (inadmissible areas)");
  return t;
}

/// k >= 0 and y >= z via (k,x,y,z) ~ (-k,x,z,y).
inline TrapezoidParams orient_trapezoid(TrapezoidParams t) {
  if (t.k < 0 || (t.k == 0 && t.y < t.z)) t = {-t.k, t.x, t.z, t.y};
  return t;
}

/// Sequence data of a trapezoid in counterclockwise edge order Y, X', Z, X.
inline SequenceCycle trapezoid_sequences(const TrapezoidParams& t) {
  return {{t.k, 0, -t.k, 0}, {t.y, t.x, t.z, t.x}, {"Y", "X'", "Z", "X"}};
}

struct ChopStep {
  std::string left;
  std::string right;
  Rational size;
  std::string label;
};

struct ChopPlan {
  TrapezoidParams params;                 ///< oriented: k >= 0, y >= z
  std::array<std::string, 4> edge_tags;   ///< tags on Y, X', Z, X
  std::vector<ChopStep> chops;
  std::map<std::string, Rational> largest_chop;  ///< b_Y, b_X', b_Z, b_X keyed by Y/X'/Z/X
  LatticePolygon polygon;                 ///< chopped polygon with tag labels
};

/// Recovers the trapezoid by toric blowdowns of the chop components, then replays the
/// chops forward on the canonical embedding. Fails if the final polygon does not read
/// back the toric model.
inline ChopPlan chop_plan(const ToricModel& tor, const BlowupPath& gamma_eps, const ReducedCase& k,
                          const std::vector<std::pair<int, Rational>>& distinguished, const TrapezoidParams& raw) {
  std::vector<std::string> order;
  const bool special = k.branch == Branch::ToricFirst;
  if (special) order.push_back("C2");
  for (const auto& s : gamma_eps.steps) {
    if (s.kind != BlowupStep::Kind::Toric) continue;
    bool dist = std::any_of(distinguished.begin(), distinguished.end(), [&](auto& p) { return p.first == s.index; });
    if (dist || (special && s.index == 2)) continue;
    order.push_back("E" + std::to_string(s.index));
  }
  SequenceCycle cur = tor.sequences;
  std::vector<ChopStep> rev;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto pos = std::find(cur.labels.begin(), cur.labels.end(), *it);
    if (pos == cur.labels.end()) throw Error("chop_plan", "component " + *it + " missing from toric model");
    std::size_t p = static_cast<std::size_t>(pos - cur.labels.begin());
    if (cur.s[p] != -1) throw Error("chop_plan", "component " + *it + " is not a (-1)-curve at its blowdown");
    const std::size_t len = cur.length();
    rev.push_back({cur.labels[(p + len - 1) % len], cur.labels[(p + 1) % len], cur.areas[p], *it});
    cur = sequence_toric_blowdown(cur, p);
  }
  ChopPlan plan;
  plan.params = orient_trapezoid(raw);
  auto trap = trapezoid_sequences(plan.params);
  auto al = align_cycles(trap, cur, false);
  if (!al)
    throw Error("chop_plan", "trapezoid " + to_string(plan.params) + " does not match blown-down toric model " +
                                 to_string(cur));
  for (std::size_t i = 0; i < 4; ++i) plan.edge_tags[al->map(i, 4)] = cur.labels[i];
  plan.chops.assign(rev.rbegin(), rev.rend());
  std::vector<std::string> labels(plan.edge_tags.begin(), plan.edge_tags.end());
  auto base = make_trapezoid(plan.params);
  LatticePolygon poly(base.vertices(), labels);
  for (const char* e : kTrapezoidEdges) plan.largest_chop[e] = 0;
  for (const auto& c : plan.chops) {
    std::optional<std::size_t> vtx;
    for (std::size_t v = 0; v < poly.size(); ++v) {
      const auto& a = poly.labels()[poly.prev(v)];
      const auto& b = poly.labels()[v];
      if ((a == c.left && b == c.right) || (a == c.right && b == c.left)) vtx = v;
    }
    if (!vtx) throw Error("chop_plan", "no corner between " + c.left + " and " + c.right);
    for (std::size_t e = 0; e < 4; ++e)
      if (plan.edge_tags[e] == c.left || plan.edge_tags[e] == c.right) {
        auto& b = plan.largest_chop[kTrapezoidEdges[e]];
        b = rmax(b, c.size);
      }
    try {
      poly = chop_corner(poly, *vtx, c.size, c.label);
    } catch (const Error& e) {
      throw Error("chop_plan", e.what());
    }
  }
  plan.polygon = poly;
  SequenceCycle reading;
  auto s = edge_self_intersections(poly);
  for (std::size_t e = 0; e < poly.size(); ++e) {
    reading.s.push_back(s[e]);
    reading.areas.push_back(poly.edge_length(e));
    reading.labels.push_back(poly.labels()[e]);
  }
  if (!align_cycles(tor.sequences, reading, true))
    throw Error("chop_plan", "chopped trapezoid does not read back the toric model");
  return plan;
}

/// All intermediate data from a framed cycle to its chopped trapezoid.
struct ReductionResult {
  ReducedModel model;
  EpsilonReplacement eps;
  std::vector<HomologyClass> exceptional;
  ToricModel toric;
  TrapezoidParams raw_params;
  ChopPlan plan;
};

/// Runs the whole reduction on a cycle whose areas are normalized to c = 1.
inline ReductionResult reduce(const DivisorCycle& d, std::optional<Rational> eps = std::nullopt) {
  if (d.areas.c != 1) throw Error("reduce", "areas must be normalized to c = 1");
  ReductionResult r;
  r.model = reduced_model(d);
  r.eps = epsilon_replacement(r.model, d, eps);
  r.exceptional = exceptional_set(r.model.kase, r.eps.x_eps.cycle, nontoric_indices(r.model.gamma),
                                  r.eps.report.distinguished);
  r.toric = toric_model(r.eps.x_eps, r.exceptional);
  r.raw_params = trapezoid_params(r.model.kase, r.eps.x_eps.cycle.areas, r.eps.report.distinguished);
  r.plan = chop_plan(r.toric, r.eps.gamma_eps, r.model.kase, r.eps.report.distinguished, r.raw_params);
  return r;
}

}  // namespace atf
