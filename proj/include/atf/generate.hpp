#pragma once

// Random admissible framed cycles with a prescribed reduced case and branch,
// built by random blowup paths on top of a terminal form.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "atf/reduction.hpp"

namespace atf {

struct Variant {
  CaseTag tag;
  Branch branch;
  std::string name;
};

inline const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> v{
      {CaseTag::I, Branch::NonToricFirst, "i-A"},    {CaseTag::I, Branch::Otherwise, "i-B"},
      {CaseTag::II, Branch::NonToricFirst, "ii-A"},  {CaseTag::II, Branch::Otherwise, "ii-B"},
      {CaseTag::III, Branch::NonToricFirst, "iii-A1"}, {CaseTag::III, Branch::ToricFirst, "iii-A2"},
      {CaseTag::III, Branch::Otherwise, "iii-B"},    {CaseTag::IV, Branch::NonToricFirst, "iv-A1"},
      {CaseTag::IV, Branch::ToricFirst, "iv-A2"},    {CaseTag::IV, Branch::Otherwise, "iv-B"},
      {CaseTag::V, Branch::Otherwise, "v"},
  };
  return v;
}

inline std::optional<Variant> find_variant(const std::string& name) {
  for (const auto& v : all_variants())
    if (v.name == name) return v;
  return std::nullopt;
}

struct GeneratedInstance {
  Variant variant;
  ReducedCase kase;
  DivisorCycle terminal;
  BlowupPath gamma;
  DivisorCycle cycle;  ///< normalized, c = 1
};

class InstanceGenerator {
 public:
  explicit InstanceGenerator(unsigned long seed, int max_rank = 10) : rng_(seed), max_rank_(max_rank) {}

  /// Draws until an admissible instance of the variant is produced.
  GeneratedInstance draw(const Variant& v) {
    for (int attempt = 0; attempt < 10000; ++attempt)
      if (auto g = try_draw(v)) return *g;
    throw Error("generate", "could not draw an instance of " + v.name);
  }

 private:
  std::mt19937_64 rng_;
  int max_rank_;

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  static mpz_class floor_q(const Rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
  }

  /// Rational strictly inside (lo, hi) with a small denominator.
  Rational between(const Rational& lo, const Rational& hi) {
    static const long dens[] = {7, 12, 20, 30, 60, 90, 120, 360};
    for (long den : dens) {
      mpz_class lo_n = floor_q(lo * den) + 1;
      mpz_class hi_n = -floor_q(-hi * den) - 1;
      if (lo_n > hi_n) continue;
      long pick = uniform(0, mpz_class(hi_n - lo_n).get_si());
      Rational r{mpz_class(lo_n + pick), mpz_class(den)};
      r.canonicalize();
      return r;
    }
    return (lo + hi) / 2;
  }

  std::optional<GeneratedInstance> try_draw(const Variant& v) {
    GeneratedInstance g;
    g.variant = v;
    g.kase.tag = v.tag;
    g.kase.branch = v.branch;
    const int n_total = static_cast<int>(uniform(2, max_rank_));
    int n0 = 1;
    if (v.tag == CaseTag::II || v.tag == CaseTag::III || v.tag == CaseTag::IV) g.kase.a = static_cast<int>(uniform(1, 4));
    if (v.tag == CaseTag::V) {
      g.kase.l = static_cast<int>(uniform(2, n_total));
      n0 = g.kase.l;
    }
    const long a = g.kase.a;
    // delta_1 lower bound from positivity of the terminal areas.
    Rational lo1 = 0;
    if ((v.tag == CaseTag::II || v.tag == CaseTag::III) && a >= 3) lo1 = make_rational(a - 2, a - 1);
    if (v.tag == CaseTag::IV && a >= 2) lo1 = make_rational(a - 1, a);
    AreaVector areas;
    areas.c = 1;
    areas.deltas.push_back(between(lo1, 1));
    const Rational cap = (1 - areas.deltas[0]) / 2;
    for (int k = 2; k <= n_total; ++k) {
      Rational prev = k == 2 ? cap : areas.deltas.back();
      Rational d = prev * between(make_rational(1, 4), 1);
      if (uniform(0, 3) == 0 && k > 2) d = prev;  // ties exercise the reduced boundary
      if (d <= 0) return std::nullopt;
      areas.deltas.push_back(d);
    }
    if (!is_reduced(areas)) return std::nullopt;

    std::vector<HomologyClass> comps;
    const int n = n0;
    auto cls = [&](long h, long e1) { return detail::cls(n, h, {{1, e1}}); };
    switch (v.tag) {
      case CaseTag::I: comps = {detail::cls(n, 2), cls(1, -1)}; break;
      case CaseTag::II: comps = {cls(a + 1, -a), cls(2 - a, a - 1)}; break;
      case CaseTag::III: comps = {cls(a, 1 - a), cls(1, -1), cls(2 - a, a - 1)}; break;
      case CaseTag::IV: comps = {cls(a, 1 - a), cls(1, -1), cls(1 - a, a), cls(1, -1)}; break;
      case CaseTag::V: {
        auto c1 = HomologyClass::c1(n);
        c1.e(n) = -2;
        comps = {c1, HomologyClass::E(n, n)};
        break;
      }
    }
    DivisorCycle term;
    term.components = comps;
    term.areas.c = 1;
    term.areas.deltas.assign(areas.deltas.begin(), areas.deltas.begin() + n0);
    if (!validate_cycle(term).ok) return std::nullopt;
    // Random rotation and reflection of the stored terminal.
    if (uniform(0, 1)) std::reverse(term.components.begin(), term.components.end());
    std::rotate(term.components.begin(), term.components.begin() + uniform(0, static_cast<long>(term.length()) - 1),
                term.components.end());
    auto cands = detail::terminal_candidates(term);
    if (cands.empty()) return std::nullopt;

    DivisorCycle cur = term;
    std::vector<BlowupStep> steps;
    for (int k = n0 + 1; k <= n_total; ++k) {
      const Rational& size = areas.delta(k);
      std::vector<BlowupStep> options;
      for (std::size_t loc = 0; loc < cur.length(); ++loc) {
        if (size < cur.area(loc)) options.push_back({BlowupStep::Kind::NonToric, loc, size, k});
        if (size < cur.area(loc) && size < cur.area((loc + 1) % cur.length()))
          options.push_back({BlowupStep::Kind::Toric, loc, size, k});
      }
      if (k == n0 + 1 && v.tag != CaseTag::V) {
        std::vector<BlowupStep> keep;
        for (const auto& s : options) {
          bool all_other = true, some_match = false;
          for (auto& c : cands) {
            Branch b = detail::branch_of(c.kase, c.tags, s);
            if (b != Branch::Otherwise) all_other = false;
            if (b == v.branch) some_match = true;
          }
          if (v.branch == Branch::Otherwise ? all_other : some_match) keep.push_back(s);
        }
        options = keep;
      }
      if (options.empty()) return std::nullopt;
      BlowupStep s = options[static_cast<std::size_t>(uniform(0, static_cast<long>(options.size()) - 1))];
      cur = blowup(cur, s);
      steps.push_back(s);
    }
    if (v.tag != CaseTag::V && steps.empty() && v.branch != Branch::Otherwise) return std::nullopt;
    g.terminal = term;
    g.gamma = {term, steps};
    g.cycle = cur;
    return g;
  }
};

}  // namespace atf
