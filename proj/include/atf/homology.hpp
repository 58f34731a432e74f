#pragma once

// Intersection lattice of CP^2 # n(-CP^2), divisor cycles with areas, and the
// toric / non-toric blowup-blowdown calculus on cycles.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atf/rational.hpp"

namespace atf {

/// Class h H + sum e_i E_i, stored as (h, e_1, ..., e_n).
class HomologyClass {
 public:
  HomologyClass() : coeffs_{0} {}
  explicit HomologyClass(std::vector<long> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error("homology", "class needs at least the H coefficient");
  }

  static HomologyClass H(int n) {
    HomologyClass c = zero(n);
    c.coeffs_[0] = 1;
    return c;
  }
  static HomologyClass E(int n, int i) {
    HomologyClass c = zero(n);
    c.coeffs_.at(static_cast<std::size_t>(i)) = 1;
    return c;
  }
  static HomologyClass zero(int n) { return HomologyClass(std::vector<long>(static_cast<std::size_t>(n) + 1, 0)); }
  /// Poincare dual of c_1: 3H - E_1 - ... - E_n.
  static HomologyClass c1(int n) {
    HomologyClass c = zero(n);
    c.coeffs_[0] = 3;
    for (int i = 1; i <= n; ++i) c.coeffs_[static_cast<std::size_t>(i)] = -1;
    return c;
  }
  /// H - E_{i1} - E_{i2} - ...
  static HomologyClass H_minus(int n, std::initializer_list<int> idx) {
    HomologyClass c = H(n);
    for (int i : idx) c.coeffs_.at(static_cast<std::size_t>(i)) -= 1;
    return c;
  }

  int rank() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  long h() const noexcept { return coeffs_[0]; }
  long e(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  long& e(int i) { return coeffs_.at(static_cast<std::size_t>(i)); }
  const std::vector<long>& coeffs() const noexcept { return coeffs_; }

  HomologyClass extended(int n) const {
    auto c = coeffs_;
    c.resize(static_cast<std::size_t>(n) + 1, 0);
    return HomologyClass(std::move(c));
  }
  /// Drops the last slot.
  HomologyClass truncated() const {
    auto c = coeffs_;
    c.pop_back();
    return HomologyClass(std::move(c));
  }

  HomologyClass& operator+=(const HomologyClass& o) {
    check_rank(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  HomologyClass& operator-=(const HomologyClass& o) {
    check_rank(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  friend HomologyClass operator+(HomologyClass a, const HomologyClass& b) { return a += b; }
  friend HomologyClass operator-(HomologyClass a, const HomologyClass& b) { return a -= b; }
  friend HomologyClass operator*(long s, HomologyClass a) {
    for (auto& c : a.coeffs_) c *= s;
    return a;
  }
  friend bool operator==(const HomologyClass&, const HomologyClass&) = default;
  friend bool operator<(const HomologyClass& a, const HomologyClass& b) { return a.coeffs_ < b.coeffs_; }

  void check_rank(const HomologyClass& o) const {
    if (o.rank() != rank()) throw Error("homology", "rank mismatch");
  }

 private:
  std::vector<long> coeffs_;
};

/// Signature (1, n) form: a.b = a_h b_h - sum a_i b_i.
inline long pairing(const HomologyClass& a, const HomologyClass& b) {
  a.check_rank(b);
  long s = a.h() * b.h();
  for (int i = 1; i <= a.rank(); ++i) s -= a.e(i) * b.e(i);
  return s;
}

inline long self_intersection(const HomologyClass& a) { return pairing(a, a); }

inline std::string to_string(const HomologyClass& c) {
  std::string out;
  auto term = [&](long v, const std::string& sym) {
    if (v == 0) return;
    if (!out.empty()) out += v > 0 ? "+" : "-";
    else if (v < 0) out += "-";
    long m = v < 0 ? -v : v;
    if (m != 1) out += std::to_string(m);
    out += sym;
  };
  term(c.h(), "H");
  for (int i = 1; i <= c.rank(); ++i) term(c.e(i), "E" + std::to_string(i));
  return out.empty() ? "0" : out;
}

/// Parses sums such as "2H-E2-E3" or "-97H+98E1-E3" into a rank-n class.
inline HomologyClass parse_class(int n, std::string_view text) {
  auto c = HomologyClass::zero(n);
  std::vector<long> v = c.coeffs();
  std::size_t i = 0;
  bool any = false;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    long sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    } else if (any) {
      throw ParseError("class term missing sign in '" + std::string(text) + "'");
    }
    long coef = 1;
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) coef = std::stol(std::string(text.substr(i, j - i)));
    if (j >= text.size()) throw ParseError("class term missing symbol in '" + std::string(text) + "'");
    if (text[j] == 'H') {
      v[0] += sign * coef;
      i = j + 1;
    } else if (text[j] == 'E') {
      std::size_t k = j + 1;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (k == j + 1) throw ParseError("E without index in '" + std::string(text) + "'");
      int idx = std::stoi(std::string(text.substr(j + 1, k - j - 1)));
      if (idx < 1 || idx > n) throw ParseError("index E" + std::to_string(idx) + " out of range for rank " + std::to_string(n));
      v[static_cast<std::size_t>(idx)] += sign * coef;
      i = k;
    } else {
      throw ParseError("unexpected '" + std::string(1, text[j]) + "' in class '" + std::string(text) + "'");
    }
    any = true;
  }
  if (!any && text != "0") throw ParseError("empty class");
  return HomologyClass(std::move(v));
}

/// Areas omega(H) = c and omega(E_i) = deltas[i-1].
struct AreaVector {
  Rational c = 1;
  std::vector<Rational> deltas;

  int rank() const noexcept { return static_cast<int>(deltas.size()); }
  const Rational& delta(int i) const { return deltas.at(static_cast<std::size_t>(i) - 1); }
  Rational area(const HomologyClass& cls) const {
    if (cls.rank() != rank()) throw Error("homology", "area: rank mismatch");
    Rational a = c * Rational(cls.h());
    for (int i = 1; i <= rank(); ++i) a += Rational(cls.e(i)) * delta(i);
    return a;
  }
  friend bool operator==(const AreaVector&, const AreaVector&) = default;
};

/// Cyclically ordered components; node k joins component k and component k+1 (mod length).
/// A 2-cycle therefore has two distinct nodes, 0 and 1, between the same pair.
struct DivisorCycle {
  std::vector<HomologyClass> components;
  AreaVector areas;

  std::size_t length() const noexcept { return components.size(); }
  int rank() const noexcept { return areas.rank(); }
  Rational area(std::size_t i) const { return areas.area(components.at(i)); }
  std::pair<std::size_t, std::size_t> node(std::size_t k) const { return {k, (k + 1) % length()}; }
  std::vector<std::pair<std::size_t, std::size_t>> nodes() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t k = 0; k < length(); ++k) out.push_back(node(k));
    return out;
  }
  friend bool operator==(const DivisorCycle&, const DivisorCycle&) = default;
};

struct CycleReport {
  bool ok = true;
  std::vector<std::string> issues;
  long charge = 0;
  bool toric = false;

  void fail(std::string s) {
    ok = false;
    issues.push_back(std::move(s));
  }
};

/// q(D) = 12 - D^2 - length, with D = sum of components.
inline long charge(const DivisorCycle& d) {
  HomologyClass sum = HomologyClass::zero(d.rank());
  for (const auto& c : d.components) sum += c;
  return 12 - self_intersection(sum) - static_cast<long>(d.length());
}

inline CycleReport validate_cycle(const DivisorCycle& d) {
  CycleReport r;
  const int n = d.rank();
  if (d.length() < 2) {
    r.fail("cycle needs at least two components");
    return r;
  }
  for (std::size_t i = 0; i < d.length(); ++i)
    if (d.components[i].rank() != n) {
      r.fail("component " + std::to_string(i) + " has rank " + std::to_string(d.components[i].rank()) +
             ", expected " + std::to_string(n));
      return r;
    }
  if (d.areas.c <= 0) r.fail("omega(H) must be positive");
  for (int i = 1; i <= n; ++i)
    if (d.areas.delta(i) <= 0) r.fail("omega(E" + std::to_string(i) + ") must be positive");
  HomologyClass sum = HomologyClass::zero(n);
  for (const auto& c : d.components) sum += c;
  if (sum != HomologyClass::c1(n)) r.fail("components sum to " + to_string(sum) + ", not c1 = " + to_string(HomologyClass::c1(n)));
  const auto c1 = HomologyClass::c1(n);
  for (std::size_t i = 0; i < d.length(); ++i) {
    const auto& c = d.components[i];
    if (pairing(c1, c) != self_intersection(c) + 2)
      r.fail("component " + std::to_string(i) + " (" + to_string(c) + ") violates adjunction");
    if (d.area(i) <= 0) r.fail("component " + std::to_string(i) + " has non-positive area");
  }
  const std::size_t len = d.length();
  if (len == 2) {
    if (pairing(d.components[0], d.components[1]) != 2) r.fail("two-component cycle must pair to 2");
  } else {
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = i + 1; j < len; ++j) {
        bool adjacent = j == i + 1 || (i == 0 && j == len - 1);
        long p = pairing(d.components[i], d.components[j]);
        if (adjacent && p != 1)
          r.fail("adjacent components " + std::to_string(i) + "," + std::to_string(j) + " pair to " + std::to_string(p));
        if (!adjacent && p != 0)
          r.fail("non-adjacent components " + std::to_string(i) + "," + std::to_string(j) + " pair to " +
                 std::to_string(p));
      }
  }
  if (r.ok) {
    r.charge = charge(d);
    r.toric = r.charge == 0;
  }
  return r;
}

/// True iff the framing areas are reduced: sorted deltas and c dominating the top three (two when n = 2).
/// For n = 1 the only requirement is c > delta_1.
inline bool is_reduced(const AreaVector& a) {
  const int n = a.rank();
  for (int i = 1; i < n; ++i)
    if (a.delta(i) < a.delta(i + 1)) return false;
  if (n >= 3) return a.c >= a.delta(1) + a.delta(2) + a.delta(3);
  if (n == 2) return a.c >= a.delta(1) + a.delta(2);
  if (n == 1) return a.c > a.delta(1);
  return true;
}

/// Membership in the c1-nef slice: sum of deltas below 3c. Requires reduced areas.
/// Reduced areas that are a symplectic class: every exceptional class has positive area.
/// Only H-E1 (n = 1) and H-E1-E2 (n = 2) can reach zero on the reduced cone.
inline bool is_symplectic(const AreaVector& a) {
  if (!is_reduced(a) || a.c <= 0) return false;
  for (const auto& d : a.deltas)
    if (d <= 0) return false;
  if (a.rank() == 2) return a.c > a.delta(1) + a.delta(2);
  return true;
}

inline bool in_c1_nef(const AreaVector& a) {
  if (!is_reduced(a)) throw Error("homology", "in_c1_nef: areas are not reduced");
  Rational s = 0;
  for (const auto& d : a.deltas) s += d;
  return s < 3 * a.c;
}

struct BlowupStep {
  enum class Kind { Toric, NonToric };
  Kind kind = Kind::NonToric;
  /// Node id for toric steps, component id for non-toric ones.
  std::size_t location = 0;
  Rational size;
  /// Index of the exceptional class created by this step.
  int index = 0;
  friend bool operator==(const BlowupStep&, const BlowupStep&) = default;
};

struct BlowupPath {
  DivisorCycle start;
  std::vector<BlowupStep> steps;
};

inline std::string to_string(BlowupStep::Kind k) { return k == BlowupStep::Kind::Toric ? "toric" : "nontoric"; }

/// Toric blowup at node k inserts E_new between its two components (at the end for the
/// wrap-around node); non-toric blowup subtracts E_new from one component.
inline DivisorCycle blowup(const DivisorCycle& d, const BlowupStep& step) {
  const int n = d.rank() + 1;
  if (step.index != n) throw Error("blowup", "new class index must be " + std::to_string(n));
  if (step.size <= 0) throw Error("blowup", "blowup size must be positive");
  DivisorCycle out;
  out.areas = d.areas;
  out.areas.deltas.push_back(step.size);
  for (const auto& c : d.components) out.components.push_back(c.extended(n));
  const auto e = HomologyClass::E(n, n);
  if (step.kind == BlowupStep::Kind::Toric) {
    if (step.location >= d.length()) throw Error("blowup", "node id out of range");
    auto [a, b] = d.node(step.location);
    if (!(step.size < d.area(a)) || !(step.size < d.area(b)))
      throw Error("blowup", "toric blowup size " + to_string(step.size) + " not below both adjacent areas");
    out.components[a] -= e;
    out.components[b] -= e;
    out.components.insert(out.components.begin() + static_cast<std::ptrdiff_t>(step.location) + 1, e);
  } else {
    if (step.location >= d.length()) throw Error("blowup", "component id out of range");
    if (!(step.size < d.area(step.location)))
      throw Error("blowup", "non-toric blowup size " + to_string(step.size) + " not below component area");
    out.components[step.location] -= e;
  }
  return out;
}

/// Blows down E_k, k = current rank. Returns the cycle and the step recreating the input.
inline std::pair<DivisorCycle, BlowupStep> blowdown(const DivisorCycle& d, int k) {
  const int n = d.rank();
  if (k != n) throw Error("blowdown", "only the maximal index E" + std::to_string(n) + " may be blown down");
  if (n < 2) throw Error("blowdown", "blowdown below rank 1 leaves the framed family");
  const auto e = HomologyClass::E(n, n);
  BlowupStep step;
  step.index = n;
  step.size = d.areas.delta(n);
  DivisorCycle out;
  out.areas = d.areas;
  out.areas.deltas.pop_back();
  auto it = std::find(d.components.begin(), d.components.end(), e);
  if (it != d.components.end()) {
    if (d.length() < 3) throw Error("blowdown", "toric blowdown would leave fewer than two components");
    auto pos = static_cast<std::size_t>(it - d.components.begin());
    const std::size_t len = d.length();
    std::size_t left = (pos + len - 1) % len, right = (pos + 1) % len;
    if (d.components[left].e(n) != -1 || d.components[right].e(n) != -1)
      throw Error("blowdown", "E" + std::to_string(n) + " neighbours do not meet it once");
    for (std::size_t i = 0; i < len; ++i) {
      if (i == pos) continue;
      auto c = d.components[i];
      if (i == left || i == right) c.e(n) += 1;
      if (c.e(n) != 0) throw Error("blowdown", "E" + std::to_string(n) + " coefficient left on component");
      out.components.push_back(c.truncated());
    }
    step.kind = BlowupStep::Kind::Toric;
    // New node between the former neighbours.
    step.location = pos == 0 ? out.length() - 1 : pos - 1;
  } else {
    std::optional<std::size_t> host;
    for (std::size_t i = 0; i < d.length(); ++i) {
      long p = pairing(d.components[i], e);
      if (p == 0) continue;
      if (p != 1 || host) throw Error("blowdown", "E" + std::to_string(n) + " is neither a component nor non-torically placed");
      host = i;
    }
    if (!host) throw Error("blowdown", "E" + std::to_string(n) + " meets no component");
    for (std::size_t i = 0; i < d.length(); ++i) {
      auto c = d.components[i];
      if (i == *host) c.e(n) += 1;
      out.components.push_back(c.truncated());
    }
    step.kind = BlowupStep::Kind::NonToric;
    step.location = *host;
  }
  auto rep = validate_cycle(out);
  if (!rep.ok) throw Error("blowdown", "result is not a log Calabi-Yau cycle: " + rep.issues.front());
  return {out, step};
}

/// (-1)-class of c1-degree 1 with positive area meeting exactly one component, once.
inline bool is_nontoric_exceptional(const HomologyClass& s, const DivisorCycle& d) {
  if (s.rank() != d.rank()) return false;
  if (self_intersection(s) != -1) return false;
  if (pairing(HomologyClass::c1(d.rank()), s) != 1) return false;
  if (d.areas.area(s) <= 0) return false;
  int hits = 0;
  for (const auto& c : d.components) {
    long p = pairing(c, s);
    if (p == 0) continue;
    if (p != 1) return false;
    ++hits;
  }
  return hits == 1;
}

/// Cyclic (self-intersection, area) data with optional labels per component.
struct SequenceCycle {
  std::vector<long> s;
  std::vector<Rational> areas;
  std::vector<std::string> labels;

  std::size_t length() const noexcept { return s.size(); }
  friend bool operator==(const SequenceCycle&, const SequenceCycle&) = default;
};

inline SequenceCycle s_area_sequences(const DivisorCycle& d, bool validate = true) {
  if (validate) {
    auto r = validate_cycle(d);
    if (!r.ok) throw Error("sequences", "invalid cycle: " + r.issues.front());
  }
  SequenceCycle out;
  for (std::size_t i = 0; i < d.length(); ++i) {
    out.s.push_back(self_intersection(d.components[i]));
    out.areas.push_back(d.area(i));
    out.labels.push_back("C" + std::to_string(i));
  }
  return out;
}

/// Charge of a cycle read from its self-intersections: 12 - sum s - 3 length.
inline long sequence_charge(const SequenceCycle& c) {
  long s = 0;
  for (auto v : c.s) s += v;
  return 12 - s - 3 * static_cast<long>(c.length());
}

/// Rotation/reflection mapping: b[i] corresponds to a[(offset + sign*i) mod L].
struct CycleAlignment {
  std::size_t offset = 0;
  bool reflected = false;
  std::size_t map(std::size_t i, std::size_t len) const {
    return reflected ? (offset + len - i % len) % len : (offset + i) % len;
  }
};

inline std::optional<CycleAlignment> align_cycles(const SequenceCycle& a, const SequenceCycle& b, bool with_labels) {
  const std::size_t len = a.length();
  if (len != b.length()) return std::nullopt;
  if (with_labels && (a.labels.size() != len || b.labels.size() != len)) return std::nullopt;
  for (int refl = 0; refl < 2; ++refl)
    for (std::size_t off = 0; off < len; ++off) {
      CycleAlignment al{off, refl == 1};
      bool ok = true;
      for (std::size_t i = 0; i < len && ok; ++i) {
        std::size_t j = al.map(i, len);
        ok = a.s[j] == b.s[i] && a.areas[j] == b.areas[i] && (!with_labels || a.labels[j] == b.labels[i]);
      }
      if (ok) return al;
    }
  return std::nullopt;
}

/// Equality of (s, area) sequences up to cyclic and anti-cyclic permutation.
inline bool taut_equal(const SequenceCycle& a, const SequenceCycle& b) { return align_cycles(a, b, false).has_value(); }

/// Toric blowdown on sequence data: removes component `pos` (a (-1)-curve), neighbours gain +1 and its area.
inline SequenceCycle sequence_toric_blowdown(const SequenceCycle& c, std::size_t pos) {
  const std::size_t len = c.length();
  if (len < 3) throw Error("blowdown", "toric blowdown needs at least three components");
  if (c.s.at(pos) != -1) throw Error("blowdown", "component " + c.labels.at(pos) + " is not a (-1)-curve");
  SequenceCycle out;
  std::size_t left = (pos + len - 1) % len, right = (pos + 1) % len;
  for (std::size_t i = 0; i < len; ++i) {
    if (i == pos) continue;
    long s = c.s[i];
    Rational a = c.areas[i];
    if (i == left) {
      s += 1;
      a += c.areas[pos];
    }
    if (i == right) {
      s += 1;
      a += c.areas[pos];
    }
    out.s.push_back(s);
    out.areas.push_back(a);
    out.labels.push_back(c.labels.empty() ? std::string() : c.labels[i]);
  }
  return out;
}

inline std::string to_string(const SequenceCycle& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.length(); ++i) {
    if (i) out += ", ";
    if (i < c.labels.size() && !c.labels[i].empty()) out += c.labels[i] + ":";
    out += "(" + std::to_string(c.s[i]) + "," + to_string(c.areas[i]) + ")";
  }
  return out + "]";
}

}  // namespace atf
