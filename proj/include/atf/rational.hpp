#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace atf {

/// Exact rational scalar used everywhere in the core.
using Rational = mpq_class;

/// Base error type. `stage` names the pipeline stage that rejected the input.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Raised for malformed serialized input (CLI exit code 2).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};

/// Collected pass/fail findings of a validation predicate.
struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;

  void fail(std::string msg) {
    ok = false;
    issues.push_back(std::move(msg));
  }
  explicit operator bool() const noexcept { return ok; }
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error("rational", "zero denominator");
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

/// Parses "p/q", "p" or a finite decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational");
  auto dot = s.find('.');
  try {
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw ParseError("mixed decimal/fraction: " + s);
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::string den = "1" + std::string(s.size() - dot - 1, '0');
      if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad decimal: " + s);
      Rational r{mpz_class(digits), mpz_class(den)};
      r.canonicalize();
      return r;
    }
    Rational r;
    if (r.set_str(s, 10) != 0) throw ParseError("bad rational: " + s);
    if (r.get_den() == 0) throw ParseError("zero denominator: " + s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational: " + s);
  }
}

/// Lowest-terms text form, "p/q" or "p" for integers.
inline std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_str();
}

inline Rational rabs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline const Rational& rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace atf
