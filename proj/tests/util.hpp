#pragma once

#include <string>
#include <vector>

#include "atf/homology.hpp"

namespace testutil {

inline atf::Rational R(const char* s) { return atf::parse_rational(s); }

inline atf::DivisorCycle cyc(const std::vector<std::string>& classes, const std::vector<std::string>& deltas,
                             const char* c = "1") {
  atf::DivisorCycle d;
  d.areas.c = R(c);
  for (const auto& s : deltas) d.areas.deltas.push_back(atf::parse_rational(s));
  for (const auto& s : classes) d.components.push_back(atf::parse_class(d.areas.rank(), s));
  return d;
}

inline atf::HomologyClass cl(int n, const char* s) { return atf::parse_class(n, s); }

}  // namespace testutil
