#pragma once

// Randomized sweep over one case/branch variant. Each sample rebuilds the chopped
// trapezoid and compares its reading with the toric model, then realizes.

#include <string>
#include <vector>

#include "atf/diagram.hpp"
#include "atf/generate.hpp"
#include "atf/pipeline.hpp"

namespace atf {

struct SweepResult {
  Variant variant;
  int samples = 0;
  int theta_failures = 0;
  int toric_failures = 0;
  int realize_failures = 0;
  int roundtrip_failures = 0;
  std::vector<std::string> examples;  ///< first few failing inputs

  bool ok() const { return theta_failures + toric_failures + realize_failures + roundtrip_failures == 0; }
};

inline SweepResult sweep_variant(const Variant& v, int samples, unsigned long seed, int max_rank = 10,
                                 std::size_t keep_examples = 3) {
  SweepResult out;
  out.variant = v;
  InstanceGenerator gen(seed, max_rank);
  auto note = [&](const DivisorCycle& d, const std::string& what) {
    if (out.examples.size() >= keep_examples) return;
    std::string s = what + ": [";
    for (std::size_t i = 0; i < d.length(); ++i) s += (i ? ", " : "") + to_string(d.components[i]);
    s += "] deltas [";
    for (std::size_t i = 0; i < d.areas.deltas.size(); ++i) s += (i ? ", " : "") + to_string(d.areas.deltas[i]);
    out.examples.push_back(s + "]");
  };
  for (int k = 0; k < samples; ++k) {
    const auto g = gen.draw(v);
    ++out.samples;
    try {
      const auto r = reduce(g.cycle);
      const auto base = make_trapezoid(r.plan.params);
      LatticePolygon poly(base.vertices(), {r.plan.edge_tags.begin(), r.plan.edge_tags.end()});
      for (const auto& c : r.plan.chops)
        for (std::size_t x = 0; x < poly.size(); ++x) {
          const auto& a = poly.label(poly.prev(x));
          const auto& b = poly.label(x);
          if ((a == c.left && b == c.right) || (a == c.right && b == c.left)) {
            poly = chop_corner(poly, x, c.size, c.label);
            break;
          }
        }
      const auto reading = polygon_reading(poly);
      if (!taut_equal(reading, r.toric.sequences) || !align_cycles(reading, r.toric.sequences, true)) {
        ++out.toric_failures;
        note(g.cycle, "toric model");
      }
    } catch (const Error& e) {
      ++out.toric_failures;
      note(g.cycle, std::string("toric model: ") + e.what());
    }
    try {
      const auto r = realize(g.cycle, {std::nullopt, false});
      if (!r.report.lemma_holds) {
        ++out.theta_failures;
        note(g.cycle, "theta (" + to_string(r.report.theta.theta1) + ", " + to_string(r.report.theta.theta2) +
                          ") vs (x, y) = (" + to_string(r.report.params.x) + ", " + to_string(r.report.params.y) +
                          ")");
      }
      if (!r.report.roundtrip.ok) {
        ++out.roundtrip_failures;
        note(g.cycle, "round trip: " + r.report.roundtrip.message);
      }
    } catch (const Error& e) {
      ++out.realize_failures;
      note(g.cycle, std::string("realize: ") + e.what());
    }
  }
  return out;
}

}  // namespace atf
