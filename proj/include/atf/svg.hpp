#pragma once

// SVG rendering of a bitten diagram: polygon, bite triangles, cuts as dashed segments, nodes as crosses.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "atf/diagram.hpp"

namespace atf {

struct SvgStyle {
  double size = 640;
  double margin = 48;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const BittenDiagram& d, const SvgStyle& style = {}) {
  const auto& poly = d.polygon;
  double lo_x = poly.vertex(0).x.get_d(), hi_x = lo_x, lo_y = poly.vertex(0).y.get_d(), hi_y = lo_y;
  for (const auto& v : poly.vertices()) {
    lo_x = std::min(lo_x, v.x.get_d()), hi_x = std::max(hi_x, v.x.get_d());
    lo_y = std::min(lo_y, v.y.get_d()), hi_y = std::max(hi_y, v.y.get_d());
  }
  const double scale = (style.size - 2 * style.margin) / std::max(hi_x - lo_x, hi_y - lo_y);
  const double height = (hi_y - lo_y) * scale + 2 * style.margin;
  auto X = [&](const RationalPoint& p) { return detail::fmt(style.margin + (p.x.get_d() - lo_x) * scale); };
  auto Y = [&](const RationalPoint& p) { return detail::fmt(height - style.margin - (p.y.get_d() - lo_y) * scale); };
  auto line = [&](std::ostringstream& o, const RationalPoint& a, const RationalPoint& b, const char* extra) {
    o << "  <line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\" " << extra
      << "/>\n";
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(style.size) << "\" height=\""
    << detail::fmt(height) << "\" font-family=\"monospace\" font-size=\"12\">\n";
  o << "  <polygon points=\"";
  for (std::size_t i = 0; i < poly.size(); ++i) o << (i ? " " : "") << X(poly.vertex(i)) << "," << Y(poly.vertex(i));
  o << "\" fill=\"#eef3fb\" stroke=\"#1b2a49\" stroke-width=\"2\"/>\n";

  for (std::size_t t = 0; t < d.triangles.size(); ++t) {
    const auto& tri = d.triangles[t];
    const auto a = tri.apex, f0 = tri.base_start(poly), f1 = tri.base_end(poly);
    const auto side = d.cut(t);
    if (side == CutSide::Bite) {
      o << "  <polygon points=\"" << X(f0) << "," << Y(f0) << " " << X(a) << "," << Y(a) << " " << X(f1) << ","
        << Y(f1) << "\" fill=\"#ffffff\" stroke=\"none\"/>\n";
      line(o, f0, a, "stroke=\"#b03a2e\" stroke-dasharray=\"6 4\"");
      line(o, a, f1, "stroke=\"#b03a2e\" stroke-dasharray=\"6 4\"");
    } else {
      const auto p = poly.edge_direction(tri.edge).as_point();
      const auto b = detail::ray_exit(poly, a, side == CutSide::Right ? p : RationalPoint{-p.x, -p.y}).second;
      line(o, a, b, "stroke=\"#b03a2e\" stroke-dasharray=\"6 4\"");
    }
    const double r = 5;
    const double ax = std::stod(X(a)), ay = std::stod(Y(a));
    o << "  <path d=\"M" << detail::fmt(ax - r) << "," << detail::fmt(ay - r) << " L" << detail::fmt(ax + r) << ","
      << detail::fmt(ay + r) << " M" << detail::fmt(ax - r) << "," << detail::fmt(ay + r) << " L"
      << detail::fmt(ax + r) << "," << detail::fmt(ay - r) << "\" stroke=\"#b03a2e\" stroke-width=\"2\"/>\n";
  }

  for (std::size_t e = 0; e < poly.size(); ++e) {
    const auto mid = make_rational(1, 2) * (poly.vertex(e) + poly.vertex(e + 1));
    const auto n = poly.inward_normal(e);
    const double nx = static_cast<double>(n.a), ny = static_cast<double>(n.b);
    const double len = std::sqrt(nx * nx + ny * ny);
    const double tx = std::stod(X(mid)) - 16 * nx / len, ty = std::stod(Y(mid)) + 16 * ny / len;
    o << "  <text x=\"" << detail::fmt(tx) << "\" y=\"" << detail::fmt(ty)
      << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << detail::escape(poly.label(e)) << "</text>\n";
  }

  std::string caption = "extra: " + to_string(d.extra_kind());
  for (const auto& f : d.fills) caption += "  fill " + f.edge + " " + to_string(f.size);
  o << "  <text x=\"" << detail::fmt(style.margin / 2) << "\" y=\"" << detail::fmt(height - 8) << "\">"
    << detail::escape(caption) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace atf
