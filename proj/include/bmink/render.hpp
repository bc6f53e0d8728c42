// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// Three-panel SVG scene for a convex pair:
//   T  |  K with the dashed erosion inset K (-) T  |  dK + dT, hatched,
// with the hole drawn white under a heavy outline.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bmink/exact2d.hpp"
#include "bmink/shape_spec.hpp"

namespace bmink::render {

using exact2d::ConvexPolygon;

namespace detail {

struct Frame {
  double x0, y0, scale, left, top;
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

inline std::string path(const ConvexPolygon& p, const Frame& f) {
  std::string d;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = f.left + (p[i].x.to_double() - f.x0) * f.scale;
    const double y = f.top - (p[i].y.to_double() - f.y0) * f.scale;
    d += (i == 0 ? "M" : " L") + num(x) + "," + num(y);
  }
  return d + " Z";
}

// Fits the bounding box of `p` into a square panel.
inline Frame fit(const ConvexPolygon& p, double left, double size, double pad) {
  double lo_x = p[0].x.to_double(), hi_x = lo_x, lo_y = p[0].y.to_double(), hi_y = lo_y;
  for (const auto& v : p.vertices()) {
    lo_x = std::min(lo_x, v.x.to_double());
    hi_x = std::max(hi_x, v.x.to_double());
    lo_y = std::min(lo_y, v.y.to_double());
    hi_y = std::max(hi_y, v.y.to_double());
  }
  const double span = std::max(hi_x - lo_x, hi_y - lo_y);
  const double scale = (size - 2 * pad) / span;
  const double ox = left + pad + ((size - 2 * pad) - (hi_x - lo_x) * scale) / 2;
  const double oy = size - pad - ((size - 2 * pad) - (hi_y - lo_y) * scale) / 2;
  return {lo_x, lo_y, scale, ox, oy};
}

}  // namespace detail

/// The scene as a string; deterministic in its inputs.
inline std::string decomposition_svg(const ConvexPolygon& k, const ConvexPolygon& t) {
  constexpr double kPanel = 260, kPad = 20;
  const ConvexPolygon sum = exact2d::minkowski_sum(k, t);
  const exact2d::ErosionResult kt = exact2d::erode(k, t);
  const exact2d::ErosionResult tk = exact2d::erode(t, k);
  const auto& hole = kt.is_empty() ? tk.region : kt.region;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 3 * kPanel << "\" height=\"" << kPanel + 30
    << "\" viewBox=\"0 0 " << 3 * kPanel << " " << kPanel + 30 << "\">\n";
  o << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
       "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#555\" "
       "stroke-width=\"1.2\"/></pattern></defs>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const detail::Frame ft = detail::fit(t, 0, kPanel, kPad);
  o << "<g id=\"panel-t\">\n<path d=\"" << detail::path(t, ft)
    << "\" fill=\"#cfe0f3\" stroke=\"#1f4e79\" stroke-width=\"2\"/>\n";
  o << "<text x=\"" << kPanel / 2 << "\" y=\"" << kPanel + 20 << "\" text-anchor=\"middle\" font-family=\"serif\">T</text>\n</g>\n";

  const detail::Frame fk = detail::fit(k, kPanel, kPanel, kPad);
  o << "<g id=\"panel-k\">\n<path d=\"" << detail::path(k, fk)
    << "\" fill=\"#e3efd9\" stroke=\"#38761d\" stroke-width=\"2\"/>\n";
  if (!kt.is_empty()) {
    o << "<path id=\"erosion\" d=\"" << detail::path(*kt.region, fk)
      << "\" fill=\"none\" stroke=\"#38761d\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
  }
  o << "<text x=\"" << 1.5 * kPanel << "\" y=\"" << kPanel + 20
    << "\" text-anchor=\"middle\" font-family=\"serif\">K and K⊖T</text>\n</g>\n";

  const detail::Frame fs = detail::fit(sum, 2 * kPanel, kPanel, kPad);
  o << "<g id=\"panel-sum\">\n<path d=\"" << detail::path(sum, fs)
    << "\" fill=\"url(#hatch)\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  if (hole) {
    o << "<path id=\"hole\" d=\"" << detail::path(*hole, fs)
      << "\" fill=\"white\" stroke=\"black\" stroke-width=\"3\"/>\n";
  }
  o << "<text x=\"" << 2.5 * kPanel << "\" y=\"" << kPanel + 20
    << "\" text-anchor=\"middle\" font-family=\"serif\">∂K+∂T</text>\n</g>\n";
  o << "</svg>\n";
  return o.str();
}

/// Renders 2D convex specs (balls become 64-gons) to `out_path`.
inline void render_decomposition_svg(const ShapeSpec& k, const ShapeSpec& t, const std::string& out_path) {
  if (shape_dim(k) != 2 || shape_dim(t) != 2) throw std::invalid_argument("render needs 2D shapes");
  const std::string svg = decomposition_svg(to_polygon(k), to_polygon(t));
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + out_path);
  f << svg;
  if (!f.flush()) throw std::runtime_error("write failed on " + out_path);
}

}  // namespace bmink::render
