// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// JSON forms:
//   rational   "p/q" string (integers and decimal literals accepted on input)
//   polygon    {"vertices": [["p/q", "p/q"], ...]}
//   shape      tagged objects, e.g. {"type": "box", "lo": [...], "hi": [...]}
//   grid set   {"dim", "h", "origin", "extent", "runs": [[start, len], ...]}
//              with runs over the row-major flattening of the extent box

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmink/exact2d.hpp"
#include "bmink/rational.hpp"
#include "bmink/shape_spec.hpp"
#include "bmink/voxel.hpp"

namespace bmink::io {

using nlohmann::json;

inline json rational_to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return Rational::parse(j.dump());
  throw std::invalid_argument("expected a rational, got " + j.dump());
}

inline json rationals_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rational_to_json(r));
  return out;
}

inline std::vector<Rational> rationals_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

inline json point_to_json(const exact2d::Point2& p) { return json::array({p.x.str(), p.y.str()}); }

inline exact2d::Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected a 2D point");
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline json polygon_to_json(const exact2d::ConvexPolygon& p) {
  json verts = json::array();
  for (const auto& v : p.vertices()) verts.push_back(point_to_json(v));
  return json{{"vertices", verts}};
}

/// Loads and canonicalizes a polygon.
inline exact2d::ConvexPolygon polygon_from_json(const json& j) {
  if (!j.contains("vertices")) throw std::invalid_argument("polygon JSON needs a \"vertices\" array");
  std::vector<exact2d::Point2> pts;
  for (const auto& v : j.at("vertices")) pts.push_back(point_from_json(v));
  return exact2d::ConvexPolygon(pts);
}

inline json shape_to_json(const ShapeSpec& s) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BoxShape>) {
          return {{"type", "box"}, {"lo", rationals_to_json(n.lo)}, {"hi", rationals_to_json(n.hi)}};
        } else if constexpr (std::is_same_v<T, BallShape>) {
          return {{"type", "ball"}, {"center", rationals_to_json(n.center)}, {"radius", n.radius.str()}};
        } else if constexpr (std::is_same_v<T, SimplexShape>) {
          return {{"type", "simplex"}, {"dim", n.dim}};
        } else if constexpr (std::is_same_v<T, PolygonShape>) {
          json verts = json::array();
          for (const auto& v : n.vertices) verts.push_back(point_to_json(v));
          return {{"type", "polygon"}, {"vertices", verts}};
        } else if constexpr (std::is_same_v<T, ScaledShape>) {
          return {{"type", "scaled"}, {"factor", n.factor.str()}, {"of", shape_to_json(*n.of)}};
        } else if constexpr (std::is_same_v<T, TranslatedShape>) {
          return {{"type", "translated"}, {"by", rationals_to_json(n.offset)}, {"of", shape_to_json(*n.of)}};
        } else if constexpr (std::is_same_v<T, ReflectedShape>) {
          return {{"type", "reflected"}, {"of", shape_to_json(*n.of)}};
        } else {
          json parts = json::array();
          for (const auto& p : n.parts) parts.push_back(shape_to_json(*p));
          return {{"type", "union"}, {"of", parts}};
        }
      },
      s.node);
}

/// Accepts a tagged shape object or a bare polygon {"vertices": ...}.
inline ShapePtr shape_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("shape JSON must be an object");
  if (!j.contains("type")) {
    if (j.contains("vertices")) return make_polygon(polygon_from_json(j));
    throw std::invalid_argument("shape JSON needs a \"type\" field");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "box") return make_box(rationals_from_json(j.at("lo")), rationals_from_json(j.at("hi")));
  if (type == "ball") return make_ball(rationals_from_json(j.at("center")), rational_from_json(j.at("radius")));
  if (type == "simplex") return make_simplex(j.at("dim").get<int>());
  if (type == "polygon") return make_polygon(polygon_from_json(j));
  if (type == "scaled") return make_scaled(shape_from_json(j.at("of")), rational_from_json(j.at("factor")));
  if (type == "translated") return make_translated(shape_from_json(j.at("of")), rationals_from_json(j.at("by")));
  if (type == "reflected") return make_reflected(shape_from_json(j.at("of")));
  if (type == "union") {
    std::vector<ShapePtr> parts;
    for (const auto& p : j.at("of")) parts.push_back(shape_from_json(p));
    return make_union(std::move(parts));
  }
  throw std::invalid_argument("unknown shape type: " + type);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline ShapePtr load_shape(const std::string& path) { return shape_from_json(read_json_file(path)); }

/// Run-length encoded export of a grid set.
inline json grid_to_json(const voxel::GridSet& g) {
  json runs = json::array();
  const std::int64_t row_bits = g.extent()[0];
  std::int64_t open = -1;
  std::int64_t pos = 0;
  for (std::int64_t r = 0; r < g.rows(); ++r) {
    const std::uint64_t* w = g.row(r);
    for (std::int64_t i = 0; i < row_bits; ++i, ++pos) {
      bool on = (w[i >> 6] >> (i & 63)) & 1U;
      if (on && open < 0) open = pos;
      if (!on && open >= 0) {
        runs.push_back({open, pos - open});
        open = -1;
      }
    }
  }
  if (open >= 0) runs.push_back({open, pos - open});
  json origin = json::array(), extent = json::array();
  for (int a = 0; a < g.dim(); ++a) {
    origin.push_back(g.origin()[a]);
    extent.push_back(g.extent()[a]);
  }
  return {{"dim", g.dim()}, {"h", g.h()}, {"origin", origin}, {"extent", extent}, {"runs", runs}};
}

inline voxel::GridSet grid_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const double h = j.at("h").get<double>();
  voxel::Index origin{}, extent{};
  for (int a = 0; a < dim; ++a) {
    origin[a] = j.at("origin").at(static_cast<std::size_t>(a)).get<std::int64_t>();
    extent[a] = j.at("extent").at(static_cast<std::size_t>(a)).get<std::int64_t>();
  }
  std::vector<voxel::Index> cells;
  for (const auto& run : j.at("runs")) {
    std::int64_t start = run.at(0).get<std::int64_t>(), len = run.at(1).get<std::int64_t>();
    for (std::int64_t p = start; p < start + len; ++p) {
      voxel::Index c{};
      std::int64_t rest = p;
      for (int a = 0; a < dim; ++a) {
        c[a] = origin[a] + rest % extent[a];
        rest /= extent[a];
      }
      cells.push_back(c);
    }
  }
  return voxel::GridSet::from_cells(dim, h, cells);
}

}  // namespace bmink::io
