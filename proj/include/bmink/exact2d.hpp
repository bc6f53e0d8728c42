// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// Exact rational engine for convex polygons in the plane: Minkowski sums,
// Minkowski differences, support values, areas and the equality-case
// classifier used by the inequality checkers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bmink/rational.hpp"

namespace bmink::exact2d {

struct Point2 {
  Rational x;
  Rational y;

  friend Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(const Rational& s, const Point2& p) { return {s * p.x, s * p.y}; }
  Point2 operator-() const { return {-x, -y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
  bool is_zero() const { return x.is_zero() && y.is_zero(); }
};

/// Lexicographic order on (x, y).
inline bool lex_less(const Point2& a, const Point2& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

inline Rational dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline Rational orient(const Point2& a, const Point2& b, const Point2& c) {
  return cross(b - a, c - a);
}

namespace detail {

// Andrew's monotone chain. Collinear points are dropped; output is
// counterclockwise starting at the lexicographic minimum.
inline std::vector<Point2> monotone_chain(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p).sign() <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = pts[i];
    while (k >= lower && orient(hull[k - 2], hull[k - 1], p).sign() <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace detail

/// Strictly convex polygon with exact rational vertices, stored
/// counterclockwise from the lexicographically smallest vertex. Two polygons
/// describe the same set iff their vertex lists are equal.
class ConvexPolygon {
 public:
  /// Builds a polygon from points in convex position (any order or
  /// orientation). Duplicates and collinear vertices are collapsed; a point
  /// strictly inside the hull is an error.
  explicit ConvexPolygon(const std::vector<Point2>& points) : vertices_(detail::monotone_chain(points)) {
    if (vertices_.size() < 3) throw std::invalid_argument("polygon has empty interior");
    for (const auto& p : points) {
      if (contains_strictly(p)) throw std::invalid_argument("points are not in convex position");
    }
  }

  /// Convex hull of arbitrary points; nullopt if the hull has no interior.
  static std::optional<ConvexPolygon> try_hull(std::vector<Point2> points) {
    auto hull = detail::monotone_chain(std::move(points));
    if (hull.size() < 3) return std::nullopt;
    return ConvexPolygon(std::move(hull), Canonical{});
  }

  static ConvexPolygon hull(std::vector<Point2> points) {
    auto p = try_hull(std::move(points));
    if (!p) throw std::invalid_argument("hull has empty interior");
    return *std::move(p);
  }

  /// Axis-aligned box [lo.x, hi.x] x [lo.y, hi.y].
  static ConvexPolygon box(const Point2& lo, const Point2& hi) {
    return ConvexPolygon({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
  }

  /// The square [-r, r]^2.
  static ConvexPolygon square(const Rational& r) { return box({-r, -r}, {r, r}); }

  /// conv{(0,0), (1,0), (0,1)}.
  static ConvexPolygon unit_simplex() { return ConvexPolygon({{0, 0}, {1, 0}, {0, 1}}); }

  /// Regular m-gon inscribed in the circle of the given radius. Vertex
  /// coordinates are snapped to the dyadic grid 2^-20 so the polygon stays
  /// exactly rational.
  static ConvexPolygon regular(int m, double radius, Point2 center = {0, 0}) {
    if (m < 3) throw std::invalid_argument("regular polygon needs at least 3 sides");
    if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
    constexpr double kGrid = 1048576.0;
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      double a = 2.0 * std::numbers::pi * i / m;
      auto snap = [&](double v) { return Rational(static_cast<long>(std::lround(v * kGrid)), 1L << 20); };
      pts.push_back(Point2{snap(radius * std::cos(a)), snap(radius * std::sin(a))} + center);
    }
    return hull(std::move(pts));
  }

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i % vertices_.size()]; }
  Point2 edge(std::size_t i) const { return (*this)[i + 1] - (*this)[i]; }

  /// Closed containment.
  bool contains(const Point2& p) const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (orient((*this)[i], (*this)[i + 1], p).sign() < 0) return false;
    }
    return true;
  }

  /// Containment in the interior.
  bool contains_strictly(const Point2& p) const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (orient((*this)[i], (*this)[i + 1], p).sign() <= 0) return false;
    }
    return true;
  }

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

 private:
  struct Canonical {};
  ConvexPolygon(std::vector<Point2> v, Canonical) : vertices_(std::move(v)) {}

  std::vector<Point2> vertices_;
};

// ---------------------------------------------------------------------------
// Scalar functionals

inline Rational area(const ConvexPolygon& p) {
  Rational twice;
  for (std::size_t i = 0; i < p.size(); ++i) twice += cross(p[i], p[i + 1]);
  return twice / Rational(2);
}

/// h_P(u) = max over vertices of <v, u>.
inline Rational support_value(const ConvexPolygon& p, const Point2& u) {
  if (u.is_zero()) throw std::invalid_argument("support direction must be non-zero");
  Rational best = dot(p[0], u);
  for (std::size_t i = 1; i < p.size(); ++i) best = std::max(best, dot(p[i], u));
  return best;
}

/// h_P(u) + h_P(-u). Scales with |u|; the direction is not normalized.
inline Rational width(const ConvexPolygon& p, const Point2& u) {
  return support_value(p, u) + support_value(p, -u);
}

// ---------------------------------------------------------------------------
// Transforms

struct ScaleBy {
  Rational factor;
};
struct TranslateBy {
  Point2 offset;
};
struct ReflectThroughOrigin {};
using Transform = std::variant<ScaleBy, TranslateBy, ReflectThroughOrigin>;

inline ConvexPolygon transform(const ConvexPolygon& p, const Transform& op) {
  std::vector<Point2> out;
  out.reserve(p.size());
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ScaleBy>) {
          if (t.factor.sign() <= 0) throw std::invalid_argument("scale factor must be positive");
          for (const auto& v : p.vertices()) out.push_back(t.factor * v);
        } else if constexpr (std::is_same_v<T, TranslateBy>) {
          for (const auto& v : p.vertices()) out.push_back(v + t.offset);
        } else {
          for (const auto& v : p.vertices()) out.push_back(-v);
        }
      },
      op);
  return ConvexPolygon::hull(std::move(out));
}

inline ConvexPolygon scale(const ConvexPolygon& p, const Rational& f) { return transform(p, ScaleBy{f}); }
inline ConvexPolygon translate(const ConvexPolygon& p, const Point2& v) { return transform(p, TranslateBy{v}); }
inline ConvexPolygon reflect(const ConvexPolygon& p) { return transform(p, ReflectThroughOrigin{}); }

// ---------------------------------------------------------------------------
// Minkowski sum

namespace detail {

// 0 for directions with angle in (-pi/2, pi/2], 1 for (pi/2, 3pi/2].
inline int half_of(const Point2& d) {
  return (d.x.sign() > 0 || (d.x.sign() == 0 && d.y.sign() > 0)) ? 0 : 1;
}

inline bool angle_less(const Point2& a, const Point2& b) {
  int ha = half_of(a), hb = half_of(b);
  if (ha != hb) return ha < hb;
  return cross(a, b).sign() > 0;
}

}  // namespace detail

/// Exact P + Q by merging the two edge sequences in angular order. Walking
/// starts at the sum of the lexicographic minima, which is the lexicographic
/// minimum of the sum; its outgoing edge has the smallest angle in
/// (-pi/2, 3pi/2].
inline ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
  std::vector<Point2> edges;
  edges.reserve(p.size() + q.size());
  for (std::size_t i = 0; i < p.size(); ++i) edges.push_back(p.edge(i));
  for (std::size_t i = 0; i < q.size(); ++i) edges.push_back(q.edge(i));
  std::stable_sort(edges.begin(), edges.end(), detail::angle_less);

  std::vector<Point2> out;
  out.reserve(edges.size());
  Point2 cur = p[0] + q[0];
  for (std::size_t i = 0; i < edges.size();) {
    Point2 step = edges[i++];
    // Parallel, same-direction edges fuse into one.
    while (i < edges.size() && !detail::angle_less(step, edges[i]) && cross(step, edges[i]).is_zero() &&
           dot(step, edges[i]).sign() > 0) {
      step = step + edges[i++];
    }
    out.push_back(cur);
    cur = cur + step;
  }
  return ConvexPolygon::hull(std::move(out));
}

// ---------------------------------------------------------------------------
// Minkowski difference

/// The Minkowski difference K (-) T = {x : x - T within int(K)} is open; its
/// closure is stored in `region`, and the set is empty exactly when that
/// closure has no interior.
struct ErosionResult {
  static constexpr const char* kOpennessNote =
      "region is the closure; the Minkowski difference itself is the interior of region";

  std::optional<ConvexPolygon> region;

  bool is_empty() const { return !region.has_value(); }
  Rational area() const { return region ? exact2d::area(*region) : Rational(0); }
};

namespace detail {

// Clips a convex point loop to the half-plane <x, u> <= c.
inline std::vector<Point2> clip(const std::vector<Point2>& poly, const Point2& u, const Rational& c) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    Rational sa = dot(a, u) - c;
    Rational sb = dot(b, u) - c;
    if (sa.sign() <= 0) out.push_back(a);
    if ((sa.sign() < 0 && sb.sign() > 0) || (sa.sign() > 0 && sb.sign() < 0)) {
      out.push_back(a + (sa / (sa - sb)) * (b - a));
    }
  }
  return out;
}

}  // namespace detail

/// Closure of K (-) T as the intersection of the half-planes
/// <x, u> <= h_K(u) - h_{-T}(u) over the outward edge normals u of K.
inline ErosionResult erode(const ConvexPolygon& k, const ConvexPolygon& t) {
  // Every admissible x satisfies x - t0 in K, so K + t0 bounds the region.
  std::vector<Point2> poly;
  poly.reserve(k.size());
  for (const auto& v : k.vertices()) poly.push_back(v + t[0]);
  for (std::size_t i = 0; i < k.size() && poly.size() >= 3; ++i) {
    Point2 d = k.edge(i);
    Point2 u{d.y, -d.x};
    Rational bound = support_value(k, u) - support_value(t, -u);
    poly = detail::clip(poly, u, bound);
  }
  return ErosionResult{ConvexPolygon::try_hull(std::move(poly))};
}

// ---------------------------------------------------------------------------
// Boundary sums

/// Pieces of the disjoint decomposition
/// A + B = (dA + dB) u (A (-) B) u (B (-) A), of which at most one hole is
/// non-empty.
struct BoundarySumParts {
  Rational sum_area;
  Rational hole_ab;
  Rational hole_ba;
  Rational boundary_area() const { return sum_area - hole_ab - hole_ba; }
};

inline BoundarySumParts boundary_sum_parts(const ConvexPolygon& a, const ConvexPolygon& b) {
  ErosionResult ab = erode(a, b);
  ErosionResult ba = erode(b, a);
  if (!ab.is_empty() && !ba.is_empty()) {
    throw std::logic_error("both Minkowski differences are non-empty");
  }
  return {area(minkowski_sum(a, b)), ab.area(), ba.area()};
}

/// vol(dK + dT).
inline Rational boundary_sum_area(const ConvexPolygon& k, const ConvexPolygon& t) {
  return boundary_sum_parts(k, t).boundary_area();
}

/// vol(lambda dK + (1 - lambda) dT) for 0 < lambda < 1.
inline Rational boundary_sum_volume(const ConvexPolygon& k, const ConvexPolygon& t, const Rational& lambda) {
  if (lambda.sign() <= 0 || lambda >= Rational(1)) throw std::invalid_argument("lambda must lie in (0,1)");
  return boundary_sum_area(scale(k, lambda), scale(t, Rational(1) - lambda));
}

/// Sufficient condition for dK + dT = K + T: K is wider than T in one edge
/// normal direction and narrower in another. Only edge normals of the two
/// polygons are probed, so `false` is inconclusive.
inline bool widths_cross(const ConvexPolygon& k, const ConvexPolygon& t) {
  bool k_wider = false, t_wider = false;
  auto probe = [&](const ConvexPolygon& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      Point2 d = p.edge(i);
      Point2 u{d.y, -d.x};
      auto c = width(k, u) <=> width(t, u);
      k_wider |= c > 0;
      t_wider |= c < 0;
    }
  };
  probe(k);
  probe(t);
  return k_wider && t_wider;
}

// ---------------------------------------------------------------------------
// Equality classification

enum class EqualityTag { Translate, HomotheticCentrallySymmetric2D, NoEquality };

inline const char* to_string(EqualityTag t) {
  switch (t) {
    case EqualityTag::Translate: return "Translate";
    case EqualityTag::HomotheticCentrallySymmetric2D: return "HomotheticCentrallySymmetric2D";
    case EqualityTag::NoEquality: return "NoEquality";
  }
  return "?";
}

struct EqualityClass {
  EqualityTag tag = EqualityTag::NoEquality;
  std::optional<Point2> translation;  // T = ratio * K + translation
  std::optional<Rational> ratio;
};

/// If T = s*K + x for some s > 0, returns (s, x). Canonical vertex order
/// is preserved by positive homotheties, so vertices correspond by index.
inline std::optional<std::pair<Rational, Point2>> homothety(const ConvexPolygon& k, const ConvexPolygon& t) {
  if (k.size() != t.size()) return std::nullopt;
  Point2 dk = k.edge(0), dt = t.edge(0);
  Rational s = dk.x.is_zero() ? dt.y / dk.y : dt.x / dk.x;
  if (s.sign() <= 0) return std::nullopt;
  Point2 x = t[0] - s * k[0];
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(t[i] == s * k[i] + x)) return std::nullopt;
  }
  return std::pair{s, x};
}

/// Whether K = -K + y for some y (returned as y).
inline std::optional<Point2> central_symmetry(const ConvexPolygon& k) {
  if (k.size() % 2 != 0) return std::nullopt;
  std::size_t half = k.size() / 2;
  Point2 y = k[0] + k[half];
  for (std::size_t i = 1; i < half; ++i) {
    if (!(k[i] + k[i + half] == y)) return std::nullopt;
  }
  return y;
}

inline EqualityClass classify_equality(const ConvexPolygon& k, const ConvexPolygon& t) {
  auto h = homothety(k, t);
  if (!h) return {};
  if (h->first == Rational(1)) return {EqualityTag::Translate, h->second, Rational(1)};
  if (central_symmetry(k)) return {EqualityTag::HomotheticCentrallySymmetric2D, h->second, h->first};
  return {};
}

}  // namespace bmink::exact2d
