// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// Checkers for the boundary-sum inequalities. Each check produces an
// InequalityReport; exact reports carry Rationals and compare in a
// rational form (squared, m-th power), voxel and real reports carry
// binary64 values and a tolerance.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bmink/exact2d.hpp"
#include "bmink/json_io.hpp"
#include "bmink/rational.hpp"
#include "bmink/shape_spec.hpp"
#include "bmink/voxel.hpp"

namespace bmink::ineq {

using nlohmann::json;

inline constexpr int kReportVersion = 1;

enum class Status { Pass, Violation, ExpectedFailure, Flagged };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Violation: return "violation";
    case Status::ExpectedFailure: return "expected-failure";
    case Status::Flagged: return "flagged";
  }
  return "?";
}

using Number = std::variant<Rational, double>;

inline double to_double(const Number& v) {
  return std::holds_alternative<Rational>(v) ? std::get<Rational>(v).to_double() : std::get<double>(v);
}

inline json number_to_json(const Number& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->str();
  return std::get<double>(v);
}

inline int sign_of(const Number& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->sign();
  double d = std::get<double>(v);
  return (d > 0) - (d < 0);
}

struct InequalityReport {
  std::string theorem_id;
  std::string engine;  // "exact", "voxel" or "real"
  Number lhs = 0.0;
  Number rhs = 0.0;
  Number slack = 0.0;  // in the comparable `form`
  std::string form = "direct";
  double tolerance = 0;
  bool equality = false;
  std::optional<exact2d::EqualityClass> equality_class;
  std::optional<bool> predicted_equality;
  Status status = Status::Pass;
  json shapes = json::array();
  std::optional<Rational> lambda;
  std::uint64_t seed = 0;
  json details = json::object();

  bool passed() const { return status == Status::Pass; }
};

inline json to_json(const InequalityReport& r) {
  json j = {{"v", kReportVersion},
            {"theorem_id", r.theorem_id},
            {"engine", r.engine},
            {"status", to_string(r.status)},
            {"lhs", number_to_json(r.lhs)},
            {"rhs", number_to_json(r.rhs)},
            {"slack", number_to_json(r.slack)},
            {"form", r.form},
            {"tolerance", r.tolerance},
            {"equality", r.equality}};
  if (r.equality_class) {
    json c = {{"tag", exact2d::to_string(r.equality_class->tag)}};
    if (r.equality_class->translation) c["translation"] = io::point_to_json(*r.equality_class->translation);
    if (r.equality_class->ratio) c["ratio"] = r.equality_class->ratio->str();
    j["equality_class"] = c;
  }
  if (r.predicted_equality) j["predicted_equality"] = *r.predicted_equality;
  if (r.lambda) j["lambda"] = r.lambda->str();
  j["seed"] = r.seed;
  j["shapes"] = r.shapes;
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

namespace detail {

inline json polygon_shapes(std::initializer_list<const exact2d::ConvexPolygon*> ps) {
  json out = json::array();
  for (const auto* p : ps) out.push_back(io::shape_to_json(*make_polygon(*p)));
  return out;
}

inline Status slack_status(const Number& slack, double tolerance) {
  if (const auto* r = std::get_if<Rational>(&slack)) return r->sign() >= 0 ? Status::Pass : Status::Violation;
  return std::get<double>(slack) >= -tolerance ? Status::Pass : Status::Violation;
}

// First-order discretization allowance: 3 n h times a perimeter proxy
// (boundary cell count times h^(n-1)).
inline double voxel_tolerance(const voxel::GridSet& dk, const voxel::GridSet& dt) {
  const int n = dk.dim();
  const double h = dk.h();
  const double perimeter = static_cast<double>(dk.count() + dt.count()) * std::pow(h, n - 1);
  return 3.0 * n * h * perimeter;
}

inline Rational one_minus_abs_pow(const Rational& lambda, unsigned n) {
  return Rational(1) - pow(abs(Rational(1) - Rational(2) * lambda), n);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// vol((dK + dT)/2) >= sqrt(vol K vol T)

/// Exact: compares lhs^2 with vol K * vol T. Equality is predicted exactly
/// for translates and for homothetic centrally symmetric pairs.
inline InequalityReport check_thm_av(const exact2d::ConvexPolygon& k, const exact2d::ConvexPolygon& t) {
  InequalityReport r;
  r.theorem_id = "thm-av";
  r.engine = "exact";
  r.form = "squared";
  const Rational ak = exact2d::area(k), at = exact2d::area(t);
  const Rational lhs = exact2d::boundary_sum_volume(k, t, Rational(1, 2));
  const Rational rhs_sq = ak * at;
  r.lhs = lhs;
  r.rhs = rhs_sq;
  r.slack = lhs * lhs - rhs_sq;
  r.equality = std::get<Rational>(r.slack).is_zero();
  r.equality_class = exact2d::classify_equality(k, t);
  r.predicted_equality = r.equality_class->tag != exact2d::EqualityTag::NoEquality;
  r.status = detail::slack_status(r.slack, 0);
  r.shapes = detail::polygon_shapes({&k, &t});
  r.details = {{"vol_k", ak.str()}, {"vol_t", at.str()}, {"rhs_form", "vol(K)*vol(T)"}};
  if (r.status == Status::Pass && r.equality != *r.predicted_equality) r.details["equality_mismatch"] = true;
  return r;
}

/// Voxel: lhs = vol(dK + dT) / 2^n against sqrt(vol K vol T), with slack
/// allowed down to -voxel tolerance.
inline InequalityReport check_thm_av(const voxel::GridSet& k, const voxel::GridSet& t, json shapes = json::array()) {
  InequalityReport r;
  r.theorem_id = "thm-av";
  r.engine = "voxel";
  const int n = k.dim();
  const voxel::GridSet dk = voxel::boundary(k), dt = voxel::boundary(t);
  const double lhs = voxel::volume(voxel::dilate(dk, dt)) / std::pow(2.0, n);
  const double rhs = std::sqrt(voxel::volume(k) * voxel::volume(t));
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tolerance = detail::voxel_tolerance(dk, dt);
  r.equality = std::abs(lhs - rhs) <= r.tolerance;
  r.status = detail::slack_status(r.slack, r.tolerance);
  r.shapes = std::move(shapes);
  r.details = {{"dim", n}, {"h", k.h()}, {"vol_k", voxel::volume(k)}, {"vol_t", voxel::volume(t)}};
  return r;
}

// ---------------------------------------------------------------------------
// vol((dK_1 + ... + dK_m)/m) >= prod vol(K_i)^(1/m)

/// vol(dK_1 + ... + dK_m) for convex polygons. With the bodies sorted by
/// area, dK_1 + ... + dK_m = dK_big + S where S is the sum of the others.
inline Rational multi_boundary_sum_area(std::vector<exact2d::ConvexPolygon> bodies) {
  if (bodies.size() < 2) throw std::invalid_argument("need at least two bodies");
  std::stable_sort(bodies.begin(), bodies.end(),
                   [](const auto& a, const auto& b) { return exact2d::area(a) > exact2d::area(b); });
  exact2d::ConvexPolygon rest = bodies[1];
  for (std::size_t i = 2; i < bodies.size(); ++i) rest = exact2d::minkowski_sum(rest, bodies[i]);
  return exact2d::area(exact2d::minkowski_sum(bodies[0], rest)) - exact2d::erode(bodies[0], rest).area();
}

/// Exact: compares lhs^m with the product of areas.
inline InequalityReport check_cor_multi(const std::vector<exact2d::ConvexPolygon>& bodies) {
  const std::size_t m = bodies.size();
  if (m < 3) throw std::invalid_argument("cor-multi needs m >= 3 bodies");
  InequalityReport r;
  r.theorem_id = "cor-multi";
  r.engine = "exact";
  r.form = "m-th power";
  const Rational lhs = multi_boundary_sum_area(bodies) / Rational(static_cast<long>(m * m));
  Rational prod(1);
  json areas = json::array();
  for (const auto& b : bodies) {
    prod *= exact2d::area(b);
    areas.push_back(exact2d::area(b).str());
  }
  r.lhs = lhs;
  r.rhs = prod;
  r.slack = pow(lhs, static_cast<unsigned>(m)) - prod;
  r.equality = std::get<Rational>(r.slack).is_zero();
  bool translates = true;
  for (std::size_t i = 1; i < m; ++i) {
    translates = translates && exact2d::classify_equality(bodies[0], bodies[i]).tag == exact2d::EqualityTag::Translate;
  }
  r.predicted_equality = translates;
  r.status = detail::slack_status(r.slack, 0);
  r.shapes = json::array();
  for (const auto& b : bodies) r.shapes.push_back(io::shape_to_json(*make_polygon(b)));
  r.details = {{"m", m}, {"areas", areas}, {"rhs_form", "prod vol(K_i)"}};
  if (r.status == Status::Pass && r.equality != translates) r.details["equality_mismatch"] = true;
  return r;
}

/// Voxel: rasterizes each body at resolution h.
inline InequalityReport check_cor_multi(const std::vector<ShapePtr>& bodies, double h) {
  const std::size_t m = bodies.size();
  if (m < 3) throw std::invalid_argument("cor-multi needs m >= 3 bodies");
  InequalityReport r;
  r.theorem_id = "cor-multi";
  r.engine = "voxel";
  std::optional<voxel::GridSet> sum;
  double log_prod = 0, perimeter_cells = 0;
  int n = 0;
  r.shapes = json::array();
  for (const auto& b : bodies) {
    voxel::GridSet g = voxel::rasterize(*b, h);
    voxel::GridSet dg = voxel::boundary(g);
    n = g.dim();
    log_prod += std::log(voxel::volume(g)) / static_cast<double>(m);
    perimeter_cells += static_cast<double>(dg.count());
    sum = sum ? voxel::dilate(*sum, dg) : dg;
    r.shapes.push_back(io::shape_to_json(*b));
  }
  const double lhs = voxel::volume(*sum) / std::pow(static_cast<double>(m), n);
  const double rhs = std::exp(log_prod);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tolerance = 3.0 * n * h * perimeter_cells * std::pow(h, n - 1);
  r.equality = std::abs(lhs - rhs) <= r.tolerance;
  r.status = detail::slack_status(r.slack, r.tolerance);
  r.details = {{"m", m}, {"dim", n}, {"h", h}};
  return r;
}

// ---------------------------------------------------------------------------
// vol(l dK + (1-l) dT) vol(l dT + (1-l) dK) >= vol K vol T (1 - |1-2l|^n)^2

/// Whether the stated equality characterization covers (K, T, lambda).
inline bool bbm_equality_predicted(const exact2d::ConvexPolygon& k, const exact2d::EqualityClass& c,
                                   const Rational& lambda) {
  using exact2d::EqualityTag;
  if (lambda == Rational(1, 2)) return c.tag != EqualityTag::NoEquality;
  if (c.tag == EqualityTag::HomotheticCentrallySymmetric2D) return true;
  return c.tag == EqualityTag::Translate && exact2d::central_symmetry(k).has_value();
}

/// Exact: both factors are recorded; an exact equality outside the stated
/// characterization is flagged rather than counted as a failure.
inline InequalityReport check_thm_bbm(const exact2d::ConvexPolygon& k, const exact2d::ConvexPolygon& t,
                                      const Rational& lambda) {
  if (lambda.sign() <= 0 || lambda >= Rational(1)) throw std::invalid_argument("lambda must lie in (0,1)");
  InequalityReport r;
  r.theorem_id = "thm-bbm";
  r.engine = "exact";
  r.form = "product";
  r.lambda = lambda;
  const Rational f1 = exact2d::boundary_sum_volume(k, t, lambda);
  const Rational f2 = exact2d::boundary_sum_volume(t, k, lambda);
  const Rational c = detail::one_minus_abs_pow(lambda, 2);
  const Rational rhs = exact2d::area(k) * exact2d::area(t) * c * c;
  r.lhs = f1 * f2;
  r.rhs = rhs;
  r.slack = f1 * f2 - rhs;
  r.equality = std::get<Rational>(r.slack).is_zero();
  r.equality_class = exact2d::classify_equality(k, t);
  r.predicted_equality = bbm_equality_predicted(k, *r.equality_class, lambda);
  r.status = detail::slack_status(r.slack, 0);
  if (r.status == Status::Pass && r.equality != *r.predicted_equality) r.status = Status::Flagged;
  r.shapes = detail::polygon_shapes({&k, &t});
  r.details = {{"factor_1", f1.str()}, {"factor_2", f2.str()}, {"vol_k", exact2d::area(k).str()},
               {"vol_t", exact2d::area(t).str()}};
  return r;
}

/// Voxel: the scaled bodies are rasterized directly from their specs.
inline InequalityReport check_thm_bbm(const ShapePtr& k, const ShapePtr& t, const Rational& lambda, double h) {
  if (lambda.sign() <= 0 || lambda >= Rational(1)) throw std::invalid_argument("lambda must lie in (0,1)");
  InequalityReport r;
  r.theorem_id = "thm-bbm";
  r.engine = "voxel";
  r.form = "product";
  r.lambda = lambda;
  const Rational mu = Rational(1) - lambda;
  auto boundary_at = [&](const ShapePtr& s, const Rational& f) {
    return voxel::boundary(voxel::rasterize(*make_scaled(s, f), h));
  };
  const voxel::GridSet lk = boundary_at(k, lambda), mt = boundary_at(t, mu);
  const voxel::GridSet lt = boundary_at(t, lambda), mk = boundary_at(k, mu);
  const double f1 = voxel::volume(voxel::dilate(lk, mt));
  const double f2 = voxel::volume(voxel::dilate(lt, mk));
  const voxel::GridSet gk = voxel::rasterize(*k, h), gt = voxel::rasterize(*t, h);
  const int n = gk.dim();
  const double c = 1 - std::pow(std::abs(1 - 2 * lambda.to_double()), n);
  const double rhs = voxel::volume(gk) * voxel::volume(gt) * c * c;
  const double tol1 = detail::voxel_tolerance(lk, mt), tol2 = detail::voxel_tolerance(lt, mk);
  r.lhs = f1 * f2;
  r.rhs = rhs;
  r.slack = f1 * f2 - rhs;
  r.tolerance = f1 * tol2 + f2 * tol1 + tol1 * tol2;
  r.equality = std::abs(f1 * f2 - rhs) <= r.tolerance;
  r.status = detail::slack_status(r.slack, r.tolerance);
  r.shapes = json::array({io::shape_to_json(*k), io::shape_to_json(*t)});
  r.details = {{"factor_1", f1}, {"factor_2", f2}, {"dim", n}, {"h", h}};
  return r;
}

// ---------------------------------------------------------------------------
// R_n

struct RnEvaluation {
  int n = 2;
  double lambda = 0.5;
  double x = 1;
  double value = 0;
};

/// R_n(x) = (|(1-l)x + l|^n - |(1-l)x - l|^n)(|(1-l) + lx|^n - |(1-l) - lx|^n) / x^n.
inline RnEvaluation eval_Rn(int n, double lambda, double x) {
  if (n < 2) throw std::invalid_argument("R_n needs n >= 2");
  if (!(lambda >= 0 && lambda <= 1)) throw std::invalid_argument("lambda must lie in [0,1]");
  if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("R_n needs x > 0");
  const double mu = 1 - lambda;
  auto p = [n](double v) { return std::pow(std::abs(v), n); };
  const double a = p(mu * x + lambda) - p(mu * x - lambda);
  const double b = p(mu + lambda * x) - p(mu - lambda * x);
  return {n, lambda, x, a * b / std::pow(x, n)};
}

// ---------------------------------------------------------------------------
// (2/(m+1)) sqrt((x_1 + ... + x_m) x_{m+1}) >= (x_1 ... x_{m+1})^(1/(m+1))

/// Requires x_1 + ... + x_m <= x_{m+1}. Strictness is expected when m > 1,
/// x_{m+1} > 0 and x_1 + ... + x_m > 0.
inline InequalityReport check_lemma_pbm(const std::vector<double>& x) {
  if (x.size() < 2) throw std::invalid_argument("lemma-pbm needs m >= 1, i.e. at least two values");
  for (double v : x) {
    if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("lemma-pbm needs non-negative finite values");
  }
  const std::size_t m = x.size() - 1;
  double head = 0;
  for (std::size_t i = 0; i < m; ++i) head += x[i];
  const double last = x[m];
  if (head > last) throw std::invalid_argument("lemma-pbm needs x_1 + ... + x_m <= x_{m+1}");
  double log_prod = 0;
  bool zero = false;
  for (double v : x) {
    if (v == 0) zero = true;
    else log_prod += std::log(v);
  }
  InequalityReport r;
  r.theorem_id = "lemma-pbm";
  r.engine = "real";
  const double lhs = 2.0 / static_cast<double>(m + 1) * std::sqrt(head * last);
  const double rhs = zero ? 0.0 : std::exp(log_prod / static_cast<double>(m + 1));
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tolerance = 1e-12 * std::max(1.0, rhs);
  r.equality = std::abs(lhs - rhs) <= r.tolerance;
  const bool strict_expected = m > 1 && last > 0 && head > 0;
  r.predicted_equality = !strict_expected;
  r.status = detail::slack_status(r.slack, r.tolerance);
  if (r.status == Status::Pass && strict_expected && !(lhs - rhs > 0)) r.status = Status::Violation;
  r.shapes = json::array();
  r.details = {{"m", m}, {"x", x}, {"strict_expected", strict_expected}};
  return r;
}

}  // namespace bmink::ineq
