// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// Restricted Minkowski sums A +_Theta B = {x + y : (x, y) in Theta} on
// voxel grids, for Theta = A x B and for the erosion-complement
//   Theta = {(x, y) in K x T : x + y not in K (-) T}.
// Theta itself is never materialized; admitted pairs are counted per y.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include <json.hpp>

#include "bmink/exact2d.hpp"
#include "bmink/inequalities.hpp"
#include "bmink/json_io.hpp"
#include "bmink/voxel.hpp"

namespace bmink::restricted {

using nlohmann::json;
using voxel::GridSet;

enum class ThetaKind { Full, ErosionComplement };

struct ThetaSpec {
  ThetaKind kind = ThetaKind::Full;
  std::optional<GridSet> erosion;  // K (-) T, ErosionComplement only
};

inline ThetaSpec full_theta() { return {}; }

inline ThetaSpec theta_from_erosion(const GridSet& k, const GridSet& t,
                                    voxel::Adjacency adj = voxel::Adjacency::Full) {
  return {ThetaKind::ErosionComplement, voxel::erode_open(k, t, adj)};
}

struct RestrictedSumResult {
  GridSet sum_set;
  std::uint64_t admitted_pairs = 0;
  double theta_volume = 0;  // admitted_pairs * h^(2n)
  bool containment_verdict = true;
};

/// For ErosionComplement, containment_verdict reports whether the sum lies
/// within dilate(dA, dB).
inline RestrictedSumResult restricted_sum(const GridSet& a, const GridSet& b, const ThetaSpec& theta,
                                          voxel::Adjacency adj = voxel::Adjacency::Full) {
  voxel::detail::require_compatible(a, b);
  RestrictedSumResult out;
  const double cell_pairs = std::pow(a.h(), 2 * a.dim());
  if (theta.kind == ThetaKind::Full) {
    out.sum_set = voxel::dilate(a, b);
    out.admitted_pairs = a.count() * b.count();
    out.theta_volume = static_cast<double>(out.admitted_pairs) * cell_pairs;
    return out;
  }
  if (!theta.erosion) throw std::invalid_argument("ErosionComplement theta needs its erosion");
  const GridSet& e = *theta.erosion;
  voxel::detail::require_compatible(a, e);

  // (x, y) is admitted iff x + y is outside E, so the admitted x for a
  // fixed y are A \ (E - y).
  const std::uint64_t na = a.count();
  for (const auto& y : b.cells()) {
    voxel::Index neg{};
    for (int i = 0; i < a.dim(); ++i) neg[i] = -y[i];
    const GridSet blocked = voxel::set_intersection(a, voxel::translate(e, neg));
    out.admitted_pairs += na - blocked.count();
  }
  out.sum_set = voxel::set_difference(voxel::dilate(a, b), e);
  out.theta_volume = static_cast<double>(out.admitted_pairs) * cell_pairs;
  out.containment_verdict =
      voxel::is_subset(out.sum_set, voxel::dilate(voxel::boundary(a, adj), voxel::boundary(b, adj)));
  return out;
}

// ---------------------------------------------------------------------------
// Volume bounds on Theta and on the erosion

struct ThetaBoundsReport {
  double vol_k = 0, vol_t = 0, vol_erosion = 0, vol_theta = 0;
  bool swapped = false;
  bool containment_verdict = true;
  ineq::InequalityReport count_bound;    // admitted pairs >= |T| (|K| - |K (-) T|), in cells
  ineq::InequalityReport erosion_bound;  // vol(E)^(1/n) + vol(T)^(1/n) <= vol(K + {0,1}^n)^(1/n)
  bool passed() const { return count_bound.passed() && erosion_bound.passed() && containment_verdict; }
};

/// The pair is ordered so that |K| >= |T|.
inline ThetaBoundsReport check_theta_bounds(GridSet k, GridSet t, voxel::Adjacency adj = voxel::Adjacency::Full) {
  voxel::detail::require_compatible(k, t);
  ThetaBoundsReport rep;
  if (k.count() < t.count()) {
    std::swap(k, t);
    rep.swapped = true;
  }
  const int n = k.dim();
  const ThetaSpec theta = theta_from_erosion(k, t, adj);
  const RestrictedSumResult rs = restricted_sum(k, t, theta, adj);
  const GridSet& e = *theta.erosion;
  rep.vol_k = voxel::volume(k);
  rep.vol_t = voxel::volume(t);
  rep.vol_erosion = voxel::volume(e);
  rep.vol_theta = rs.theta_volume;
  rep.containment_verdict = rs.containment_verdict;

  const std::uint64_t nk = k.count(), nt = t.count(), ne = e.count();
  ineq::InequalityReport& c = rep.count_bound;
  c.theorem_id = "eq-4.2";
  c.engine = "voxel";
  c.form = "cell count";
  c.lhs = Rational(static_cast<long>(rs.admitted_pairs));
  c.rhs = Rational(static_cast<long>(nt * (nk - ne)));
  c.slack = std::get<Rational>(c.lhs) - std::get<Rational>(c.rhs);
  c.equality = std::get<Rational>(c.slack).is_zero();
  c.status = ineq::detail::slack_status(c.slack, 0);
  c.details = {{"cells_k", nk}, {"cells_t", nt}, {"cells_erosion", ne}, {"vol_theta", rep.vol_theta}};

  // Cube unions satisfy cubes(E) - cubes(T) within cubes(K + {0,1}^n), so
  // classical Brunn-Minkowski applies to these volumes without rounding.
  std::vector<voxel::Index> corner;
  for (int mask = 0; mask < (1 << n); ++mask) {
    voxel::Index v{};
    for (int a = 0; a < n; ++a) v[a] = (mask >> a) & 1;
    corner.push_back(v);
  }
  const double padded = voxel::volume(voxel::dilate(k, GridSet::from_cells(n, k.h(), corner)));
  ineq::InequalityReport& b = rep.erosion_bound;
  b.theorem_id = "eq-4.3";
  b.engine = "voxel";
  const double inv = 1.0 / n;
  const double lhs = std::pow(rep.vol_erosion, inv) + std::pow(rep.vol_t, inv);
  const double rhs = std::pow(padded, inv);
  b.lhs = lhs;
  b.rhs = rhs;
  b.slack = rhs - lhs;
  b.tolerance = 1e-12 * rhs;
  b.equality = std::abs(rhs - lhs) <= b.tolerance;
  b.status = ineq::detail::slack_status(b.slack, b.tolerance);
  b.details = {{"vol_k", rep.vol_k},
               {"vol_t", rep.vol_t},
               {"vol_erosion", rep.vol_erosion},
               {"vol_k_padded", padded},
               {"unpadded_rhs", std::pow(rep.vol_k, inv) - std::pow(rep.vol_t, inv)}};
  return rep;
}

// ---------------------------------------------------------------------------
// vol(dK + dT)^(2/n) >= vol(K)^(2/n) + vol(T)^(2/n)

/// Whether 1/sqrt(n) <= (vol K / vol T)^(1/n) <= sqrt(n).
inline bool ratio_condition(double vol_k, double vol_t, int n) {
  const double r = std::pow(vol_k / vol_t, 2.0 / n);
  return r >= 1.0 / n && r <= static_cast<double>(n);
}

/// Exact planar form: vol(dK + dT) >= vol K + vol T, ratio in [1/2, 2].
/// Failures outside the ratio condition are expected.
inline ineq::InequalityReport check_arithmetic_bm(const exact2d::ConvexPolygon& k, const exact2d::ConvexPolygon& t) {
  ineq::InequalityReport r;
  r.theorem_id = "thm-4.2";
  r.engine = "exact";
  const Rational ak = exact2d::area(k), at = exact2d::area(t);
  const Rational lhs = exact2d::boundary_sum_area(k, t);
  const Rational ratio = ak / at;
  const bool in_range = ratio >= Rational(1, 2) && ratio <= Rational(2);
  r.lhs = lhs;
  r.rhs = ak + at;
  r.slack = lhs - (ak + at);
  r.equality = std::get<Rational>(r.slack).is_zero();
  r.status = ineq::detail::slack_status(r.slack, 0);
  if (r.status == ineq::Status::Violation && !in_range) r.status = ineq::Status::ExpectedFailure;
  r.shapes = ineq::detail::polygon_shapes({&k, &t});
  r.details = {{"dim", 2}, {"ratio", ratio.str()}, {"ratio_condition", in_range}};
  return r;
}

/// Voxel form in any dimension, compared as vol(dK + dT) against
/// (vol K^(2/n) + vol T^(2/n))^(n/2).
inline ineq::InequalityReport check_arithmetic_bm(const GridSet& k, const GridSet& t, json shapes = json::array()) {
  ineq::InequalityReport r;
  r.theorem_id = "thm-4.2";
  r.engine = "voxel";
  r.form = "n/2 power";
  const int n = k.dim();
  const GridSet dk = voxel::boundary(k), dt = voxel::boundary(t);
  const double vk = voxel::volume(k), vt = voxel::volume(t);
  const double lhs = voxel::volume(voxel::dilate(dk, dt));
  const double rhs = std::pow(std::pow(vk, 2.0 / n) + std::pow(vt, 2.0 / n), n / 2.0);
  const bool in_range = ratio_condition(vk, vt, n);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = lhs - rhs;
  r.tolerance = ineq::detail::voxel_tolerance(dk, dt);
  r.equality = std::abs(lhs - rhs) <= r.tolerance;
  r.status = ineq::detail::slack_status(r.slack, r.tolerance);
  if (r.status == ineq::Status::Violation && !in_range) r.status = ineq::Status::ExpectedFailure;
  r.shapes = std::move(shapes);
  r.details = {{"dim", n}, {"h", k.h()}, {"ratio", vk / vt}, {"ratio_condition", in_range}};
  return r;
}

}  // namespace bmink::restricted
