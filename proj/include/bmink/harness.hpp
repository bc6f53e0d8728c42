// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// Random shape generators and the campaign runner. Every trial draws from
// its own stream derived from (root seed, trial index), so a trial can be
// replayed in isolation and output order never depends on scheduling.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bmink/exact2d.hpp"
#include "bmink/inequalities.hpp"
#include "bmink/json_io.hpp"
#include "bmink/restricted.hpp"
#include "bmink/shape_spec.hpp"
#include "bmink/voxel.hpp"

namespace bmink::harness {

using exact2d::ConvexPolygon;
using exact2d::Point2;
using nlohmann::json;
using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Seeds and portable draws

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root ^ splitmix64(index));
}

/// Uniform integer in [lo, hi].
inline long draw_int(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Uniform double in [0, 1).
inline double draw_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline Rational snap(double v, long den) { return Rational(std::lround(v * static_cast<double>(den)), den); }

// ---------------------------------------------------------------------------
// Generators

enum class PlantMode { Translate, HomotheticSymmetric, Both };

struct GenParams {
  int min_vertices = 3;
  int max_vertices = 10;
  long coord_range = 4;      // exact polygons lie in [-coord_range, coord_range]^2
  long denominator = 8;      // vertex coordinates are multiples of 1/denominator
  double plant_rate = 0;     // probability of planting an equality pair
  PlantMode plant_mode = PlantMode::Both;
  double voxel_extent = 2;   // voxel shapes lie in [-voxel_extent, voxel_extent]^n
  int max_parts = 3;         // parts per non-convex union
  int retry_budget = 1000;

  void validate() const {
    if (min_vertices < 3 || max_vertices < min_vertices) throw std::invalid_argument("bad vertex count range");
    if (coord_range < 1 || denominator < 1) throw std::invalid_argument("bad coordinate range");
    if (!(plant_rate >= 0 && plant_rate <= 1)) throw std::invalid_argument("planting rate must lie in [0,1]");
    if (!(voxel_extent > 0) || max_parts < 1 || retry_budget < 1) throw std::invalid_argument("bad generator parameters");
  }
};

namespace detail {

// Points on a random rotated ellipse with jittered radii, snapped.
inline std::vector<Point2> ellipse_points(Rng& rng, int count, double range, long den, bool centered) {
  const double a = range * (0.25 + 0.75 * draw_unit(rng));
  const double b = range * (0.25 + 0.75 * draw_unit(rng));
  const double phi = std::numbers::pi * draw_unit(rng);
  const double cx = centered ? 0 : (range - std::max(a, b)) * (2 * draw_unit(rng) - 1);
  const double cy = centered ? 0 : (range - std::max(a, b)) * (2 * draw_unit(rng) - 1);
  std::vector<Point2> pts;
  for (int i = 0; i < count; ++i) {
    const double theta = 2 * std::numbers::pi * draw_unit(rng);
    const double rho = std::sqrt(0.5 + 0.5 * draw_unit(rng));
    const double u = a * rho * std::cos(theta), v = b * rho * std::sin(theta);
    pts.push_back({snap(cx + u * std::cos(phi) - v * std::sin(phi), den),
                   snap(cy + u * std::sin(phi) + v * std::cos(phi), den)});
  }
  return pts;
}

}  // namespace detail

inline ConvexPolygon gen_convex_polygon(Rng& rng, const GenParams& p) {
  for (int attempt = 0; attempt < p.retry_budget; ++attempt) {
    const int count = static_cast<int>(draw_int(rng, p.min_vertices, p.max_vertices));
    auto poly = ConvexPolygon::try_hull(
        detail::ellipse_points(rng, count, static_cast<double>(p.coord_range), p.denominator, false));
    if (poly && static_cast<int>(poly->size()) >= p.min_vertices) return *poly;
  }
  throw std::runtime_error("convex polygon generator exhausted its retry budget");
}

inline ConvexPolygon gen_convex_polygon(std::uint64_t seed, const GenParams& p) {
  Rng rng(seed);
  return gen_convex_polygon(rng, p);
}

/// Centrally symmetric polygon about the origin.
inline ConvexPolygon gen_symmetric_polygon(Rng& rng, const GenParams& p) {
  for (int attempt = 0; attempt < p.retry_budget; ++attempt) {
    const int half = std::max(2, static_cast<int>(draw_int(rng, p.min_vertices, p.max_vertices)) / 2);
    auto pts = detail::ellipse_points(rng, half, static_cast<double>(p.coord_range) / 2, p.denominator, true);
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) pts.push_back(-pts[i]);
    if (auto poly = ConvexPolygon::try_hull(std::move(pts))) return *poly;
  }
  throw std::runtime_error("symmetric polygon generator exhausted its retry budget");
}

struct PolygonPair {
  ConvexPolygon k;
  ConvexPolygon t;
  std::optional<exact2d::EqualityTag> planted;
};

inline Point2 draw_offset(Rng& rng, const GenParams& p) {
  return {Rational(draw_int(rng, -p.coord_range * p.denominator, p.coord_range * p.denominator), p.denominator),
          Rational(draw_int(rng, -p.coord_range * p.denominator, p.coord_range * p.denominator), p.denominator)};
}

/// With probability plant_rate returns (K, K + v) or (K, sK + v) with K = -K.
inline PolygonPair gen_polygon_pair(Rng& rng, const GenParams& p) {
  if (draw_unit(rng) < p.plant_rate) {
    bool translate = p.plant_mode == PlantMode::Translate;
    if (p.plant_mode == PlantMode::Both) translate = (rng() & 1U) == 0;
    if (translate) {
      ConvexPolygon k = gen_convex_polygon(rng, p);
      return {k, exact2d::translate(k, draw_offset(rng, p)), exact2d::EqualityTag::Translate};
    }
    ConvexPolygon k = exact2d::translate(gen_symmetric_polygon(rng, p), draw_offset(rng, p));
    Rational s(1);
    while (s == Rational(1)) s = Rational(draw_int(rng, 1, 8), draw_int(rng, 1, 8));
    return {k, exact2d::translate(exact2d::scale(k, s), draw_offset(rng, p)),
            exact2d::EqualityTag::HomotheticCentrallySymmetric2D};
  }
  ConvexPolygon k = gen_convex_polygon(rng, p);
  return {k, gen_convex_polygon(rng, p), std::nullopt};
}

/// Convex voxel test body: a polygon in the plane, a box or ball above.
inline ShapePtr gen_convex_shape(Rng& rng, const GenParams& p, int dim) {
  const long den = p.denominator;
  if (dim == 2) {
    GenParams q = p;
    q.coord_range = std::max(1L, std::lround(p.voxel_extent));
    return make_polygon(gen_convex_polygon(rng, q));
  }
  const double e = p.voxel_extent;
  if (rng() & 1U) {
    std::vector<Rational> lo, hi;
    for (int a = 0; a < dim; ++a) {
      const double w = e * (0.3 + 0.7 * draw_unit(rng));
      const double c = (e - w) * (2 * draw_unit(rng) - 1);
      lo.push_back(snap(c - w, den));
      hi.push_back(snap(c + w, den));
    }
    return make_box(std::move(lo), std::move(hi));
  }
  const double r = e * (0.3 + 0.7 * draw_unit(rng));
  std::vector<Rational> c;
  for (int a = 0; a < dim; ++a) c.push_back(snap((e - r) * (2 * draw_unit(rng) - 1), den));
  return make_ball(std::move(c), snap(r, den));
}

struct GeneratedSet {
  ShapePtr spec;
  voxel::GridSet grid;
};

/// Random union of overlapping boxes and balls, resampled until its
/// boundary is connected.
inline GeneratedSet gen_connected_boundary_set(Rng& rng, const GenParams& p, int dim, double h,
                                               voxel::Adjacency adj = voxel::Adjacency::Full) {
  const long den = p.denominator;
  const double e = p.voxel_extent;
  for (int attempt = 0; attempt < p.retry_budget; ++attempt) {
    const int parts = static_cast<int>(draw_int(rng, 1, p.max_parts));
    std::vector<ShapePtr> pieces;
    std::vector<double> anchor(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < parts; ++i) {
      const double size = e * (0.2 + 0.3 * draw_unit(rng));
      std::vector<double> c(static_cast<std::size_t>(dim));
      for (auto& v : c) v = 0;
      for (int a = 0; a < dim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        c[ua] = std::clamp(anchor[ua] + e * 0.5 * (2 * draw_unit(rng) - 1), -(e - size), e - size);
      }
      if (rng() & 1U) {
        std::vector<Rational> lo, hi;
        for (int a = 0; a < dim; ++a) {
          const double w = size * (0.4 + 0.6 * draw_unit(rng));
          lo.push_back(snap(c[static_cast<std::size_t>(a)] - w, den));
          hi.push_back(snap(c[static_cast<std::size_t>(a)] + w, den));
        }
        pieces.push_back(make_box(std::move(lo), std::move(hi)));
      } else {
        std::vector<Rational> center;
        for (double v : c) center.push_back(snap(v, den));
        pieces.push_back(make_ball(std::move(center), snap(size, den)));
      }
      anchor = c;
    }
    ShapePtr spec = pieces.size() == 1 ? pieces.front() : make_union(std::move(pieces));
    voxel::GridSet g = voxel::rasterize(*spec, h);
    if (!g.empty() && voxel::is_boundary_connected(g, adj)) return {spec, std::move(g)};
  }
  throw std::runtime_error("connected-boundary generator exhausted its retry budget");
}

inline GeneratedSet gen_connected_boundary_set(std::uint64_t seed, const GenParams& p, int dim, double h) {
  Rng rng(seed);
  return gen_connected_boundary_set(rng, p, dim, h);
}

// ---------------------------------------------------------------------------
// Single-trial checks not covered by the inequality module

/// The four decomposition verdicts packaged as a report.
inline ineq::InequalityReport decomposition_report(const voxel::GridSet& k, const voxel::GridSet& t, json shapes,
                                                   voxel::Adjacency adj = voxel::Adjacency::Full) {
  const voxel::DecompositionReport d = voxel::decomposition_check(k, t, adj);
  ineq::InequalityReport r;
  r.theorem_id = "prop-2.3";
  r.engine = "voxel";
  r.form = "cell count";
  r.lhs = Rational(static_cast<long>(d.sum_cells));
  r.rhs = Rational(static_cast<long>(d.boundary_sum_cells + d.erosion_cells));
  r.slack = std::get<Rational>(r.lhs) - std::get<Rational>(r.rhs);
  r.equality = d.all();
  r.status = d.all() ? ineq::Status::Pass : ineq::Status::Violation;
  r.shapes = std::move(shapes);
  r.details = {{"swapped", d.swapped},
               {"sum_equals_k_plus_dt", d.sum_equals_k_plus_dt},
               {"sum_equals_union", d.sum_equals_union},
               {"union_disjoint", d.union_disjoint},
               {"boundary_sum_equals_dk_plus_t", d.boundary_sum_equals_dk_plus_t},
               {"h", k.h()}};
  return r;
}

/// R_n(x) against R_n(1): constant for n = 2, strictly larger for n > 2
/// once |x - 1| >= 1e-3.
inline ineq::InequalityReport rn_report(int n, double lambda, double x) {
  const double v = ineq::eval_Rn(n, lambda, x).value;
  const double v1 = ineq::eval_Rn(n, lambda, 1).value;
  ineq::InequalityReport r;
  r.theorem_id = "rn";
  r.engine = "real";
  r.lhs = v;
  r.rhs = v1;
  r.slack = v - v1;
  bool ok;
  if (n == 2) {
    r.tolerance = 1e-9 * std::max(1.0, v1);
    ok = std::abs(v - v1) <= r.tolerance;
  } else if (std::abs(x - 1) >= 1e-3) {
    r.details["required_margin"] = 1e-12;
    ok = v > v1 + 1e-12;
  } else {
    r.tolerance = 1e-12;
    ok = v >= v1 - 1e-12;
  }
  r.equality = std::abs(v - v1) <= 1e-9 * std::max(1.0, v1);
  r.status = ok ? ineq::Status::Pass : ineq::Status::Violation;
  r.details["n"] = n;
  r.details["lambda"] = lambda;
  r.details["x"] = x;
  return r;
}

// ---------------------------------------------------------------------------
// Campaigns

inline const std::vector<std::string>& campaign_theorems() {
  static const std::vector<std::string> ids = {"thm-av",  "thm-bbm",  "cor-multi",    "lemma-pbm",
                                                "rn",      "thm-4.2",  "prop-2.3",     "theta-bounds"};
  return ids;
}

struct CampaignConfig {
  std::string theorem = "thm-av";
  std::string engine = "exact";  // exact | voxel
  std::uint64_t trials = 100;
  int dim = 2;
  double res = 1.0 / 32;
  std::vector<Rational> lambdas;  // empty: drawn per trial
  int m = 3;
  GenParams gen;
  voxel::Adjacency adjacency = voxel::Adjacency::Full;
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 0;  // 0: BMINK_THREADS, else hardware concurrency

  void validate() const {
    const auto& ids = campaign_theorems();
    if (std::find(ids.begin(), ids.end(), theorem) == ids.end()) throw std::invalid_argument("unknown theorem: " + theorem);
    if (engine != "exact" && engine != "voxel") throw std::invalid_argument("engine must be exact or voxel");
    if (trials < 1) throw std::invalid_argument("trial count must be at least 1");
    if (!(res > 0)) throw std::invalid_argument("resolution must be positive");
    if (dim < 2 || dim > voxel::kMaxDim) throw std::invalid_argument("dimension must be 2, 3 or 4");
    if (engine == "exact" && dim != 2) throw std::invalid_argument("the exact engine is planar; use --dim 2");
    if (m < 3) throw std::invalid_argument("cor-multi needs m >= 3");
    for (const auto& l : lambdas) {
      if (l.sign() <= 0 || l >= Rational(1)) throw std::invalid_argument("lambda values must lie in (0,1)");
    }
    gen.validate();
  }
};

struct CampaignSummary {
  std::uint64_t trials = 0;
  std::uint64_t reports = 0;
  std::uint64_t violations = 0;
  std::uint64_t expected_failures = 0;
  std::uint64_t flagged = 0;
  std::uint64_t equality_hits = 0;
  std::uint64_t equality_mismatches = 0;
  std::uint64_t planted = 0;
  std::map<std::string, std::uint64_t> equality_classes;
  std::vector<json> witnesses;  // first 10 violations
  std::optional<double> min_slack;
  double wall_seconds = 0;

  json to_json() const {
    json j = {{"trials", trials},
              {"reports", reports},
              {"violations", violations},
              {"expected_failures", expected_failures},
              {"flagged", flagged},
              {"equality_hits", equality_hits},
              {"equality_mismatches", equality_mismatches},
              {"planted", planted},
              {"equality_classes", equality_classes},
              {"witnesses", witnesses},
              {"wall_seconds", wall_seconds}};
    j["min_slack"] = min_slack ? json(*min_slack) : json(nullptr);
    return j;
  }
};

namespace detail {

inline Rational draw_lambda(Rng& rng, const CampaignConfig& c) {
  if (!c.lambdas.empty()) return c.lambdas[rng() % c.lambdas.size()];
  const long q = draw_int(rng, 2, 12);
  return Rational(draw_int(rng, 1, q - 1), q);
}

inline json spec_pair(const ShapePtr& a, const ShapePtr& b) {
  return json::array({io::shape_to_json(*a), io::shape_to_json(*b)});
}

inline void mark_planted(ineq::InequalityReport& r, const std::optional<exact2d::EqualityTag>& tag) {
  if (tag) r.details["planted"] = exact2d::to_string(*tag);
}

inline std::vector<double> draw_pbm_tuple(Rng& rng) {
  const auto m = static_cast<std::size_t>(draw_int(rng, 1, 6));
  const double last = 0.01 + 10 * draw_unit(rng);
  std::vector<double> w(m);
  double total = 0;
  for (auto& v : w) {
    v = draw_unit(rng) < 0.1 ? 0.0 : draw_unit(rng);
    total += v;
  }
  const double frac = draw_unit(rng);
  std::vector<double> x;
  for (double v : w) x.push_back(total > 0 ? last * frac * v / total * (1 - 1e-12) : 0.0);
  x.push_back(last);
  return x;
}

}  // namespace detail

/// All reports of trial `index`.
inline std::vector<ineq::InequalityReport> run_trial(const CampaignConfig& c, std::uint64_t index) {
  const std::uint64_t seed = trial_seed(c.seed, index);
  Rng rng(seed);
  const bool exact = c.engine == "exact";
  const GenParams& g = c.gen;
  std::vector<ineq::InequalityReport> out;

  if (c.theorem == "thm-av") {
    if (exact) {
      PolygonPair p = gen_polygon_pair(rng, g);
      out.push_back(ineq::check_thm_av(p.k, p.t));
      detail::mark_planted(out.back(), p.planted);
    } else {
      GeneratedSet a = gen_connected_boundary_set(rng, g, c.dim, c.res, c.adjacency);
      GeneratedSet b = gen_connected_boundary_set(rng, g, c.dim, c.res, c.adjacency);
      out.push_back(ineq::check_thm_av(a.grid, b.grid, detail::spec_pair(a.spec, b.spec)));
    }
  } else if (c.theorem == "thm-bbm") {
    const Rational lambda = detail::draw_lambda(rng, c);
    if (exact) {
      PolygonPair p = gen_polygon_pair(rng, g);
      out.push_back(ineq::check_thm_bbm(p.k, p.t, lambda));
      detail::mark_planted(out.back(), p.planted);
    } else {
      ShapePtr a = gen_convex_shape(rng, g, c.dim), b = gen_convex_shape(rng, g, c.dim);
      out.push_back(ineq::check_thm_bbm(a, b, lambda, c.res));
    }
  } else if (c.theorem == "cor-multi") {
    if (exact) {
      std::vector<ConvexPolygon> bodies;
      std::optional<exact2d::EqualityTag> planted;
      if (draw_unit(rng) < g.plant_rate) {
        ConvexPolygon k = gen_convex_polygon(rng, g);
        for (int i = 0; i < c.m; ++i) bodies.push_back(exact2d::translate(k, draw_offset(rng, g)));
        planted = exact2d::EqualityTag::Translate;
      } else {
        for (int i = 0; i < c.m; ++i) bodies.push_back(gen_convex_polygon(rng, g));
      }
      out.push_back(ineq::check_cor_multi(bodies));
      detail::mark_planted(out.back(), planted);
    } else {
      std::vector<ShapePtr> bodies;
      for (int i = 0; i < c.m; ++i) bodies.push_back(gen_convex_shape(rng, g, c.dim));
      out.push_back(ineq::check_cor_multi(bodies, c.res));
    }
  } else if (c.theorem == "lemma-pbm") {
    out.push_back(ineq::check_lemma_pbm(detail::draw_pbm_tuple(rng)));
  } else if (c.theorem == "rn") {
    const int n = static_cast<int>(draw_int(rng, 2, 6));
    const double lambda = static_cast<double>(draw_int(rng, 1, 99)) / 100;
    const double x = std::pow(10.0, 4 * draw_unit(rng) - 2);
    out.push_back(rn_report(n, lambda, x));
  } else if (c.theorem == "thm-4.2") {
    if (exact) {
      PolygonPair p = gen_polygon_pair(rng, g);
      out.push_back(restricted::check_arithmetic_bm(p.k, p.t));
      detail::mark_planted(out.back(), p.planted);
    } else {
      ShapePtr a = gen_convex_shape(rng, g, c.dim), b = gen_convex_shape(rng, g, c.dim);
      out.push_back(restricted::check_arithmetic_bm(voxel::rasterize(*a, c.res), voxel::rasterize(*b, c.res),
                                                    detail::spec_pair(a, b)));
    }
  } else if (c.theorem == "prop-2.3") {
    GeneratedSet a = gen_connected_boundary_set(rng, g, c.dim, c.res, c.adjacency);
    GeneratedSet b = gen_connected_boundary_set(rng, g, c.dim, c.res, c.adjacency);
    out.push_back(decomposition_report(a.grid, b.grid, detail::spec_pair(a.spec, b.spec), c.adjacency));
  } else {  // theta-bounds
    GeneratedSet a = gen_connected_boundary_set(rng, g, c.dim, c.res, c.adjacency);
    GeneratedSet b = gen_connected_boundary_set(rng, g, c.dim, c.res, c.adjacency);
    restricted::ThetaBoundsReport t = restricted::check_theta_bounds(a.grid, b.grid, c.adjacency);
    json shapes = detail::spec_pair(a.spec, b.spec);
    for (auto* r : {&t.count_bound, &t.erosion_bound}) {
      r->shapes = shapes;
      r->details["containment_verdict"] = t.containment_verdict;
      r->details["swapped"] = t.swapped;
      out.push_back(*r);
    }
    if (!t.containment_verdict) out.front().status = ineq::Status::Violation;
  }
  for (auto& r : out) {
    r.seed = seed;
    r.details["trial"] = index;
  }
  return out;
}

inline unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BMINK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

inline void tally(CampaignSummary& s, const ineq::InequalityReport& r) {
  ++s.reports;
  switch (r.status) {
    case ineq::Status::Violation:
      ++s.violations;
      if (s.witnesses.size() < 10) {
        s.witnesses.push_back({{"theorem_id", r.theorem_id}, {"seed", r.seed}, {"shapes", r.shapes}});
      }
      break;
    case ineq::Status::ExpectedFailure: ++s.expected_failures; break;
    case ineq::Status::Flagged: ++s.flagged; break;
    case ineq::Status::Pass: break;
  }
  if (r.equality) {
    ++s.equality_hits;
    ++s.equality_classes[r.equality_class ? exact2d::to_string(r.equality_class->tag) : "unclassified"];
  }
  if (r.details.contains("equality_mismatch")) ++s.equality_mismatches;
  if (r.details.contains("planted")) ++s.planted;
  const double slack = ineq::to_double(r.slack);
  if (!s.min_slack || slack < *s.min_slack) s.min_slack = slack;
}

/// Runs the campaign, streaming JSONL in trial order to `sink` (and to
/// config.out when set). Trials run in parallel chunks.
inline CampaignSummary run_campaign(const CampaignConfig& c, std::ostream* sink = nullptr) {
  c.validate();
  const auto start = std::chrono::steady_clock::now();
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + c.out);
  }
  const unsigned workers = worker_count(c.threads);
  const std::uint64_t chunk = std::max<std::uint64_t>(64, 16ULL * workers);
  CampaignSummary summary;

  for (std::uint64_t base = 0; base < c.trials; base += chunk) {
    const std::uint64_t count = std::min(chunk, c.trials - base);
    std::vector<std::vector<ineq::InequalityReport>> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
      for (std::uint64_t i; (i = next.fetch_add(1)) < count;) {
        try {
          results[i] = run_trial(c, base + i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (std::uint64_t i = 0; i < count; ++i) {
      if (errors[i]) {
        if (file.is_open()) file.flush();
        if (sink) sink->flush();
        std::rethrow_exception(errors[i]);
      }
      ++summary.trials;
      for (const auto& r : results[i]) {
        const std::string line = ineq::to_json(r).dump() + "\n";
        if (file.is_open()) file << line;
        if (sink) *sink << line;
        tally(summary, r);
      }
    }
    if (file.is_open() && !file.good()) throw std::runtime_error("write failed on " + c.out);
  }
  if (file.is_open()) {
    file.flush();
    if (!file.good()) throw std::runtime_error("write failed on " + c.out);
  }
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace bmink::harness
