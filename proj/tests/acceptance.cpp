// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run: one PASS/FAIL line per criterion, with the
// measured runtime against its limit. Exit status is the number of failures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bmink/exact2d.hpp"
#include "bmink/harness.hpp"
#include "bmink/inequalities.hpp"
#include "bmink/json_io.hpp"
#include "bmink/restricted.hpp"
#include "bmink/voxel.hpp"

namespace {

using bmink::Rational;
using bmink::exact2d::ConvexPolygon;
using namespace bmink;

struct Outcome {
  bool ok = true;
  std::string note;
};

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.ok) {
    o.ok = false;
    o.note = what;
  }
}

harness::CampaignSummary campaign(const std::string& theorem, const std::string& engine, std::uint64_t trials,
                                  int dim = 2, double res = 1.0 / 32, double plant_rate = 0,
                                  std::ostream* sink = nullptr) {
  harness::CampaignConfig c;
  c.theorem = theorem;
  c.engine = engine;
  c.trials = trials;
  c.dim = dim;
  c.res = res;
  c.seed = 20260101;
  c.gen.plant_rate = plant_rate;
  return harness::run_campaign(c, sink);
}

std::string counts(const harness::CampaignSummary& s) {
  std::ostringstream o;
  o << s.trials << " trials, " << s.violations << " violations";
  if (s.planted) o << ", " << s.planted << " planted, " << s.equality_hits << " equalities";
  return o.str();
}

std::string capture(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    *status = -1;
    return out;
  }
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), p)) out += buf.data();
  *status = pclose(p);
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// --------------------------------------------------------------------------

Outcome erosion_fixture() {
  Outcome o;
  const auto k = ConvexPolygon::square(2), t = ConvexPolygon::square(1);
  const auto e = exact2d::erode(k, t);
  require(o, e.region && *e.region == ConvexPolygon::square(1), "exact erosion is not [-1,1]^2");
  const double h = 1.0 / 32;
  const double v = voxel::volume(voxel::erode_open(voxel::rasterize(*make_polygon(k), h),
                                                   voxel::rasterize(*make_polygon(t), h)));
  require(o, std::abs(v - 4) <= 0.3, "voxel erosion volume off by more than 0.3");
  o.note = o.ok ? "exact [-1,1]^2; voxel volume " + std::to_string(v) : o.note;
  return o;
}

Outcome simplex_remark() {
  Outcome o;
  const auto d = ConvexPolygon::unit_simplex();
  const auto third = exact2d::scale(d, Rational(1, 3));
  const auto e = exact2d::erode(d, third);
  require(o, e.region.has_value(), "erosion is empty");
  if (o.ok) {
    const auto shift = e.region->vertices()[0];
    require(o, exact2d::translate(*e.region, -shift) == third, "erosion is not a translate of (1/3) simplex");
    o.note = "translate by (" + shift.x.str() + "," + shift.y.str() + ")";
  }
  return o;
}

Outcome thm_av_exact() {
  Outcome o;
  const auto s = campaign("thm-av", "exact", 10000, 2, 1.0 / 32, 0.25);
  require(o, s.violations == 0, "violations recorded");
  require(o, s.planted > 0 && s.equality_hits == s.planted, "planted equality not all detected");
  require(o, s.equality_mismatches == 0, "equality disagrees with classifier");
  require(o, s.equality_classes.count("NoEquality") == 0 && s.equality_classes.count("unclassified") == 0,
          "equality left unclassified");
  if (o.ok) o.note = counts(s);
  return o;
}

Outcome thm_av_voxel() {
  Outcome o;
  const auto s2 = campaign("thm-av", "voxel", 1000, 2, 1.0 / 32);
  const auto s3 = campaign("thm-av", "voxel", 100, 3, 1.0 / 16);
  require(o, s2.violations == 0, "n=2 violations");
  require(o, s3.violations == 0, "n=3 violations");
  if (o.ok) o.note = "n=2: " + counts(s2) + "; n=3: " + counts(s3);
  return o;
}

Outcome decomposition() {
  Outcome o;
  const auto s = campaign("prop-2.3", "voxel", 1000, 2, 1.0 / 32);
  require(o, s.violations == 0, "decomposition verdict failed on a random pair");
  const double h = 1.0 / 32;
  const auto r = voxel::decomposition_check(voxel::rasterize(*make_cube(2, 1), h),
                                            voxel::rasterize(*make_ball({0, 0}, Rational(1, 2)), h));
  require(o, r.all(), "square + disk fixture failed");
  if (o.ok) o.note = counts(s) + "; square + disk: all four verdicts";
  return o;
}

Outcome thm_bbm() {
  Outcome o;
  const auto r = ineq::check_thm_bbm(ConvexPolygon::square(1), ConvexPolygon::square(Rational(1, 2)), Rational(1, 4));
  require(o, std::get<Rational>(r.lhs) == Rational(9, 4) && std::get<Rational>(r.rhs) == Rational(9, 4),
          "fixture is not 9/4 = 9/4");
  const auto s = campaign("thm-bbm", "exact", 1000, 2, 1.0 / 32, 0.25);
  require(o, s.violations == 0, "violations recorded");
  if (o.ok) o.note = "9/4 = 9/4; " + counts(s) + ", " + std::to_string(s.flagged) + " flagged";
  return o;
}

Outcome cor_multi() {
  Outcome o;
  const auto s = campaign("cor-multi", "exact", 1000, 2, 1.0 / 32, 0.25);
  require(o, s.violations == 0, "violations recorded");
  require(o, s.planted > 0 && s.equality_hits == s.planted && s.equality_mismatches == 0,
          "planted translates did not attain equality");
  if (o.ok) o.note = counts(s);
  return o;
}

Outcome rn_suite() {
  Outcome o;
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(std::pow(10.0, -2 + 4.0 * i / 400));
  std::uint64_t evaluations = 0;
  for (int li = 1; li <= 99; ++li) {
    const double l = li / 100.0;
    for (int n = 2; n <= 6; ++n) {
      const double at_one = ineq::eval_Rn(n, l, 1).value;
      for (double x : xs) {
        const double v = ineq::eval_Rn(n, l, x).value;
        ++evaluations;
        if (n == 2) require(o, std::abs(v - 16 * l * l * (1 - l) * (1 - l)) <= 1e-9, "R_2 not constant");
        if (n >= 3 && std::abs(x - 1) >= 1e-3) require(o, v > at_one + 1e-12, "R_n(x) not above R_n(1)");
        require(o, std::abs(v - ineq::eval_Rn(n, l, 1 / x).value) <= 1e-9 * std::max(1.0, v), "x <-> 1/x");
        require(o, std::abs(v - ineq::eval_Rn(n, 1 - l, x).value) <= 1e-9 * std::max(1.0, v),
                "lambda <-> 1 - lambda");
      }
    }
  }
  if (o.ok) o.note = std::to_string(evaluations) + " grid points";
  return o;
}

Outcome lemma_pbm() {
  Outcome o;
  harness::CampaignConfig c;
  c.theorem = "lemma-pbm";
  c.trials = 10000;
  c.seed = 20260101;
  std::ostringstream out;
  const auto s = harness::run_campaign(c, &out);
  require(o, s.violations == 0, "violations recorded");
  std::istringstream lines(out.str());
  std::string line;
  std::uint64_t strict = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (!j.at("details").at("strict_expected").get<bool>()) continue;
    ++strict;
    require(o, j.at("slack").get<double>() > 0, "strictness failed with margin <= 0");
  }
  if (o.ok) o.note = counts(s) + ", " + std::to_string(strict) + " strict with positive margin";
  return o;
}

Outcome section_four(const std::string& cli) {
  Outcome o;
  const auto s = campaign("theta-bounds", "voxel", 200, 2, 1.0 / 32);
  require(o, s.violations == 0, "count bound, erosion bound or containment failed");
  require(o, s.reports == 400, "expected two reports per pair");
  int status = 0;
  const std::string text = capture("\"" + cli + "\" demo remark-4.3 --a 0.01 2>&1", &status);
  require(o, status == 0, "demo exited nonzero");
  require(o, text.find("lhs = vol(dK+dT) = 4/25 = 0.16\n") != std::string::npos, "demo lhs is not 0.16");
  require(o, text.find("= 10001/2500 = 4.0004\n") != std::string::npos, "demo rhs is not 4.0004");
  require(o, text.find("fails (expected") != std::string::npos, "demo does not report the expected failure");
  if (o.ok) o.note = "200 pairs, 400 reports, 0 violations; demo lhs 0.16 vs rhs 4.0004";
  return o;
}

Outcome convergence() {
  Outcome o;
  harness::GenParams p;
  p.coord_range = 2;
  p.denominator = 1000;
  const std::array<double, 3> hs = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::array<std::vector<double>, 3> err;
  harness::Rng rng(harness::trial_seed(20260101, 0));
  for (int i = 0; i < 100; ++i) {
    const auto k = harness::gen_convex_polygon(rng, p), t = harness::gen_convex_polygon(rng, p);
    const double exact = exact2d::area(exact2d::minkowski_sum(k, t)).to_double();
    for (std::size_t j = 0; j < hs.size(); ++j) {
      const auto sum = voxel::dilate(voxel::rasterize(*make_polygon(k), hs[j]), voxel::rasterize(*make_polygon(t), hs[j]));
      err[j].push_back(std::abs(voxel::volume(sum) - exact));
    }
  }
  const double m0 = median(err[0]), m1 = median(err[1]), m2 = median(err[2]);
  const double r1 = m1 / m0, r2 = m2 / m1;
  require(o, r1 <= 0.6 && r2 <= 0.6, "median error ratio above 0.6");
  char buf[160];
  std::snprintf(buf, sizeof buf, "median errors %.4g, %.4g, %.4g; ratios %.3f, %.3f", m0, m1, m2, r1, r2);
  o.note = o.ok ? buf : o.note + " (" + buf + ")";
  return o;
}

Outcome determinism(const std::string& cli) {
  Outcome o;
  for (const std::string theorem : {"thm-av", "thm-bbm", "cor-multi", "lemma-pbm", "rn", "thm-4.2"}) {
    std::ostringstream a, b;
    harness::CampaignConfig c;
    c.theorem = theorem;
    c.trials = 300;
    c.seed = 77;
    c.gen.plant_rate = 0.3;
    c.threads = 1;
    harness::run_campaign(c, &a);
    c.threads = 8;
    harness::run_campaign(c, &b);
    require(o, a.str() == b.str(), theorem + " output depends on thread count");
  }
  const std::string cmd = "\"" + cli + "\" verify prop-2.3 --engine voxel --trials 50 --seed 9 --res 1/16 2>/dev/null";
  int s1 = 0, s2 = 0;
  const std::string first = capture("BMINK_THREADS=1 " + cmd, &s1);
  const std::string second = capture(cmd, &s2);
  require(o, s1 == 0 && s2 == 0 && !first.empty() && first == second, "CLI output not byte-identical");
  if (o.ok) o.note = "6 exact campaigns x 2 thread counts, CLI voxel campaign x 2";
  return o;
}

}  // namespace

int main() {
  const std::string cli = BMINK_CLI_PATH;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "erosion fixture", 1, erosion_fixture},
      {2, "simplex remark", 1, simplex_remark},
      {3, "average boundary sum, 1e4 exact pairs", 120, thm_av_exact},
      {4, "average boundary sum, voxel non-convex", 600, thm_av_voxel},
      {5, "decomposition, 1e3 voxel pairs + fixture", 300, decomposition},
      {6, "lambda product form", 60, thm_bbm},
      {7, "m = 3 bodies, 1e3 exact trials", 0, cor_multi},
      {8, "R_n suite", 10, rn_suite},
      {9, "power-mean lemma, 1e4 tuples", 0, lemma_pbm},
      {10, "restricted sums and remark demo", 300, [&] { return section_four(cli); }},
      {11, "oracle convergence", 0, convergence},
      {12, "determinism", 0, [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.ok = false;
      o.note += " [over time limit]";
    }
    failures += !o.ok;
    char timing[64];
    if (c.limit_s > 0) std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, c.limit_s);
    else std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::printf("%s %2d  %-42s %-16s %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, timing, o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
