// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmink/exact2d.hpp"
#include "bmink/harness.hpp"
#include "bmink/json_io.hpp"
#include "bmink/render.hpp"
#include "bmink/restricted.hpp"
#include "bmink/voxel.hpp"

namespace {

using bmink::Rational;
using nlohmann::json;

double parse_res(const std::string& s) {
  const Rational r = Rational::parse(s);
  if (r.sign() <= 0) throw std::invalid_argument("--res must be positive");
  return r.to_double();
}

bmink::voxel::Adjacency parse_adjacency(const std::string& s) {
  return s == "face" ? bmink::voxel::Adjacency::Face : bmink::voxel::Adjacency::Full;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

int run_verify(const std::string& theorem, const std::string& engine, std::uint64_t trials, std::uint64_t seed,
               int dim, const std::string& res, const std::vector<std::string>& lambdas, const std::string& out,
               int m, double plant_rate, const std::string& plant_mode, const std::string& adjacency,
               unsigned threads) {
  bmink::harness::CampaignConfig c;
  c.theorem = theorem;
  c.engine = engine;
  c.trials = trials;
  c.seed = seed;
  c.dim = dim;
  c.res = parse_res(res);
  for (const auto& l : lambdas) c.lambdas.push_back(Rational::parse(l));
  c.out = out;
  c.m = m;
  c.gen.plant_rate = plant_rate;
  c.gen.plant_mode = plant_mode == "translate"    ? bmink::harness::PlantMode::Translate
                     : plant_mode == "homothetic" ? bmink::harness::PlantMode::HomotheticSymmetric
                                                  : bmink::harness::PlantMode::Both;
  c.adjacency = parse_adjacency(adjacency);
  c.threads = threads;
  const auto summary = bmink::harness::run_campaign(c, out.empty() ? &std::cout : nullptr);
  std::cerr << summary.to_json().dump(2) << "\n";
  return summary.violations > 0 ? 1 : 0;
}

int run_decompose(const std::string& kpath, const std::string& tpath, const std::string& res,
                  const std::string& adjacency) {
  const double h = parse_res(res);
  const auto k = bmink::voxel::rasterize(*bmink::io::load_shape(kpath), h);
  const auto t = bmink::voxel::rasterize(*bmink::io::load_shape(tpath), h);
  const auto r = bmink::voxel::decomposition_check(k, t, parse_adjacency(adjacency));
  std::cout << "K+T = K+dT: " << yes_no(r.sum_equals_k_plus_dt) << "\n"
            << "K+T = (dK+dT) u (K-T): " << yes_no(r.sum_equals_union) << "\n"
            << "(dK+dT) n (K-T) empty: " << yes_no(r.union_disjoint) << "\n"
            << "dK+dT = dK+T: " << yes_no(r.boundary_sum_equals_dk_plus_t) << "\n"
            << "cells: sum " << r.sum_cells << ", boundary sum " << r.boundary_sum_cells << ", hole "
            << r.erosion_cells << (r.swapped ? " (K and T swapped)" : "") << "\n";
  return r.all() ? 0 : 1;
}

int run_erode(const std::string& kpath, const std::string& tpath, const std::string& engine, const std::string& res) {
  const auto ks = bmink::io::load_shape(kpath);
  const auto ts = bmink::io::load_shape(tpath);
  json out;
  if (engine == "exact") {
    const auto r = bmink::exact2d::erode(bmink::to_polygon(*ks), bmink::to_polygon(*ts));
    out = {{"engine", "exact"}, {"empty", r.is_empty()}, {"area", r.area().str()}, {"note", r.kOpennessNote}};
    if (r.region) out["region"] = bmink::io::polygon_to_json(*r.region);
  } else {
    const double h = parse_res(res);
    const auto e = bmink::voxel::erode_open(bmink::voxel::rasterize(*ks, h), bmink::voxel::rasterize(*ts, h));
    out = {{"engine", "voxel"}, {"h", h}, {"empty", e.empty()}, {"cells", e.count()},
           {"volume", bmink::voxel::volume(e)}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_demo(const std::string& which, const std::string& a_text) {
  if (which != "remark-4.3") throw std::invalid_argument("unknown demo: " + which);
  const Rational a = Rational::parse(a_text);
  if (a.sign() <= 0) throw std::invalid_argument("--a must be positive");
  const auto k = bmink::exact2d::ConvexPolygon::square(1);
  const auto t = bmink::exact2d::scale(k, a);
  const auto rep = bmink::restricted::check_arithmetic_bm(k, t);
  const Rational lhs = std::get<Rational>(rep.lhs), rhs = std::get<Rational>(rep.rhs);
  const Rational ratio = bmink::exact2d::area(k) / bmink::exact2d::area(t);
  char line[160];
  std::cout << "K = [-1,1]^2, T = a K with a = " << a.str() << ", n = 2\n";
  std::snprintf(line, sizeof line, "lhs = vol(dK+dT) = %s = %.6g\n", lhs.str().c_str(), lhs.to_double());
  std::cout << line;
  std::snprintf(line, sizeof line, "rhs = vol(K)+vol(T) = %s = %.6g\n", rhs.str().c_str(), rhs.to_double());
  std::cout << line;
  std::cout << "volume ratio vol(K)/vol(T) = " << ratio.str() << " ("
            << (rep.details.at("ratio_condition").get<bool>() ? "inside" : "outside") << " [1/2, 2])\n";
  std::cout << "inequality: "
            << (rep.status == bmink::ineq::Status::Pass ? "holds"
                : rep.status == bmink::ineq::Status::ExpectedFailure
                    ? "fails (expected: the volume ratio condition is violated)"
                    : "fails (violation)")
            << "\n";
  return rep.status == bmink::ineq::Status::Violation ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minkowski sums, differences and boundary sums; inequality campaigns"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option defaults (flags win)");

  auto* verify = app.add_subcommand("verify", "Run a randomized campaign");
  std::string theorem, engine = "exact", res = "1/32", out, plant_mode = "both", adjacency = "full";
  std::uint64_t trials = 100, seed = 1;
  int dim = 2, m = 3;
  double plant_rate = 0.25;
  unsigned threads = 0;
  std::vector<std::string> lambdas;
  verify->add_option("theorem", theorem, "thm-av|thm-bbm|cor-multi|lemma-pbm|rn|thm-4.2|prop-2.3|theta-bounds")
      ->required()
      ->check(CLI::IsMember(bmink::harness::campaign_theorems()));
  verify->add_option("--engine", engine)->check(CLI::IsMember({"exact", "voxel"}))->capture_default_str();
  verify->add_option("--trials", trials)->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--seed", seed)->capture_default_str();
  verify->add_option("--dim", dim)->check(CLI::Range(2, 4))->capture_default_str();
  verify->add_option("--res", res, "grid spacing, e.g. 1/32")->capture_default_str();
  verify->add_option("--lambda", lambdas, "lambda value(s) p/q; drawn per trial when absent");
  verify->add_option("--out", out, "JSONL output file (stdout when absent)");
  verify->add_option("--m", m, "bodies for cor-multi")->check(CLI::Range(3, 8))->capture_default_str();
  verify->add_option("--plant-rate", plant_rate)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  verify->add_option("--plant-mode", plant_mode)
      ->check(CLI::IsMember({"both", "translate", "homothetic"}))
      ->capture_default_str();
  verify->add_option("--adjacency", adjacency, "interior adjacency for voxel boundaries")
      ->check(CLI::IsMember({"face", "full"}))
      ->capture_default_str();
  verify->add_option("--threads", threads, "worker cap (default: BMINK_THREADS or all cores)");

  auto* decompose = app.add_subcommand("decompose", "Voxel decomposition verdicts for K + T");
  std::string kpath, tpath, dres = "1/32", dadj = "full";
  decompose->add_option("--k", kpath)->required()->check(CLI::ExistingFile);
  decompose->add_option("--t", tpath)->required()->check(CLI::ExistingFile);
  decompose->add_option("--res", dres)->capture_default_str();
  decompose->add_option("--adjacency", dadj)->check(CLI::IsMember({"face", "full"}))->capture_default_str();

  auto* erode = app.add_subcommand("erode", "Minkowski difference K (-) T");
  std::string ek, et, eengine = "exact", eres = "1/32";
  erode->add_option("--k", ek)->required()->check(CLI::ExistingFile);
  erode->add_option("--t", et)->required()->check(CLI::ExistingFile);
  erode->add_option("--engine", eengine)->check(CLI::IsMember({"exact", "voxel"}))->capture_default_str();
  erode->add_option("--res", eres)->capture_default_str();

  auto* render = app.add_subcommand("render", "SVG of T, K with K (-) T, and dK + dT");
  std::string rk, rt, rout;
  render->add_option("--k", rk)->required()->check(CLI::ExistingFile);
  render->add_option("--t", rt)->required()->check(CLI::ExistingFile);
  render->add_option("--out", rout)->required();

  auto* demo = app.add_subcommand("demo", "Closed-form demonstrations");
  std::string which, a_text = "0.01";
  demo->add_option("name", which, "remark-4.3")->required()->check(CLI::IsMember({"remark-4.3"}));
  demo->add_option("--a", a_text, "scale of T = aK")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      return run_verify(theorem, engine, trials, seed, dim, res, lambdas, out, m, plant_rate, plant_mode, adjacency,
                        threads);
    }
    if (*decompose) return run_decompose(kpath, tpath, dres, dadj);
    if (*erode) return run_erode(ek, et, eengine, eres);
    if (*render) {
      bmink::render::render_decomposition_svg(*bmink::io::load_shape(rk), *bmink::io::load_shape(rt), rout);
      return 0;
    }
    if (*demo) return run_demo(which, a_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
