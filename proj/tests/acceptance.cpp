// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance report: one PASS/FAIL line per criterion.  The process exits
// 0 once every criterion has been evaluated; --strict makes any FAIL fatal.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "mirror/assumptions.hpp"
#include "mirror/coupling.hpp"
#include "mirror/errors.hpp"
#include "mirror/hinges.hpp"
#include "mirror/spectral.hpp"

using namespace mirror;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t g_seed = 1;

// First zero of J1' by bisection on the library Bessel function.
double j1_prime_zero() {
  auto d = [](double x) { return 0.5 * (std::cyl_bessel_j(0.0, x) - std::cyl_bessel_j(2.0, x)); };
  double lo = 1.0, hi = 2.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (d(lo) * d(mid) <= 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const SpecialPoints sp = compute_special_points(fixtures::example1().curve, kPi / 4);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  std::string worst_name;
  for (const auto& row : fixtures::example1_table()) {
    const auto& m = fixtures::named(sp, row.name);
    const double e = m.known ? std::max(std::abs(m.x.x - row.x), std::abs(m.x.y - row.y)) : 1e9;
    if (e > worst) {
      worst = e;
      worst_name = row.name;
    }
  }
  const double r2 = std::sqrt(2.0);
  const double eP1 = dist(sp.P[1].x, {-1 - r2, -1});
  const double eQ6 = dist(sp.Qp[6].x, {-1.5 * r2, -1 + 1.5 * r2});
  Outcome o;
  o.pass = worst <= 0.015 && eP1 <= 1e-8 && eQ6 <= 1e-8 && secs < 10.0;
  o.detail = "max table error " + fmt("%.4f", worst) + " (" + worst_name + "), P1 " + fmt("%.1e", eP1) + ", Q'6 " +
             fmt("%.1e", eQ6) + ", " + fmt("%.1f", secs) + " s";
  return o;
}

Outcome c2() {
  LadderOptions lo;
  lo.h = 0.04;
  Outcome o;
  o.pass = true;
  struct Case {
    const char* name;
    double exact;  // 0 when only the multiplicity is checked
    Multiplicity want;
  };
  const double j = j1_prime_zero();
  const Case cases[] = {{"rect-1x2", kPi * kPi / 4, Multiplicity::Simple},
                        {"square", 0.0, Multiplicity::Double},
                        {"disk", j * j, Multiplicity::Double}};
  for (const Case& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const EigenReport rep = eigen_ladder(preset_domain(c.name).curve, lo);
    const double secs = seconds_since(t0);
    bool ok = secs < 120.0;
    std::string d = std::string(c.name) + ": mu2 " + fmt("%.6f", rep.mu_ext[1]);
    if (c.exact > 0) {
      const double rel = std::abs(rep.mu_ext[1] / c.exact - 1.0);
      ok = ok && rel <= 5e-3;
      d += " (rel " + fmt("%.1e", rel) + ")";
    }
    if (c.want == Multiplicity::Double) ok = ok && rep.verdict == Multiplicity::Double && rep.gap_ratio < rep.gap_error;
    d += std::string(" ") + to_string(rep.verdict) + ", " + fmt("%.0f", secs) + " s";
    o.pass = o.pass && ok;
    o.detail += (o.detail.empty() ? "" : "; ") + d;
  }
  return o;
}

const EigenReport& example1_ladder() {
  static const EigenReport rep = eigen_ladder(fixtures::example1().curve, LadderOptions{});
  return rep;
}

Outcome c3() {
  const EigenReport& rep = example1_ladder();
  bool stable = true;
  double spread = 0.0;
  for (const auto& lv : rep.levels) {
    stable = stable && lv.gap_ratio > 10.0 * rep.gap_error;
    spread = std::max(spread, std::abs(lv.gap_ratio / rep.gap_ratio - 1.0));
  }
  stable = stable && spread < 0.1;
  Outcome o;
  o.pass = rep.verdict == Multiplicity::Simple && rep.gap_ratio > 10.0 * rep.gap_error && stable;
  o.detail = std::string(to_string(rep.verdict)) + ", gap " + fmt("%.4f", rep.gap_ratio) + " vs error " +
             fmt("%.1e", rep.gap_error) + ", level spread " + fmt("%.1e", spread);
  return o;
}

const InvarianceReport& invariance_run() {
  static const InvarianceReport rep = [] {
    const auto& c = fixtures::example1().curve;
    const auto& ls = fixtures::example1_lset();
    const auto starts = starts_in_T(c, ls, 20, g_seed);
    return invariance_mc(c, ls, starts, {1e-3, 1e-4, 1e-5}, 1.0, 1000, g_seed);
  }();
  return rep;
}

Outcome c4() {
  const auto t0 = std::chrono::steady_clock::now();
  const InvarianceReport& rep = invariance_run();
  const double secs = seconds_since(t0);
  Outcome o;
  const double last = rep.levels.back().exit_fraction;
  o.pass = rep.strictly_decreasing && last <= 0.02;
  for (const auto& lv : rep.levels)
    o.detail += "dt " + fmt("%.0e", lv.dt) + ": " + fmt("%.4f", lv.exit_fraction) + " +- " + fmt("%.4f", lv.exit_se) +
                " (" + std::to_string(lv.n_exited) + "/" + std::to_string(lv.n_paths) + "); ";
  o.detail += std::string("strictly decreasing ") + (rep.strictly_decreasing ? "yes" : "no") + ", last <= 0.02 " +
              (last <= 0.02 ? "yes" : "no") + ", " + fmt("%.0f", secs) + " s";
  return o;
}

Outcome c5() {
  const DriftReport d = drift_diagnostic(invariance_run());
  Outcome o;
  o.pass = d.u_order >= 0.5 && d.theta_order >= 0.5;
  o.detail = "u order " + fmt("%.3f", d.u_order) + ", theta order " + fmt("%.3f", d.theta_order) + "; residuals u";
  for (double r : d.u_residual) o.detail += " " + fmt("%.2e", r);
  o.detail += ", theta";
  for (double r : d.theta_residual) o.detail += " " + fmt("%.2e", r);
  return o;
}

Outcome c6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& c = fixtures::example1().curve;
  const LyapunovSet ls = assemble(c, compute_special_points(c, kPi / 4));
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = secs < 10.0;
  double worst_norm = 0.0;
  for (const auto& a : ls.ode) {
    o.pass = o.pass && a.positive && a.normality <= 1e-6 && a.ordering_ok;
    worst_norm = std::max(worst_norm, a.normality);
    o.detail += std::string(to_string(a.family)) + (a.positive ? " positive" : " NOT positive") +
                (a.ordering_ok ? " ordered; " : " NOT ordered; ");
  }
  // Connector orderings P5 < P'2 and Q'2 < Q5, and their mirror images.
  const UPoint u2 = ls.corner("u2"), u5 = ls.corner("u5"), u2p = ls.corner("u2'"), u5p = ls.corner("u5'");
  const bool conn = u5.u1 < u2p.u1 && u2p.u2 < u5.u2 && u2.u1 < u5p.u1 && u5p.u2 < u2.u2;
  o.pass = o.pass && conn;
  o.detail += std::string("connector orderings ") + (conn ? "hold" : "VIOLATED") + ", max |p.n(Q)+1| " +
              fmt("%.1e", worst_norm) + ", " + fmt("%.1f", secs) + " s";
  return o;
}

Outcome c7() {
  const auto& c = fixtures::example1().curve;
  const auto& sp = fixtures::example1_sp();
  PhiloxStream rng(g_seed, 0x7777);
  Outcome o;
  long total = 0, bad = 0;
  ExtremalOptions eo;
  eo.samples = 2000;
  for (OdeFamily f : {OdeFamily::UpperPlain, OdeFamily::LowerPlain, OdeFamily::UpperPrimed, OdeFamily::LowerPrimed}) {
    // In the frame of its family every chord belongs to the upper plain
    // family, where the inequality reads d(H right) > d(H left).
    const FamilyOde ode(c, sp, f);
    int fam_bad = 0;
    for (int i = 0; i < 100; ++i) {
      ++total;
      try {
        const Chord ch = family_chord(ode.frame_curve(), ode.frame_sp(), OdeFamily::UpperPlain, rng.uniform(),
                                      rng.uniform());
        const ExtremalPoints ex = extremal_points(ode.frame_curve(), ch, ExtremalFamily::UpperHinges, eo);
        if (!ex.levels_ok || !ex.ordering_ok) ++fam_bad;
      } catch (const Error&) {
        ++fam_bad;
      }
    }
    bad += fam_bad;
    o.detail += std::string(to_string(f)) + " " + std::to_string(fam_bad) + "/100; ";
  }
  o.pass = bad == 0;
  o.detail += std::to_string(bad) + " violations over " + std::to_string(total) + " chords";
  return o;
}

Outcome c8() {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 5.0;
  cfg.seed = g_seed;
  cfg.diagnostics = false;
  const auto& c1 = fixtures::example1().curve;
  const auto start = starts_in_T(c1, fixtures::example1_lset(), 1, g_seed).front();
  const MarginalReport a = marginal_law_test(c1, start.x, start.y, cfg, 10000);
  const auto disk = preset_domain("disk").curve;
  const std::function<double(double)> uniform_coord = [](double x) {
    x = std::clamp(x, -1.0, 1.0);
    return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / kPi;
  };
  const MarginalReport b = marginal_law_test(disk, {-0.3, 0.1}, {0.4, -0.2}, cfg, 10000, &uniform_coord);
  Outcome o;
  o.pass = a.min_p() > 0.01 && b.min_p() > 0.01;
  auto ps = [](const MarginalReport& r) {
    return fmt("%.3f", r.X[0].p_value) + " " + fmt("%.3f", r.X[1].p_value) + " " + fmt("%.3f", r.Y[0].p_value) + " " +
           fmt("%.3f", r.Y[1].p_value);
  };
  o.detail = "example1 p-values " + ps(a) + "; disk p-values " + ps(b) + " (10000 paths, t=5, dt=1e-3)";
  return o;
}

Outcome c9() {
  AnalyzeOptions ao;
  ao.seed = g_seed;
  const AnalysisReport a = analyze_eigenfunction(fixtures::example1().curve, &fixtures::example1_lset(),
                                                 example1_ladder(), ao);
  Outcome o;
  o.pass = a.have_regions && a.mono.fraction >= 0.999 && a.sign.bad_fraction <= 1e-3 && a.cone.fraction >= 0.99;
  o.detail = "monotone " + fmt("%.4f", a.mono.fraction) + " (tol " + fmt("%.1e", a.tol_mono) + "), sign bad " +
             fmt("%.4f", a.sign.bad_fraction) + " of " + std::to_string(a.sign.n_left + a.sign.n_right) +
             " vertices, cone " + fmt("%.4f", a.cone.fraction) + " of " + std::to_string(a.cone.n_triangles) +
             " triangles";
  return o;
}

Outcome c10() {
  const EigenReport rep = eigen_ladder(preset_domain("example2").curve, LadderOptions{});
  Outcome o;
  o.pass = true;
  for (size_t l = 0; l < rep.levels.size(); ++l) {
    const auto& lv = rep.levels[l];
    const HotSpots h = hot_spots(lv.mesh, lv.eig.vectors[1]);
    o.pass = o.pass && h.max_on_boundary && h.min_on_boundary;
    o.detail += "level " + std::to_string(l) + ": max (" + fmt("%.3f", h.xmax.x) + ", " + fmt("%.3f", h.xmax.y) +
                ")" + (h.max_on_boundary ? " boundary" : " INTERIOR") + ", min (" + fmt("%.3f", h.xmin.x) + ", " +
                fmt("%.3f", h.xmin.y) + ")" + (h.min_on_boundary ? " boundary" : " INTERIOR") + "; ";
  }
  o.detail += std::string("verdict ") + to_string(rep.verdict);
  return o;
}

Outcome c11() {
  const auto& c = fixtures::example1().curve;
  const Vec2 ctr = c.center();
  const double r = 0.15 * c.diameter();
  const std::vector<Vec2> xs = {ctr, ctr + Vec2{0.8 * r, 0}, ctr + Vec2{-0.8 * r, 0}, ctr + Vec2{0, 0.6 * r},
                                ctr + Vec2{0.5 * r, -0.5 * r}};
  HeatOptions ho;
  ho.mc.dt = 1e-4;
  ho.mc.seed = g_seed;
  ho.mc_paths = 10000;
  const HeatReport rep = heat_cross_check(c, Bump{ctr, r, 1.0}, 1.0, xs, ho);
  Outcome o;
  o.pass = rep.all_pass && rep.rows.size() == 5;
  double worst = 0.0;
  for (const auto& row : rep.rows) worst = std::max(worst, row.diff / (3 * (row.mc_se + row.mesh_error)));
  o.detail = std::to_string(rep.rows.size()) + " points, worst |FEM-MC| / 3(se+mesh) = " + fmt("%.3f", worst);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance report"};
  std::string report_path;
  std::string only;
  bool strict = false;
  app.add_option("--report", report_path, "Also write the report to this file");
  app.add_option("--only", only, "Comma-separated criterion numbers");
  app.add_option("--seed", g_seed, "Random seed")->capture_default_str();
  app.add_flag("--strict", strict, "Exit nonzero when a criterion fails");
  CLI11_PARSE(app, argc, argv);

  std::set<int> pick;
  {
    std::stringstream ss(only);
    for (std::string t; std::getline(ss, t, ',');)
      if (!t.empty()) pick.insert(std::stoi(t));
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"example 1 special points table", c1},
      {"eigenvalue oracles (rectangle, square, disk)", c2},
      {"example 1 second eigenvalue simple", c3},
      {"invariance of the Lyapunov set along the dt ladder", c4},
      {"drift identity convergence order", c5},
      {"ODE arcs: positivity, normality, ordering", c6},
      {"hinge distance inequality on random family chords", c7},
      {"marginal laws of the coupling", c8},
      {"eigenfunction monotonicity, sign and gradient cone", c9},
      {"example 2 hot spots on the boundary", c10},
      {"heat equation: finite elements against Monte Carlo", c11},
  };

  std::ostringstream out;
  int passed = 0, run = 0;
  const auto t_all = std::chrono::steady_clock::now();
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!pick.empty() && !pick.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    ++run;
    passed += o.pass;
    char head[160];
    std::snprintf(head, sizeof head, "criterion %2d %s  %s [%.0f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                  seconds_since(t0));
    const std::string line = std::string(head) + "    " + o.detail + "\n";
    std::fputs(line.c_str(), stdout);
    std::fflush(stdout);
    out << line;
  }
  char tail[128];
  std::snprintf(tail, sizeof tail, "acceptance: %d/%d criteria pass [%.0f s total]\n", passed, run,
                seconds_since(t_all));
  std::fputs(tail, stdout);
  out << tail;
  if (!report_path.empty()) std::ofstream(report_path) << out.str();
  return strict && passed != run ? 1 : 0;
}
