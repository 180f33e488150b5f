// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
//
// mirror-cli: assumption checks, Lyapunov sets, mirror-coupling Monte Carlo
// and Neumann eigenfunction analysis for convex planar domains.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mirror/assumptions.hpp"
#include "mirror/coupling.hpp"
#include "mirror/domain_io.hpp"
#include "mirror/errors.hpp"
#include "mirror/lyapunov.hpp"
#include "mirror/manifest.hpp"
#include "mirror/spectral.hpp"
#include "mirror/special_points.hpp"
#include "mirror/svg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mirror;

namespace {

enum Exit { kOk = 0, kInput = 1, kAssumption = 2, kUnresolved = 3, kNumerical = 4 };

int exit_code(Errc c) {
  switch (c) {
    case Errc::NotClosed:
    case Errc::NotConvex:
    case Errc::DegeneratePiece:
    case Errc::JointPoint:
    case Errc::InvalidInput:
    case Errc::UnknownArtifactKind:
    case Errc::CoincidentPoints:
    case Errc::RhoTooLarge:
      return kInput;
    case Errc::EmptyHingeFreeArc:
    case Errc::FamilyViolation:
    case Errc::OrderingViolated:
    case Errc::ArcsIntersect:
    case Errc::ConnectorImpossible:
    case Errc::NotAdmissible:
    case Errc::OrientationViolated:
      return kAssumption;
    case Errc::MultiplicityUnresolved:
      return kUnresolved;
    default:
      return kNumerical;
  }
}

struct Globals {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
  bool json_out = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One command invocation: owns the manifest and stamps every output.
class Run {
 public:
  Run(const Globals& g, std::string command, const Domain* d, json config)
      : g_(g), file_("manifest-" + command + ".json") {
    m_.command = std::move(command);
    m_.domain_hash = d ? hex64(domain_hash(*d)) : "";
    m_.config = std::move(config);
    m_.seed = g.seed;
    m_.started = utc_now();
  }

  std::string put_json(const std::string& name, json art) {
    stamp(art, m_, file_);
    return put(name, dump(art));
  }
  std::string put_svg(const std::string& name, const std::string& svg) {
    const auto k = svg.find('\n');
    return put(name, svg.substr(0, k + 1) + "<!-- run_id=" + m_.run_id() + " manifest=" + file_ + " -->" +
                         svg.substr(k));
  }
  std::string put_csv(const std::string& name, const std::string& csv) {
    return put(name, "# run_id=" + m_.run_id() + " manifest=" + file_ + "\n" + csv);
  }
  void finish() {
    m_.finished = utc_now();
    put(file_, dump(manifest_json(m_)));
  }
  const RunManifest& manifest() const { return m_; }

 private:
  std::string put(const std::string& name, const std::string& text) {
    fs::create_directories(g_.out_dir);
    const fs::path p = fs::path(g_.out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(Errc::InvalidInput, "cannot write " + p.string());
    out << text;
    if (name != file_) m_.outputs.push_back(name);
    return p.string();
  }

  const Globals& g_;
  RunManifest m_;
  std::string file_;
};

void report(const Globals& g, const json& j, const std::string& text) {
  if (g.json_out) std::cout << j.dump() << "\n";
  else std::cout << text;
}

Domain load(const std::string& spec, double alpha) {
  Domain d = load_domain(spec);
  if (std::isfinite(alpha)) d.alpha = alpha;
  return d;
}

json outline_json(const BoundaryCurve& curve) {
  json o = json::array();
  for (const Vec2& p : boundary_polygon(curve)) o.push_back({p.x, p.y});
  return o;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) v.push_back(std::stod(item));
  return v;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Special points with the hinge-free requirement relaxed, so assumption
// checks can still report witnesses.
SpecialPoints points_relaxed(const Domain& d) {
  SpecialOptions so;
  so.require_hinge_free = false;
  return compute_special_points(d.curve, d.alpha, so);
}

// ---- stages shared by single commands and the pipeline -------------------

json stage_special_points(Run& run, const Domain& d, SpecialPoints* out) {
  *out = compute_special_points(d.curve, d.alpha);
  json art = special_points_json(*out);
  art["kind"] = "special_points";
  art["outline"] = outline_json(d.curve);
  run.put_json("special_points.json", art);
  run.put_svg("special_points.svg", svg_domain(d.curve, out));
  return art;
}

json stage_lyapunov(Run& run, const Domain& d, const SpecialPoints& sp, std::unique_ptr<LyapunovSet>* out) {
  *out = std::make_unique<LyapunovSet>(assemble(d.curve, sp));
  json art = lyapunov_json(**out);
  run.put_json("lyapunov.json", art);
  run.put_svg("lyapunov.svg", render_artifact(art));
  return art;
}

struct InvarianceArgs {
  int starts = 20;
  int paths = 100;
  std::string dts = "1e-3,1e-4,1e-5";
  double t_max = 1.0;
  int show_paths = 5;
};

json stage_invariance(Run& run, const Domain& d, const LyapunovSet& ls, const InvarianceArgs& a,
                      std::uint64_t seed) {
  const auto starts = starts_in_T(d.curve, ls, a.starts, seed);
  const auto rep = invariance_mc(d.curve, ls, starts, parse_list(a.dts), a.t_max, a.paths, seed);
  json art = invariance_json(rep);
  json loop = json::array();
  for (const auto& u : ls.loop) loop.push_back({u.u1, u.u2});
  art["loop"] = loop;
  art["ubar1"] = ls.sp.ubar1;
  art["ubar2"] = ls.sp.ubar2;
  // A few recorded trajectories for the overlay.
  SimConfig cfg;
  cfg.dt = parse_list(a.dts).back();
  cfg.t_max = a.t_max;
  cfg.seed = seed;
  cfg.record_stride = std::max(1, static_cast<int>(std::lround(1e-3 / cfg.dt)));
  json paths = json::array();
  for (int i = 0; i < std::min<int>(a.show_paths, static_cast<int>(starts.size())); ++i) {
    const PathRecord r = simulate(d.curve, &ls, starts[i].x, starts[i].y, cfg, 0xfeed0000ULL + i);
    json p = json::array();
    for (const auto& s : r.samples)
      if (s.U && !s.coupled) p.push_back({s.U->u1, s.U->u2});
    paths.push_back(p);
  }
  art["u_paths"] = paths;
  run.put_json("invariance.json", art);
  run.put_svg("invariance.svg", render_artifact(art));
  return art;
}

struct EigenArgs {
  double h = 0.1;
  int levels = 3;
  int k = 3;
};

EigenReport run_ladder(const Domain& d, const EigenArgs& a, std::uint64_t seed) {
  LadderOptions lo;
  lo.h = a.h;
  lo.levels = a.levels;
  lo.eig.k = a.k;
  lo.mesh.seed = seed;
  return eigen_ladder(d.curve, lo);
}

std::string psi_csv(const TriMesh& mesh, const std::vector<double>& psi) {
  std::ostringstream o;
  o << "x,y,psi\n";
  char buf[96];
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.12g\n", mesh.vertices[i].x, mesh.vertices[i].y, psi[i]);
    o << buf;
  }
  return o.str();
}

json stage_eigen(Run& run, const Domain& d, const EigenReport& rep) {
  json art = eigen_json(rep);
  const auto& f = rep.finest();
  art["field"] = field_json(f.mesh, f.eig.vectors[1]);
  art["outline"] = outline_json(d.curve);
  art["nodal"] = {{"polylines", json::array()}};
  for (const auto& l : nodal_line(f.mesh, f.eig.vectors[1]).polylines) {
    json pl = json::array();
    for (const Vec2& p : l) pl.push_back({p.x, p.y});
    art["nodal"]["polylines"].push_back(pl);
  }
  run.put_json("eigen.json", art);
  run.put_csv("psi2.csv", psi_csv(f.mesh, f.eig.vectors[1]));
  run.put_svg("eigen.svg", render_artifact(art));
  art.erase("field");
  return art;
}

json stage_analyze(Run& run, const Domain& d, const LyapunovSet* ls, const EigenReport& rep, double tol_angle,
                   std::uint64_t seed) {
  AnalyzeOptions ao;
  ao.tol_angle = tol_angle;
  ao.seed = seed;
  const AnalysisReport a = analyze_eigenfunction(d.curve, ls, rep, ao);
  json art = analysis_json(a);
  const auto& f = rep.finest();
  art["field"] = field_json(f.mesh, f.eig.vectors[1]);
  art["outline"] = outline_json(d.curve);
  if (a.have_regions) {
    const auto& sp = ls->sp;
    const auto poly = boundary_polygon(d.curve);
    auto region = [&](Vec2 a0, Vec2 b0, Vec2 other) {
      const int s = cross(b0 - a0, other - a0) > 0 ? -1 : 1;
      json r = json::array();
      for (const Vec2& p : clip_half_plane(poly, a0, b0, s)) r.push_back({p.x, p.y});
      return r;
    };
    json ov;
    ov["DL"] = region(sp.P[1].x, sp.Qp[6].x, sp.Q[6].x);
    ov["DR"] = region(sp.Pp[1].x, sp.Q[6].x, sp.Qp[6].x);
    json viol = json::array();
    for (int t : a.cone.violations) {
      const auto& T = f.mesh.triangles[t];
      const Vec2 c = (f.mesh.vertices[T[0]] + f.mesh.vertices[T[1]] + f.mesh.vertices[T[2]]) / 3.0;
      viol.push_back({c.x, c.y});
    }
    ov["violations"] = viol;
    art["overlay"] = ov;
  }
  run.put_json("analysis.json", art);
  run.put_svg("analysis.svg", render_artifact(art));
  art.erase("field");
  art.erase("overlay");
  art.erase("outline");
  return art;
}

// ---- commands --------------------------------------------------------------

int cmd_validate(const Globals& g, const std::string& spec) {
  const Domain d = load(spec, NAN);
  const auto& c = d.curve;
  json corners = json::array();
  for (double s : c.corner_positions()) corners.push_back({c.point_at(s).x, c.point_at(s).y});
  json j = {{"kind", "validation"}, {"ok", true},          {"name", d.name},     {"pieces", d.pieces.size()},
            {"length", c.total_length()}, {"area", c.area()}, {"diameter", c.diameter()}, {"corners", corners}};
  report(g, j,
         "ok: " + d.name + ", " + std::to_string(d.pieces.size()) + " pieces, length " +
             fmt("%.6f", c.total_length()) + ", area " + fmt("%.6f", c.area()) + "\n");
  return kOk;
}

int cmd_special_points(const Globals& g, const std::string& spec, double alpha) {
  const Domain d = load(spec, alpha);
  Run run(g, "special-points", &d, {{"alpha", d.alpha}});
  SpecialPoints sp;
  const json art = stage_special_points(run, d, &sp);
  run.finish();
  std::string text;
  for (const auto& [name, p] : art["points"].items())
    text += name + " = (" + fmt("%.5f", p["x"].get<double>()) + ", " + fmt("%.5f", p["y"].get<double>()) + ")\n";
  report(g, art, text);
  return kOk;
}

int cmd_check_assumptions(const Globals& g, const std::string& spec, double alpha, const AssumptionOptions& ao) {
  const Domain d = load(spec, alpha);
  Run run(g, "check-assumptions", &d,
          {{"alpha", d.alpha}, {"grid", ao.grid}, {"scan", ao.scan}, {"census", ao.census}});
  const SpecialPoints sp = points_relaxed(d);
  const AssumptionReport rep = check_assumptions(d.curve, sp, ao);
  json art = assumptions_json(rep);
  art["kind"] = "assumptions";
  run.put_json("assumptions.json", art);
  run.finish();
  std::string text;
  for (int i = 0; i < 5; ++i)
    text += "A" + std::to_string(i + 1) + ": " + to_string(rep.a[i].verdict) +
            (rep.a[i].reason.empty() ? "" : " (" + rep.a[i].reason + ")") + "\n";
  report(g, art, text);
  return rep.any_fail() ? kAssumption : kOk;
}

int cmd_lyapunov(const Globals& g, const std::string& spec, double alpha) {
  const Domain d = load(spec, alpha);
  Run run(g, "lyapunov", &d, {{"alpha", d.alpha}});
  const SpecialPoints sp = compute_special_points(d.curve, d.alpha);
  std::unique_ptr<LyapunovSet> ls;
  const json art = stage_lyapunov(run, d, sp, &ls);
  run.finish();
  std::string text = "closure gap " + fmt("%.3e", ls->closure_gap) + "\n";
  for (const auto& o : ls->ode)
    text += std::string(to_string(o.family)) + ": a* = " + fmt("%.6f", o.a_star) + ", steps " +
            std::to_string(o.steps) + (o.positive ? ", rhs positive" : ", rhs NOT positive") + "\n";
  report(g, art, text);
  return kOk;
}

struct SimulateArgs {
  double x1 = NAN, x2 = NAN, y1 = NAN, y2 = NAN;
  double dt = 1e-4;
  double t_max = 1.0;
  int paths = 1;
  int stride = 10;
  std::string out = "simulate.csv";
};

int cmd_simulate(const Globals& g, const std::string& spec, double alpha, const SimulateArgs& a) {
  const Domain d = load(spec, alpha);
  if (!std::isfinite(a.x1) || !std::isfinite(a.x2) || !std::isfinite(a.y1) || !std::isfinite(a.y2))
    throw Error(Errc::InvalidInput, "--x and --y take two coordinates each");
  const Vec2 x{a.x1, a.x2}, y{a.y1, a.y2};
  if (!d.curve.contains_fast(x) || !d.curve.contains_fast(y))
    throw Error(Errc::InvalidInput, "starting points must lie inside the domain");
  Run run(g, "simulate", &d,
          {{"alpha", d.alpha}, {"x", {x.x, x.y}}, {"y", {y.x, y.y}}, {"dt", a.dt}, {"tmax", a.t_max},
           {"paths", a.paths}, {"stride", a.stride}});
  std::unique_ptr<LyapunovSet> ls;
  try {
    ls = std::make_unique<LyapunovSet>(assemble(d.curve, compute_special_points(d.curve, d.alpha)));
  } catch (const Error&) {
    // Without a Lyapunov set the chart columns are left empty.
  }
  SimConfig cfg;
  cfg.dt = a.dt;
  cfg.t_max = a.t_max;
  cfg.seed = g.seed;
  cfg.record_stride = std::max(1, a.stride);
  std::ostringstream csv;
  csv << "t,Xx,Xy,Yx,Yy,V,theta,u1,u2,absL,absM,coupled" << (a.paths > 1 ? ",path" : "") << "\n";
  json summary = json::array();
  char buf[320];
  for (int p = 0; p < a.paths; ++p) {
    const PathRecord r = simulate(d.curve, ls.get(), x, y, cfg, static_cast<std::uint64_t>(p));
    for (const auto& s : r.samples) {
      std::snprintf(buf, sizeof buf, "%.6g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%s,%s,%.10g,%.10g,%d", s.t, s.X.x,
                    s.X.y, s.Y.x, s.Y.y, s.V, s.theta, s.U ? fmt("%.10g", s.U->u1).c_str() : "nan",
                    s.U ? fmt("%.10g", s.U->u2).c_str() : "nan", s.absL, s.absM, s.coupled ? 1 : 0);
      csv << buf << (a.paths > 1 ? "," + std::to_string(p) : "") << "\n";
    }
    summary.push_back({{"path", p},
                       {"zeta", r.zeta ? json(*r.zeta) : json(nullptr)},
                       {"exit_time", r.exit_time ? json(*r.exit_time) : json(nullptr)}});
  }
  run.put_csv(a.out, csv.str());
  json art = {{"kind", "simulate"}, {"csv", a.out}, {"paths", summary}};
  run.put_json("simulate.json", art);
  run.finish();
  std::string text;
  for (const auto& s : summary)
    text += "path " + std::to_string(s["path"].get<int>()) + ": coupling time " +
            (s["zeta"].is_null() ? std::string("none") : fmt("%.4f", s["zeta"].get<double>())) + "\n";
  report(g, art, text);
  return kOk;
}

int cmd_invariance(const Globals& g, const std::string& spec, double alpha, const InvarianceArgs& a) {
  const Domain d = load(spec, alpha);
  Run run(g, "invariance", &d,
          {{"alpha", d.alpha}, {"starts", a.starts}, {"paths", a.paths}, {"dts", a.dts}, {"tmax", a.t_max}});
  const SpecialPoints sp = compute_special_points(d.curve, d.alpha);
  const LyapunovSet ls = assemble(d.curve, sp);
  const json art = stage_invariance(run, d, ls, a, g.seed);
  run.finish();
  std::string text;
  for (const auto& l : art["levels"])
    text += "dt " + fmt("%.0e", l["dt"].get<double>()) + ": exit fraction " +
            fmt("%.4f", l["exit_fraction"].get<double>()) + " +- " + fmt("%.4f", l["exit_se"].get<double>()) +
            ", u residual " + fmt("%.4f", l["u_residual"].get<double>()) + "\n";
  text += std::string("strictly decreasing: ") + (art["strictly_decreasing"].get<bool>() ? "yes" : "no") + "\n";
  report(g, art, text);
  return kOk;
}

std::string eigen_text(const json& art) {
  std::string text;
  for (const auto& l : art["levels"])
    text += "h " + fmt("%.4f", l["h"].get<double>()) + " (" + std::to_string(l["vertices"].get<int>()) +
            " vertices): mu2 " + fmt("%.8f", l["mu"][1].get<double>()) + ", mu3 " +
            fmt("%.8f", l["mu"][2].get<double>()) + "\n";
  text += "extrapolated mu2 " + fmt("%.8f", art["mu_extrapolated"][1].get<double>()) + " +- " +
          fmt("%.2e", art["mu_error"][1].get<double>()) + ", gap ratio " + fmt("%.4e", art["gap_ratio"].get<double>()) +
          " +- " + fmt("%.2e", art["gap_error"].get<double>()) + ": " + art["multiplicity"].get<std::string>() + "\n";
  return text;
}

int cmd_eigen(const Globals& g, const std::string& spec, const EigenArgs& a) {
  const Domain d = load(spec, NAN);
  Run run(g, "eigen", &d, {{"h", a.h}, {"levels", a.levels}, {"k", a.k}});
  const EigenReport rep = run_ladder(d, a, g.seed);
  const json art = stage_eigen(run, d, rep);
  run.finish();
  report(g, art, eigen_text(art));
  return rep.verdict == Multiplicity::Unresolved ? kUnresolved : kOk;
}

std::string analysis_text(const json& a) {
  std::string text = "tol_mono " + fmt("%.3e", a["tol_mono"].get<double>()) + "\n";
  if (a["have_regions"].get<bool>()) {
    text += "monotone fraction " + fmt("%.5f", a["monotonicity"]["fraction"].get<double>()) + " over " +
            std::to_string(a["monotonicity"]["n_pairs"].get<long>()) + " pairs\n";
    text += "sign violations " + std::to_string(a["sign"]["bad_left"].get<int>()) + " (D_L), " +
            std::to_string(a["sign"]["bad_right"].get<int>()) + " (D_R)\n";
    text += "gradient cone " + fmt("%.5f", a["gradient_cone"]["fraction"].get<double>()) + " of " +
            std::to_string(a["gradient_cone"]["n_triangles"].get<int>()) + " triangles\n";
  }
  int lev = 0;
  for (const auto& h : a["hot_spots"])
    text += "level " + std::to_string(lev++) + ": max on boundary " + (h["max_on_boundary"].get<bool>() ? "yes" : "no") +
            ", min on boundary " + (h["min_on_boundary"].get<bool>() ? "yes" : "no") + "\n";
  return text;
}

int cmd_analyze(const Globals& g, const std::string& spec, double alpha, const EigenArgs& a, double tol_angle) {
  const Domain d = load(spec, alpha);
  Run run(g, "analyze", &d, {{"alpha", d.alpha}, {"h", a.h}, {"levels", a.levels}, {"tol_angle", tol_angle}});
  std::unique_ptr<LyapunovSet> ls;
  try {
    ls = std::make_unique<LyapunovSet>(assemble(d.curve, compute_special_points(d.curve, d.alpha)));
  } catch (const Error&) {
    // Regions need special points; hot spots and the nodal line do not.
  }
  const EigenReport rep = run_ladder(d, a, g.seed);
  const json art = stage_analyze(run, d, ls.get(), rep, tol_angle, g.seed);
  run.put_csv("psi2.csv", psi_csv(rep.finest().mesh, rep.finest().eig.vectors[1]));
  run.finish();
  report(g, art, analysis_text(art));
  return kOk;
}

struct HeatArgs {
  double t = 1.0;
  double h = 0.1;
  double dt = 2e-3;
  double mc_dt = 1e-4;
  int paths = 10000;
  double radius = NAN;
  std::string points;
};

int cmd_heat(const Globals& g, const std::string& spec, const HeatArgs& a) {
  const Domain d = load(spec, NAN);
  const Vec2 c = d.curve.center();
  const double r = std::isfinite(a.radius) ? a.radius : 0.15 * d.curve.diameter();
  std::vector<Vec2> xs;
  if (a.points.empty()) {
    xs = {c, c + Vec2{0.8 * r, 0}, c + Vec2{-0.8 * r, 0}, c + Vec2{0, 0.6 * r}, c + Vec2{0.5 * r, -0.5 * r}};
  } else {
    std::stringstream ss(a.points);
    for (std::string item; std::getline(ss, item, ';');) {
      const auto v = parse_list(item);
      if (v.size() != 2) throw Error(Errc::InvalidInput, "points are x,y;x,y;...");
      xs.push_back({v[0], v[1]});
    }
  }
  Run run(g, "heat-check", &d,
          {{"t", a.t}, {"h", a.h}, {"dt", a.dt}, {"mc_dt", a.mc_dt}, {"paths", a.paths}, {"radius", r}});
  HeatOptions ho;
  ho.h = a.h;
  ho.dt = a.dt;
  ho.mc.dt = a.mc_dt;
  ho.mc.seed = g.seed;
  ho.mc_paths = a.paths;
  const HeatReport rep = heat_cross_check(d.curve, Bump{c, r, 1.0}, a.t, xs, ho);
  json art = heat_json(rep);
  art["bump"] = {{"center", {c.x, c.y}}, {"radius", r}};
  run.put_json("heat.json", art);
  run.finish();
  std::string text;
  for (const auto& row : rep.rows)
    text += "(" + fmt("%.3f", row.x.x) + ", " + fmt("%.3f", row.x.y) + "): FEM " + fmt("%.6f", row.fem) + ", MC " +
            fmt("%.6f", row.mc) + " +- " + fmt("%.1e", row.mc_se) + ", mesh error " + fmt("%.1e", row.mesh_error) +
            (row.pass ? "  ok" : "  MISMATCH") + "\n";
  report(g, art, text);
  return rep.all_pass ? kOk : kNumerical;
}

int cmd_plot(const Globals& g, const std::string& artifact, const std::string& out, const std::string& overlay) {
  std::string svg;
  if (artifact.size() > 4 && artifact.substr(artifact.size() - 4) == ".csv") {
    json lyap;
    if (!overlay.empty()) lyap = json::parse(read_file(overlay));
    svg = render_u_csv(read_file(artifact), overlay.empty() ? nullptr : &lyap);
  } else {
    svg = render_artifact(json::parse(read_file(artifact)));
  }
  std::ofstream o(out, std::ios::binary);
  if (!o) throw Error(Errc::InvalidInput, "cannot write " + out);
  o << svg;
  report(g, {{"kind", "plot"}, {"svg", out}}, "wrote " + out + "\n");
  return kOk;
}

struct PipelineArgs {
  InvarianceArgs inv;
  EigenArgs eig;
  double tol_angle = 0.0;
  AssumptionOptions ao;
};

int cmd_pipeline(const Globals& g, const std::string& spec, double alpha, const PipelineArgs& a) {
  const Domain d = load(spec, alpha);
  Run run(g, "pipeline", &d,
          {{"alpha", d.alpha},
           {"starts", a.inv.starts},
           {"paths", a.inv.paths},
           {"dts", a.inv.dts},
           {"tmax", a.inv.t_max},
           {"h", a.eig.h},
           {"levels", a.eig.levels},
           {"tol_angle", a.tol_angle},
           {"grid", a.ao.grid}});
  json stages = json::array();
  int code = kOk;
  auto add = [&](const std::string& stage, const std::string& status, const std::string& artifact, json values) {
    stages.push_back({{"stage", stage}, {"status", status}, {"artifact", artifact}, {"values", values}});
  };
  auto fail = [&](const std::string& stage, const Error& e) {
    add(stage, "error", "", {{"error", to_string(e.code())}, {"message", e.what()}});
    return exit_code(e.code());
  };

  // Coupling side.
  SpecialPoints sp;
  bool have_sp = false;
  std::unique_ptr<LyapunovSet> ls;
  try {
    const json art = stage_special_points(run, d, &sp);
    have_sp = true;
    add("special-points", "pass", "special_points.json", {{"points", art["points"].size()}});
  } catch (const Error& e) {
    code = fail("special-points", e);
  }
  if (code == kOk || code == kAssumption) {
    const SpecialPoints spr = have_sp ? sp : points_relaxed(d);
    const AssumptionReport rep = check_assumptions(d.curve, spr, a.ao);
    json art = assumptions_json(rep);
    art["kind"] = "assumptions";
    run.put_json("assumptions.json", art);
    json vals = json::object();
    for (int i = 0; i < 5; ++i) vals["A" + std::to_string(i + 1)] = to_string(rep.a[i].verdict);
    add("assumptions", rep.all_pass() ? "pass" : "fail", "assumptions.json", vals);
    if (!rep.all_pass()) code = kAssumption;
  }
  if (code == kOk) {
    try {
      const json art = stage_lyapunov(run, d, sp, &ls);
      add("lyapunov", "pass", "lyapunov.json", {{"closure_gap", art["closure_gap"]}});
    } catch (const Error& e) {
      code = fail("lyapunov", e);
    }
  } else {
    add("lyapunov", "skipped", "", json::object());
  }
  if (code == kOk && ls) {
    const json art = stage_invariance(run, d, *ls, a.inv, g.seed);
    json ef = json::array();
    for (const auto& l : art["levels"]) ef.push_back(l["exit_fraction"]);
    const double last = art["levels"].back()["exit_fraction"].get<double>();
    add("invariance", last <= 0.02 ? "pass" : "fail", "invariance.json",
        {{"exit_fraction", ef}, {"strictly_decreasing", art["strictly_decreasing"]}, {"u_order", art["u_order"]}});
  } else {
    add("invariance", "skipped", "", json::object());
  }
  // Hard numerical failures on the coupling side stop the run.
  if (code == kNumerical || code == kInput) {
    run.put_json("summary.json", {{"kind", "summary"}, {"stages", stages}});
    run.finish();
    report(g, {{"kind", "summary"}, {"stages", stages}}, "stopped: see summary.json\n");
    return code;
  }

  // Spectral side.
  try {
    const EigenReport rep = run_ladder(d, a.eig, g.seed);
    const json art = stage_eigen(run, d, rep);
    add("eigen", rep.verdict == Multiplicity::Unresolved ? "unresolved" : "pass", "eigen.json",
        {{"mu2", art["mu_extrapolated"][1]},
         {"mu3", art["mu_extrapolated"][2]},
         {"gap_ratio", art["gap_ratio"]},
         {"gap_error", art["gap_error"]},
         {"multiplicity", art["multiplicity"]}});
    if (rep.verdict == Multiplicity::Simple) {
      const json an = stage_analyze(run, d, ls.get(), rep, a.tol_angle, g.seed);
      json vals;
      bool hot = true;
      for (const auto& h : an["hot_spots"])
        hot = hot && h["max_on_boundary"].get<bool>() && h["min_on_boundary"].get<bool>();
      vals["hot_spots_on_boundary"] = hot;
      bool ok = true;
      if (an["have_regions"].get<bool>()) {
        vals["monotone_fraction"] = an["monotonicity"]["fraction"];
        vals["sign_bad_fraction"] = an["sign"]["bad_fraction"];
        vals["cone_fraction"] = an["gradient_cone"]["fraction"];
        ok = an["monotonicity"]["fraction"].get<double>() >= 0.999 &&
             an["sign"]["bad_fraction"].get<double>() <= 1e-3 && an["gradient_cone"]["fraction"].get<double>() >= 0.99;
      }
      add("analyze", ok ? "pass" : "fail", "analysis.json", vals);
    } else {
      add("analyze", "skipped", "", {{"reason", std::string("multiplicity ") + to_string(rep.verdict)}});
      if (rep.verdict == Multiplicity::Unresolved && code == kOk) code = kUnresolved;
    }
  } catch (const Error& e) {
    const int c = fail("eigen", e);
    if (code == kOk) code = c;
  }
  json summary = {{"kind", "summary"}, {"domain", d.name}, {"stages", stages}};
  run.put_json("summary.json", summary);
  run.finish();
  std::string text;
  for (const auto& s : stages) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-16s %-10s ", s["stage"].get<std::string>().c_str(),
                  s["status"].get<std::string>().c_str());
    text += buf + s["values"].dump() + "\n";
  }
  report(g, summary, text);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mirror couplings and Neumann eigenfunctions on convex planar domains"};
  app.require_subcommand(1);
  // -h stays free: several subcommands take a mesh size --h.
  app.set_help_flag("--help", "Print this help message and exit");
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (0 keeps the default)");
  app.add_option("--out-dir", g.out_dir, "Directory for artifacts")->capture_default_str();
  app.add_flag("--json", g.json_out, "Machine-readable output on stdout");

  std::string domain, artifact, out_svg, overlay;
  double alpha = NAN;
  auto add_domain = [&](CLI::App* c) {
    c->add_option("domain,--domain", domain, "Preset name or domain JSON file")->required();
  };
  auto add_alpha = [&](CLI::App* c) { c->add_option("--alpha", alpha, "Chord angle (default from the domain)"); };

  auto* validate = app.add_subcommand("validate", "Check that a domain is closed and convex");
  add_domain(validate);

  auto* special = app.add_subcommand("special-points", "Compute the marked boundary points");
  add_domain(special);
  add_alpha(special);

  AssumptionOptions ao;
  auto* assum = app.add_subcommand("check-assumptions", "Run the five geometric assumption checks");
  add_domain(assum);
  add_alpha(assum);
  assum->add_option("--grid", ao.grid, "Positions and angles per family")->capture_default_str();
  assum->add_option("--scan", ao.scan, "Points per activity scan")->capture_default_str();
  assum->add_option("--census", ao.census, "Hinge census resolution")->capture_default_str();

  auto* lyap = app.add_subcommand("lyapunov", "Build the Lyapunov set in chart coordinates");
  add_domain(lyap);
  add_alpha(lyap);

  SimulateArgs sa;
  std::vector<double> sx, sy;
  auto* sim = app.add_subcommand("simulate", "Simulate mirror-coupled reflected Brownian motions");
  add_domain(sim);
  add_alpha(sim);
  sim->add_option("--x", sx, "Start of X")->expected(2)->required();
  sim->add_option("--y", sy, "Start of Y")->expected(2)->required();
  sim->add_option("--dt", sa.dt)->capture_default_str();
  sim->add_option("--tmax", sa.t_max)->capture_default_str();
  sim->add_option("--paths", sa.paths)->capture_default_str();
  sim->add_option("--stride", sa.stride, "Record every n-th step")->capture_default_str();
  sim->add_option("--out", sa.out, "CSV file name inside the output directory")->capture_default_str();

  InvarianceArgs ia;
  auto* inv = app.add_subcommand("invariance", "Exit fractions from the Lyapunov set along a dt ladder");
  add_domain(inv);
  add_alpha(inv);
  inv->add_option("--starts", ia.starts)->capture_default_str();
  inv->add_option("--paths", ia.paths, "Paths per start")->capture_default_str();
  inv->add_option("--dts", ia.dts, "Comma-separated time steps")->capture_default_str();
  inv->add_option("--tmax", ia.t_max)->capture_default_str();

  EigenArgs ea;
  auto* eig = app.add_subcommand("eigen", "Neumann eigenvalues on a refined mesh ladder");
  add_domain(eig);
  eig->add_option("--h", ea.h, "Base mesh size")->capture_default_str();
  eig->add_option("--levels", ea.levels)->capture_default_str();
  eig->add_option("--k", ea.k, "Eigenpairs, the constant included")->capture_default_str();

  double tol_angle = 0.0;
  auto* ana = app.add_subcommand("analyze", "Monotonicity, sign, gradient cone and hot spots of psi2");
  add_domain(ana);
  add_alpha(ana);
  ana->add_option("--h", ea.h, "Base mesh size")->capture_default_str();
  ana->add_option("--levels", ea.levels)->capture_default_str();
  ana->add_option("--tol-angle", tol_angle, "Gradient cone slack in radians")->capture_default_str();

  HeatArgs ha;
  auto* heat = app.add_subcommand("heat-check", "Finite elements against Monte Carlo for the heat equation");
  add_domain(heat);
  heat->add_option("--t", ha.t)->capture_default_str();
  heat->add_option("--h", ha.h, "Coarse mesh size")->capture_default_str();
  heat->add_option("--dt", ha.dt, "Coarse FEM time step")->capture_default_str();
  heat->add_option("--mc-dt", ha.mc_dt)->capture_default_str();
  heat->add_option("--paths", ha.paths)->capture_default_str();
  heat->add_option("--radius", ha.radius, "Bump radius (default 0.15 diameter)");
  heat->add_option("--points", ha.points, "Evaluation points x,y;x,y;...");

  auto* plot = app.add_subcommand("plot", "Render an artifact as SVG");
  plot->add_option("artifact", artifact, "JSON artifact or simulate CSV")->required();
  plot->add_option("out", out_svg, "Output SVG")->required();
  plot->add_option("--lyapunov", overlay, "Lyapunov artifact drawn under a CSV trajectory");

  PipelineArgs pa;
  auto* pipe = app.add_subcommand("pipeline", "All stages with a summary table");
  add_domain(pipe);
  add_alpha(pipe);
  pipe->add_option("--h", pa.eig.h, "Base mesh size")->capture_default_str();
  pipe->add_option("--levels", pa.eig.levels)->capture_default_str();
  pipe->add_option("--starts", pa.inv.starts)->capture_default_str();
  pipe->add_option("--paths", pa.inv.paths, "Paths per start")->capture_default_str();
  pipe->add_option("--dts", pa.inv.dts)->capture_default_str();
  pipe->add_option("--tol-angle", pa.tol_angle)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }
  if (g.threads > 0) omp_set_num_threads(g.threads);

  try {
    if (*validate) return cmd_validate(g, domain);
    if (*special) return cmd_special_points(g, domain, alpha);
    if (*assum) return cmd_check_assumptions(g, domain, alpha, ao);
    if (*lyap) return cmd_lyapunov(g, domain, alpha);
    if (*sim) {
      sa.x1 = sx[0];
      sa.x2 = sx[1];
      sa.y1 = sy[0];
      sa.y2 = sy[1];
      return cmd_simulate(g, domain, alpha, sa);
    }
    if (*inv) return cmd_invariance(g, domain, alpha, ia);
    if (*eig) return cmd_eigen(g, domain, ea);
    if (*ana) return cmd_analyze(g, domain, alpha, ea, tol_angle);
    if (*heat) return cmd_heat(g, domain, ha);
    if (*plot) return cmd_plot(g, artifact, out_svg, overlay);
    if (*pipe) {
      pa.ao = ao;
      return cmd_pipeline(g, domain, alpha, pa);
    }
  } catch (const Error& e) {
    const json j = {{"error", to_string(e.code())}, {"message", e.what()}};
    if (g.json_out) std::cout << j.dump() << "\n";
    else std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const json::exception& e) {
    const json j = {{"error", "InvalidInput"}, {"message", e.what()}};
    if (g.json_out) std::cout << j.dump() << "\n";
    else std::cerr << "error: InvalidInput: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
