// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mirror/errors.hpp"
#include "mirror/rng.hpp"

namespace mirror {

const char* to_string(Multiplicity m) {
  switch (m) {
    case Multiplicity::Simple: return "simple";
    case Multiplicity::Double: return "double";
    case Multiplicity::Unresolved: return "unresolved";
  }
  return "?";
}

Multiplicity classify(double gap_ratio, double gap_error) {
  if (!std::isfinite(gap_error)) return Multiplicity::Unresolved;
  if (gap_ratio > 10.0 * gap_error) return Multiplicity::Simple;
  if (gap_ratio < gap_error) return Multiplicity::Double;
  return Multiplicity::Unresolved;
}

EigenReport eigen_ladder(const BoundaryCurve& curve, const LadderOptions& opt) {
  if (opt.levels < 1) throw Error(Errc::InvalidInput, "levels must be positive");
  if (!(opt.h > 0.0) || opt.h >= curve.diameter() / 10.0)
    throw Error(Errc::InvalidInput, "mesh size must be below diameter/10");
  EigenReport rep;
  TriMesh mesh = triangulate(curve, opt.h, opt.mesh);
  std::vector<std::vector<double>> block;
  double h = opt.h;
  for (int l = 0; l < opt.levels; ++l) {
    if (l > 0) {
      mesh = refine(mesh, curve);
      h *= 0.5;
      for (auto& v : block) v = prolong(mesh, v);
    }
    MeshLevel lev;
    lev.h = h;
    const FemSystem sys = assemble_fem(mesh);
    lev.eig = eigen_smallest(sys, mesh.vertices, opt.eig, block.empty() ? nullptr : &block);
    block = lev.eig.block;
    lev.eig.block.clear();
    lev.gap_ratio = (lev.eig.mu[2] - lev.eig.mu[1]) / lev.eig.mu[1];
    lev.mesh = mesh;
    rep.levels.push_back(std::move(lev));
  }
  const auto& fine = rep.levels.back().eig.mu;
  rep.mu = fine;
  const int k = static_cast<int>(fine.size());
  rep.mu_ext = fine;
  rep.mu_err.assign(k, std::numeric_limits<double>::infinity());
  if (rep.levels.size() >= 2) {
    const auto& mid = rep.levels[rep.levels.size() - 2].eig.mu;
    for (int j = 0; j < k; ++j) {
      rep.mu_ext[j] = fine[j] + (fine[j] - mid[j]) / 3.0;
      rep.mu_err[j] = std::abs(fine[j] - mid[j]) / 3.0;
    }
  }
  if (rep.levels.size() >= 3) {
    const double a = rep.levels[rep.levels.size() - 3].eig.mu[1] - rep.levels[rep.levels.size() - 2].eig.mu[1];
    const double b = rep.levels[rep.levels.size() - 2].eig.mu[1] - fine[1];
    rep.order = (a != 0.0 && b != 0.0) ? std::log2(std::abs(a / b)) : 0.0;
  }
  rep.gap_ratio = (rep.mu_ext[2] - rep.mu_ext[1]) / rep.mu_ext[1];
  rep.gap_error = (rep.mu_err[1] + rep.mu_err[2]) / rep.mu_ext[1];
  rep.verdict = classify(rep.gap_ratio, rep.gap_error);
  return rep;
}

double psi_richardson_error(const EigenReport& rep) {
  if (rep.levels.size() < 2) return std::numeric_limits<double>::infinity();
  const auto& f = rep.levels.back().eig.vectors[1];
  const auto& m = rep.levels[rep.levels.size() - 2].eig.vectors[1];
  // Refinement keeps the coarse vertices first.
  const size_t n = m.size();
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += f[i] * m[i];
  const double sg = s < 0 ? -1.0 : 1.0;
  double e = 0.0;
  for (size_t i = 0; i < n; ++i) e = std::max(e, std::abs(f[i] - sg * m[i]));
  return e / 3.0;
}

MonotonicityReport monotone_fraction(const TriMesh& mesh, const std::vector<double>& psi,
                                     const std::vector<StartPair>& pairs, double tol) {
  MeshLocator loc(mesh);
  std::vector<double> d;
  d.reserve(pairs.size());
  for (const auto& pr : pairs) {
    const double a = loc.interpolate(psi, pr.x), b = loc.interpolate(psi, pr.y);
    if (std::isfinite(a) && std::isfinite(b)) d.push_back(b - a);
  }
  MonotonicityReport best;
  for (int sg : {1, -1}) {
    MonotonicityReport r;
    r.tol = tol;
    r.sign = sg;
    r.n_pairs = static_cast<long>(d.size());
    for (double v : d) {
      const double w = sg * v;
      if (w >= -tol) ++r.n_ok;
      r.worst_violation = std::max(r.worst_violation, -w);
    }
    r.fraction = r.n_pairs ? static_cast<double>(r.n_ok) / r.n_pairs : 0.0;
    if (sg == 1 || r.n_ok > best.n_ok) best = r;
  }
  return best;
}

HotSpots hot_spots(const TriMesh& mesh, const std::vector<double>& psi) {
  HotSpots h;
  const auto mx = std::max_element(psi.begin(), psi.end());
  const auto mn = std::min_element(psi.begin(), psi.end());
  h.argmax = static_cast<int>(mx - psi.begin());
  h.argmin = static_cast<int>(mn - psi.begin());
  h.xmax = mesh.vertices[h.argmax];
  h.xmin = mesh.vertices[h.argmin];
  h.max_on_boundary = mesh.boundary[h.argmax] != 0;
  h.min_on_boundary = mesh.boundary[h.argmin] != 0;
  return h;
}

NodalLine nodal_line(const TriMesh& mesh, const std::vector<double>& psi) {
  using Key = std::pair<int, int>;
  auto key = [](int a, int b) { return a < b ? Key{a, b} : Key{b, a}; };
  std::map<Key, Vec2> point;
  std::map<Key, std::vector<Key>> adj;
  auto pos = [&](int i) { return psi[i] >= 0.0; };
  for (const auto& T : mesh.triangles) {
    std::vector<Key> cut;
    for (int e = 0; e < 3; ++e) {
      const int a = T[e], b = T[(e + 1) % 3];
      if (pos(a) == pos(b)) continue;
      const Key k = key(a, b);
      if (!point.count(k)) {
        const double t = psi[a] / (psi[a] - psi[b]);
        point[k] = mesh.vertices[a] + (mesh.vertices[b] - mesh.vertices[a]) * t;
      }
      cut.push_back(k);
    }
    if (cut.size() == 2) {
      adj[cut[0]].push_back(cut[1]);
      adj[cut[1]].push_back(cut[0]);
    }
  }
  NodalLine out;
  out.n_points = static_cast<int>(point.size());
  std::map<Key, bool> used;
  auto walk = [&](Key start) {
    std::vector<Vec2> line{point[start]};
    used[start] = true;
    Key cur = start;
    for (;;) {
      bool moved = false;
      for (const Key& nb : adj[cur]) {
        if (used[nb]) continue;
        used[nb] = true;
        line.push_back(point[nb]);
        cur = nb;
        moved = true;
        break;
      }
      if (!moved) break;
    }
    // Closed loops return to their start.
    if (line.size() > 2) {
      for (const Key& nb : adj[cur])
        if (nb == start) line.push_back(point[start]);
    }
    out.polylines.push_back(std::move(line));
  };
  // Open chains start at edges with a single neighbor (boundary edges).
  for (const auto& [k, nb] : adj)
    if (nb.size() == 1 && !used[k]) walk(k);
  for (const auto& [k, nb] : adj)
    if (!used[k]) walk(k);
  return out;
}

std::vector<StartPair> sample_pairs_in_T(const BoundaryCurve& curve, const LyapunovSet& lset, int count,
                                         std::uint64_t seed, const std::function<bool(Vec2)>& keep) {
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  const int ns = 512;
  for (int i = 0; i < ns; ++i) {
    const Vec2 p = curve.point_at(curve.total_length() * i / ns);
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  PhiloxStream rng(seed, 0x7a1f);
  auto draw = [&]() {
    for (;;) {
      const Vec2 p{lo.x + (hi.x - lo.x) * rng.uniform(), lo.y + (hi.y - lo.y) * rng.uniform()};
      if (curve.contains_fast(p) && (!keep || keep(p))) return p;
    }
  };
  std::vector<StartPair> out;
  const long cap = 1000L * count;
  for (long tries = 0; static_cast<int>(out.size()) < count && tries < cap; ++tries) {
    const Vec2 x = draw(), y = draw();
    if (pair_in_T(curve, lset, x, y)) out.push_back({x, y});
  }
  return out;
}

namespace {

bool have_points(const SpecialPoints& sp) {
  return sp.P[1].known && sp.P[3].known && sp.Q[4].known && sp.Q[6].known && sp.Pp[1].known &&
         sp.Pp[3].known && sp.Qp[4].known && sp.Qp[6].known;
}

// +1 or -1 for the side of the line through a, b; 0 on it.
int side(Vec2 a, Vec2 b, Vec2 x, double tol) {
  const Vec2 d = b - a;
  const double c = cross(d, x - a) / norm(d);
  return c > tol ? 1 : (c < -tol ? -1 : 0);
}

}  // namespace

AnalysisReport analyze_eigenfunction(const BoundaryCurve& curve, const LyapunovSet* lset,
                                     const EigenReport& rep, const AnalyzeOptions& opt) {
  if (rep.verdict != Multiplicity::Simple)
    throw Error(Errc::MultiplicityUnresolved,
                std::string("second eigenvalue is ") + to_string(rep.verdict) + ", eigenfunction not unique");
  AnalysisReport out;
  const MeshLevel& fine = rep.finest();
  const TriMesh& mesh = fine.mesh;
  const std::vector<double>& psi = fine.eig.vectors[1];
  out.tol_mono = std::isfinite(opt.tol_mono) && opt.tol_mono >= 0 ? opt.tol_mono : psi_richardson_error(rep);
  for (const auto& lev : rep.levels) out.hot.push_back(hot_spots(lev.mesh, lev.eig.vectors[1]));
  out.nodal = nodal_line(mesh, psi);
  out.have_regions = lset && have_points(lset->sp);
  if (!out.have_regions) {
    out.mono.tol = out.tol_mono;
    return out;
  }
  const SpecialPoints& sp = lset->sp;

  // Monotonicity along T.
  MeshLocator loc(mesh);
  const auto pairs = sample_pairs_in_T(curve, *lset, opt.pairs, opt.seed, [&](Vec2 p) {
    std::array<double, 3> w;
    return loc.locate(p, &w).has_value();
  });
  out.mono = monotone_fraction(mesh, psi, pairs, out.tol_mono);
  const int s = out.mono.sign;

  // Sign on D_L and D_R.
  const double gtol = 1e-9 * curve.diameter();
  const Vec2 P1 = sp.P[1].x, Qp6 = sp.Qp[6].x, Pp1 = sp.Pp[1].x, Q6 = sp.Q[6].x;
  const int q6_side = side(P1, Qp6, Q6, 0.0);
  const int qp6_side = side(Pp1, Q6, Qp6, 0.0);
  std::vector<char> in_l(mesh.n_vertices(), 0), in_r(mesh.n_vertices(), 0);
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    const Vec2 v = mesh.vertices[i];
    in_l[i] = side(P1, Qp6, v, gtol) == -q6_side;
    in_r[i] = side(Pp1, Q6, v, gtol) == -qp6_side;
  }
  SignReport best;
  for (int sg : {1, -1}) {
    SignReport r;
    r.tol = out.tol_mono;
    r.sign = sg;
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      const double w = sg * psi[i];
      if (in_l[i]) {
        ++r.n_left;
        if (w < -r.tol) ++r.bad_left;
      }
      if (in_r[i]) {
        ++r.n_right;
        if (w > r.tol) ++r.bad_right;
      }
    }
    const int n = r.n_left + r.n_right;
    r.bad_fraction = n ? static_cast<double>(r.bad_left + r.bad_right) / n : 0.0;
    if (sg == 1 || r.bad_left + r.bad_right < best.bad_left + best.bad_right) best = r;
  }
  best.opposite_to_monotone = best.sign == -s;
  out.sign = best;

  // Gradient cone on D_M, with psi oriented to increase along T.
  const double alpha = sp.alpha;
  ConeReport& cone = out.cone;
  cone.lo = alpha - kPi / 2;
  cone.hi = kPi / 2 - alpha;
  cone.tol_angle = opt.tol_angle;
  const Vec2 P3 = sp.P[3].x, Qp4 = sp.Qp[4].x, Pp3 = sp.Pp[3].x, Q4 = sp.Q[4].x;
  const int right_of_1 = side(P3, Qp4, (Pp3 + Q4) * 0.5, 0.0);
  const int left_of_2 = side(Pp3, Q4, (P3 + Qp4) * 0.5, 0.0);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& T = mesh.triangles[t];
    const Vec2 a = mesh.vertices[T[0]], b = mesh.vertices[T[1]], c = mesh.vertices[T[2]];
    const Vec2 cen = (a + b + c) / 3.0;
    if (side(P3, Qp4, cen, gtol) != right_of_1 || side(Pp3, Q4, cen, gtol) != left_of_2) continue;
    const double A2 = cross(b - a, c - a);
    const Vec2 g = (Vec2{-(c - b).y, (c - b).x} * psi[T[0]] + Vec2{-(a - c).y, (a - c).x} * psi[T[1]] +
                    Vec2{-(b - a).y, (b - a).x} * psi[T[2]]) /
                   A2 * static_cast<double>(s);
    const double beta = std::atan2(g.y, g.x);
    const double excess = std::max({0.0, cone.lo - beta, beta - cone.hi});
    ++cone.n_triangles;
    if (excess <= cone.tol_angle) {
      ++cone.n_ok;
    } else {
      cone.violations.push_back(t);
    }
    cone.worst_excess = std::max(cone.worst_excess, excess);
  }
  cone.fraction = cone.n_triangles ? static_cast<double>(cone.n_ok) / cone.n_triangles : 0.0;

  // Nodal points strictly inside D_L or D_R.
  for (const auto& line : out.nodal.polylines) {
    for (const Vec2& p : line) {
      if (side(P1, Qp6, p, gtol) == -q6_side) ++out.nodal.in_left;
      if (side(Pp1, Q6, p, gtol) == -qp6_side) ++out.nodal.in_right;
    }
  }
  return out;
}

namespace {

nlohmann::json vec(Vec2 v) { return nlohmann::json::array({v.x, v.y}); }

}  // namespace

nlohmann::json eigen_json(const EigenReport& rep) {
  nlohmann::json j;
  j["kind"] = "eigen";
  j["mu"] = rep.mu;
  j["mu_extrapolated"] = rep.mu_ext;
  j["mu_error"] = rep.mu_err;
  j["gap_ratio"] = rep.gap_ratio;
  j["gap_error"] = rep.gap_error;
  j["order"] = rep.order;
  j["multiplicity"] = to_string(rep.verdict);
  j["levels"] = nlohmann::json::array();
  for (const auto& l : rep.levels) {
    j["levels"].push_back({{"h", l.h},
                           {"vertices", l.mesh.n_vertices()},
                           {"triangles", l.mesh.n_triangles()},
                           {"mu", l.eig.mu},
                           {"residuals", l.eig.residuals},
                           {"gram_error", l.eig.gram_error},
                           {"sigma", l.eig.sigma},
                           {"iterations", l.eig.iterations},
                           {"cg_iterations", l.eig.cg_iterations},
                           {"gap_ratio", l.gap_ratio}});
  }
  return j;
}

nlohmann::json analysis_json(const AnalysisReport& rep) {
  nlohmann::json j;
  j["kind"] = "analysis";
  j["tol_mono"] = rep.tol_mono;
  j["have_regions"] = rep.have_regions;
  if (rep.have_regions) {
    j["monotonicity"] = {{"n_pairs", rep.mono.n_pairs},
                         {"n_ok", rep.mono.n_ok},
                         {"fraction", rep.mono.fraction},
                         {"worst_violation", rep.mono.worst_violation},
                         {"sign", rep.mono.sign}};
    j["sign"] = {{"n_left", rep.sign.n_left},
                 {"n_right", rep.sign.n_right},
                 {"bad_left", rep.sign.bad_left},
                 {"bad_right", rep.sign.bad_right},
                 {"bad_fraction", rep.sign.bad_fraction},
                 {"sign", rep.sign.sign},
                 {"opposite_to_monotone", rep.sign.opposite_to_monotone}};
    j["gradient_cone"] = {{"lo", rep.cone.lo},
                          {"hi", rep.cone.hi},
                          {"tol_angle", rep.cone.tol_angle},
                          {"n_triangles", rep.cone.n_triangles},
                          {"n_ok", rep.cone.n_ok},
                          {"fraction", rep.cone.fraction},
                          {"worst_excess", rep.cone.worst_excess}};
  }
  j["hot_spots"] = nlohmann::json::array();
  for (const auto& h : rep.hot)
    j["hot_spots"].push_back({{"argmax", h.argmax},
                              {"argmin", h.argmin},
                              {"xmax", vec(h.xmax)},
                              {"xmin", vec(h.xmin)},
                              {"max_on_boundary", h.max_on_boundary},
                              {"min_on_boundary", h.min_on_boundary}});
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : rep.nodal.polylines) {
    nlohmann::json pl = nlohmann::json::array();
    for (const Vec2& p : l) pl.push_back(vec(p));
    lines.push_back(pl);
  }
  j["nodal"] = {{"polylines", lines},
                {"n_points", rep.nodal.n_points},
                {"in_left", rep.nodal.in_left},
                {"in_right", rep.nodal.in_right}};
  return j;
}

}  // namespace mirror
