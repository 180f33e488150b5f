// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "mirror/errors.hpp"
#include "mirror/spectral.hpp"

namespace mirror {

double Bump::operator()(Vec2 x) const {
  const double r2 = dot(x - center, x - center) / (radius * radius);
  if (r2 >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
}

std::vector<double> heat_fem(const TriMesh& mesh, const std::vector<double>& u0, double t, double dt) {
  std::vector<double> u = u0;
  if (t <= 0.0) return u;
  const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt - 1e-9)));
  const double tau = t / steps;
  const FemSystem sys = assemble_fem(mesh);
  // M + tau/2 K: the generator is half the Laplacian.
  CsrMatrix A = sys.M;
  for (size_t k = 0; k < A.val.size(); ++k) A.val[k] += 0.5 * tau * sys.K.val[k];
  std::vector<double> inv = A.diagonal();
  for (double& d : inv) d = 1.0 / d;
  std::vector<double> rhs;
  for (long n = 0; n < steps; ++n) {
    sys.M.matvec(u, rhs);
    const CgStats st = pcg(A, inv, rhs, u, 1e-12, 10 * A.n + 100);
    if (!st.converged) throw Error(Errc::NoConvergence, "heat step solve did not converge");
  }
  return u;
}

HeatReport heat_cross_check(const BoundaryCurve& curve, const Bump& f0, double t,
                            const std::vector<Vec2>& x_eval, const HeatOptions& opt) {
  for (const Vec2& x : x_eval)
    if (!curve.contains_fast(x)) throw Error(Errc::InvalidInput, "evaluation point outside the domain");
  const TriMesh coarse = triangulate(curve, opt.h);
  const TriMesh fine = refine(coarse, curve);
  auto nodal = [&](const TriMesh& m) {
    std::vector<double> u(m.n_vertices());
    for (int i = 0; i < m.n_vertices(); ++i) u[i] = f0(m.vertices[i]);
    return u;
  };
  const auto uc = heat_fem(coarse, nodal(coarse), t, opt.dt);
  const auto uf = heat_fem(fine, nodal(fine), t, 0.5 * opt.dt);
  const MeshLocator lc(coarse), lf(fine);

  HeatReport rep;
  rep.t = t;
  rep.all_pass = true;
  SimConfig cfg = opt.mc;
  cfg.t_max = t;
  const int n = opt.mc_paths;
  std::vector<double> vals(n);
  for (size_t i = 0; i < x_eval.size(); ++i) {
    HeatRow row;
    row.x = x_eval[i];
    row.f0 = f0(row.x);
    row.fem = lf.interpolate(uf, row.x);
    row.fem_coarse = lc.interpolate(uc, row.x);
    row.mesh_error = std::abs(row.fem - row.fem_coarse);
#pragma omp parallel for schedule(dynamic, 16)
    for (int j = 0; j < n; ++j) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
      vals[j] = f0(simulate_rbm(curve, row.x, cfg, stream));
    }
    double s = 0.0, s2 = 0.0;
    for (double v : vals) s += v;
    row.mc = s / n;
    for (double v : vals) s2 += (v - row.mc) * (v - row.mc);
    row.mc_se = n > 1 ? std::sqrt(s2 / (n - 1) / n) : 0.0;
    row.diff = std::abs(row.fem - row.mc);
    row.pass = row.diff <= 3.0 * (row.mc_se + row.mesh_error);
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

nlohmann::json heat_json(const HeatReport& rep) {
  nlohmann::json j;
  j["kind"] = "heat";
  j["t"] = rep.t;
  j["all_pass"] = rep.all_pass;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows)
    j["rows"].push_back({{"x", {r.x.x, r.x.y}},
                         {"f0", r.f0},
                         {"fem", r.fem},
                         {"fem_coarse", r.fem_coarse},
                         {"mesh_error", r.mesh_error},
                         {"mc", r.mc},
                         {"mc_se", r.mc_se},
                         {"diff", r.diff},
                         {"pass", r.pass}});
  return j;
}

}  // namespace mirror
