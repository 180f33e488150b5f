// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/coupling.hpp"

#include <algorithm>
#include <cmath>

namespace mirror {

using nlohmann::json;

double SimConfig::coupling_radius() const { return eps_couple > 0.0 ? eps_couple : 3.0 * std::sqrt(dt); }

ReflectStep step_reflected(const BoundaryCurve& curve, Vec2 x, Vec2 dW) {
  if (norm(dW) > 0.25 * curve.diameter()) throw Error(Errc::StepTooLarge, "increment exceeds a quarter diameter");
  const Vec2 a = x + dW;
  if (curve.contains_fast(a)) return {a, 0.0, std::nullopt};
  const Projection pr = curve.project(a);
  return {pr.point, pr.distance, pr.normal};
}

namespace {

Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }

// Chart position of the mirror through anchor with unit normal m.  The
// labeling p = i m must agree with the lower/upper convention.
void mirror_chart(const BoundaryCurve& curve, const SpecialPoints* sp, CouplingState& s) {
  s.U.reset();
  s.chord.reset();
  if (!sp) return;
  const Vec2 p = rot90(s.m);
  if (!(p.y > 0.0 || (p.y == 0.0 && p.x > 0.0))) return;
  Chord c;
  try {
    c = chord_from_line(curve, LineRepr(angle_of(p), s.anchor));
  } catch (const Error&) {
    return;
  }
  UPoint u;
  if (!try_phi(*sp, c, &u)) return;
  s.U = u;
  s.chord = c;
}

double fold_pi(double a) {
  a = wrap_signed(a);
  if (a > kPi / 2) a -= kPi;
  if (a <= -kPi / 2) a += kPi;
  return a;
}

}  // namespace

void DriftSums::merge(const DriftSums& o) {
  steps += o.steps;
  push_steps += o.push_steps;
  interior_dl += o.interior_dl;
  res_u += o.res_u;
  abs_du += o.abs_du;
  res_theta += o.res_theta;
  abs_dtheta += o.abs_dtheta;
  bound_checks += o.bound_checks;
  bound_violations += o.bound_violations;
  max_bound_violation = std::max(max_bound_violation, o.max_bound_violation);
  reflection_checks += o.reflection_checks;
  max_reflection_error = std::max(max_reflection_error, o.max_reflection_error);
  max_bisector_error = std::max(max_bisector_error, o.max_bisector_error);
}

CouplingState make_state(const BoundaryCurve& curve, const SpecialPoints* sp, Vec2 x, Vec2 y) {
  CouplingState s;
  s.X = x;
  s.Y = y;
  s.V = dist(x, y);
  if (s.V <= 1e-14 * curve.diameter()) throw Error(Errc::CoincidentPoints, "x and y coincide");
  s.V0 = s.V;
  s.m = (y - x) / s.V;
  s.anchor = (x + y) * 0.5;
  s.theta = wrap_pi(angle_of(rot90(s.m)));
  mirror_chart(curve, sp, s);
  return s;
}

CouplingState step_coupling(const BoundaryCurve& curve, const SpecialPoints* sp,
                            const CouplingState& s, Vec2 dW, double dt, double eps_couple,
                            DriftSums* sums) {
  CouplingState n = s;
  n.t = s.t + dt;
  if (s.coupled) {
    const ReflectStep rx = step_reflected(curve, s.X, dW);
    n.X = n.Y = rx.x;
    n.absL += rx.dl;
    n.absM += rx.dl;
    return n;
  }
  const double mdw = dot(s.m, dW);
  const Vec2 dZ = dW - s.m * (2.0 * mdw);
  const ReflectStep rx = step_reflected(curve, s.X, dW);
  const ReflectStep ry = step_reflected(curve, s.Y, dZ);
  n.X = rx.x;
  n.Y = ry.x;
  n.absL += rx.dl;
  n.absM += ry.dl;
  n.wbar -= 2.0 * mdw;
  if (sums) ++sums->steps;
  const Vec2 D = n.Y - n.X;
  if (dot(D, s.m) < eps_couple) {
    n.coupled = true;
    n.Y = n.X;
    n.V = 0.0;
    n.U.reset();
    n.chord.reset();
    return n;
  }
  const bool pushed = rx.n.has_value() || ry.n.has_value();
  if (!pushed) {
    // The increments are mirror images, so the mirror stays put.
    n.V = norm(D);
    if (sums) {
      if (rx.dl != 0.0 || ry.dl != 0.0) ++sums->interior_dl;
      ++sums->reflection_checks;
      const Vec2 dy = n.Y - s.Y;
      const Vec2 img = (n.X - s.X) - s.m * (2.0 * dot(s.m, n.X - s.X));
      sums->max_reflection_error = std::max(sums->max_reflection_error, norm(dy - img));
      const double e1 = std::abs(dot((n.X + n.Y) * 0.5 - s.anchor, s.m));
      const double e2 = std::abs(cross(D, s.m));
      sums->max_bisector_error = std::max(sums->max_bisector_error, std::max(e1, e2));
    }
    return n;
  }

  const Vec2 dL = rx.n ? *rx.n * rx.dl : Vec2{};
  const Vec2 dM = ry.n ? *ry.n * ry.dl : Vec2{};
  const Vec2 p = rot90(s.m);
  const double a = s.V - 2.0 * mdw + dot(dM - dL, s.m);
  const double b = dot(dM - dL, p);
  n.V = norm(D);
  n.m = D / n.V;
  n.anchor = (n.X + n.Y) * 0.5;
  n.theta = wrap_pi(angle_of(rot90(n.m)));
  if (a > 0.0) n.vcorr += b * b / (2.0 * a);
  mirror_chart(curve, sp, n);

  if (sums) {
    ++sums->push_steps;
    if (a > 0.0) {
      ++sums->bound_checks;
      const double excess = n.V - (s.V - 2.0 * mdw + b * b / (2.0 * a));
      if (excess > 1e-12 * curve.diameter()) {
        ++sums->bound_violations;
        sums->max_bound_violation = std::max(sums->max_bound_violation, excess);
      }
    }
    const double dth = fold_pi(n.theta - s.theta);
    const double pred_th = b / s.V;
    sums->res_theta += std::abs(dth - pred_th);
    sums->abs_dtheta += std::abs(dth);
    if (s.U && s.chord && n.U) {
      try {
        FieldValue pred{0.0, 0.0};
        if (rx.n) {
          const FieldValue f = field_F(curve, *s.chord, n.X, *rx.n, s.V);
          pred.c1 += f.c1 * rx.dl;
          pred.c2 += f.c2 * rx.dl;
        }
        if (ry.n) {
          const FieldValue g = field_G(curve, *s.chord, n.Y, *ry.n, s.V);
          pred.c1 += g.c1 * ry.dl;
          pred.c2 += g.c2 * ry.dl;
        }
        const double d1 = n.U->u1 - s.U->u1, d2 = n.U->u2 - s.U->u2;
        sums->res_u += std::hypot(d1 - pred.c1, d2 - pred.c2);
        sums->abs_du += std::hypot(d1, d2);
      } catch (const Error&) {
      }
    }
  }
  return n;
}

PathRecord simulate(const BoundaryCurve& curve, const LyapunovSet* lset, Vec2 x, Vec2 y,
                    const SimConfig& cfg, std::uint64_t stream) {
  const SpecialPoints* sp = lset ? &lset->sp : nullptr;
  PathRecord rec;
  CouplingState s = make_state(curve, sp, x, y);
  PhiloxStream rng(cfg.seed, stream);
  const double sq = std::sqrt(cfg.dt);
  const double eps = cfg.coupling_radius();
  const long steps = std::lround(cfg.t_max / cfg.dt);
  DriftSums* sums = cfg.diagnostics ? &rec.drift : nullptr;
  auto check_exit = [&](const CouplingState& st) {
    if (!lset || rec.exit_time || st.coupled) return;
    if (!st.U) {
      rec.exit_time = st.t;
      rec.u_undefined_exit = true;
    } else if (!lset->contains(*st.U)) {
      rec.exit_time = st.t;
    }
  };
  check_exit(s);
  if (cfg.record_stride > 0) rec.samples.push_back(s);
  for (long k = 0; k < steps; ++k) {
    if (cfg.stop_on_exit && (rec.exit_time || s.coupled)) break;
    const Vec2 dW = rng.normal2() * sq;
    const double l0 = s.absL, m0 = s.absM;
    s = step_coupling(curve, sp, s, dW, cfg.dt, eps, sums);
    if (s.coupled && !rec.zeta) rec.zeta = s.t;
    if (!s.coupled) {
      if (s.Y.x - s.X.x <= 0.0) rec.order_violated = true;
      if (s.absL != l0 || s.absM != m0) check_exit(s);
    }
    if (cfg.record_stride > 0 && (k + 1) % cfg.record_stride == 0) rec.samples.push_back(s);
  }
  rec.final = s;
  return rec;
}

Vec2 simulate_rbm(const BoundaryCurve& curve, Vec2 x, const SimConfig& cfg, std::uint64_t stream) {
  PhiloxStream rng(cfg.seed, stream);
  const double sq = std::sqrt(cfg.dt);
  const long steps = std::lround(cfg.t_max / cfg.dt);
  for (long k = 0; k < steps; ++k) x = step_reflected(curve, x, rng.normal2() * sq).x;
  return x;
}

namespace {

// Bounding box of the loop and a rejection sampler inside it.
std::vector<StartPair> make_starts(const BoundaryCurve& curve, const LyapunovSet& lset, int count,
                                   std::uint64_t seed, bool inside) {
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (const auto& u : lset.loop) {
    lo1 = std::min(lo1, u.u1);
    hi1 = std::max(hi1, u.u1);
    lo2 = std::min(lo2, u.u2);
    hi2 = std::max(hi2, u.u2);
  }
  if (!inside) {
    lo1 = lo2 = 0.0;
    hi1 = lset.sp.ubar1;
    hi2 = lset.sp.ubar2;
  }
  PhiloxStream rng(seed, 0x5eedULL);
  std::vector<StartPair> out;
  for (int tries = 0; static_cast<int>(out.size()) < count && tries < 200000; ++tries) {
    const UPoint u{lo1 + (hi1 - lo1) * rng.uniform(), lo2 + (hi2 - lo2) * rng.uniform()};
    const double lam = 0.3 + 0.4 * rng.uniform();
    const double frac = 0.1 + 0.3 * rng.uniform();
    if (lset.contains(u, 0.0) != inside) continue;
    Chord c;
    try {
      c = phi_inv(curve, lset.sp, u);
    } catch (const Error&) {
      continue;
    }
    if (!(c.angle > 0.05 && c.angle < kPi - 0.05)) continue;
    const Vec2 mid = c.P + (c.Q - c.P) * lam;
    const double h = frac * std::min(curve.signed_distance(mid), 0.25 * c.length());
    if (!(h > 1e-3 * curve.diameter())) continue;
    const StartPair sp{mid - c.m * h, mid + c.m * h};
    if (curve.signed_distance(sp.x) <= 0.0 || curve.signed_distance(sp.y) <= 0.0) continue;
    if (inside && !pair_in_T(curve, lset, sp.x, sp.y)) continue;
    out.push_back(sp);
  }
  if (static_cast<int>(out.size()) < count)
    throw Error(Errc::InvalidInput, "could not place the requested number of starting pairs");
  return out;
}

struct PathOutcome {
  bool exited = false;
  bool undefined = false;
  bool coupled = false;
  bool order_violated = false;
  double zeta = 0.0;
  DriftSums drift;
};

InvarianceReport run_invariance(const BoundaryCurve& curve, const LyapunovSet& lset,
                                const std::vector<StartPair>& starts,
                                const std::vector<double>& dts, double t_max, int paths,
                                std::uint64_t seed, bool parallel) {
  InvarianceReport rep;
  const long per_level = static_cast<long>(starts.size()) * paths;
  for (size_t li = 0; li < dts.size(); ++li) {
    SimConfig cfg;
    cfg.dt = dts[li];
    cfg.t_max = t_max;
    cfg.seed = seed;
    cfg.stop_on_exit = true;
    std::vector<PathOutcome> out(per_level);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (long idx = 0; idx < per_level; ++idx) {
      const StartPair& st = starts[idx / paths];
      const std::uint64_t stream = (static_cast<std::uint64_t>(li) << 40) | static_cast<std::uint64_t>(idx);
      const PathRecord r = simulate(curve, &lset, st.x, st.y, cfg, stream);
      PathOutcome& o = out[idx];
      o.exited = r.exit_time.has_value();
      o.undefined = r.u_undefined_exit;
      o.coupled = r.zeta.has_value();
      o.zeta = r.zeta.value_or(0.0);
      o.order_violated = r.order_violated;
      o.drift = r.drift;
    }
    LadderLevel lv;
    lv.dt = cfg.dt;
    lv.n_paths = per_level;
    double zsum = 0.0;
    for (const auto& o : out) {
      lv.n_exited += o.exited;
      lv.n_undefined += o.undefined;
      lv.n_coupled += o.coupled;
      lv.n_order_violated += o.order_violated;
      zsum += o.zeta;
      lv.drift.merge(o.drift);
    }
    lv.exit_fraction = static_cast<double>(lv.n_exited) / per_level;
    lv.exit_se = binomial_se(lv.exit_fraction, per_level);
    lv.mean_zeta = lv.n_coupled > 0 ? zsum / lv.n_coupled : 0.0;
    rep.levels.push_back(lv);
  }
  rep.nonincreasing = rep.strictly_decreasing = true;
  for (size_t i = 1; i < rep.levels.size(); ++i) {
    const auto& c = rep.levels[i - 1];
    const auto& f = rep.levels[i];
    const double se = std::hypot(c.exit_se, f.exit_se);
    if (f.exit_fraction > c.exit_fraction + 1.96 * se) rep.nonincreasing = false;
    if (!(c.exit_fraction - f.exit_fraction > 1.96 * se)) rep.strictly_decreasing = false;
  }
  return rep;
}

}  // namespace

std::vector<StartPair> starts_in_T(const BoundaryCurve& curve, const LyapunovSet& lset, int count,
                                   std::uint64_t seed) {
  return make_starts(curve, lset, count, seed, true);
}

std::vector<StartPair> starts_outside_T(const BoundaryCurve& curve, const LyapunovSet& lset,
                                        int count, std::uint64_t seed) {
  return make_starts(curve, lset, count, seed, false);
}

InvarianceReport invariance_mc(const BoundaryCurve& curve, const LyapunovSet& lset,
                               const std::vector<StartPair>& starts, const std::vector<double>& dts,
                               double t_max, int paths_per_start, std::uint64_t seed) {
  return run_invariance(curve, lset, starts, dts, t_max, paths_per_start, seed, true);
}

InvarianceReport invariance_mc_serial(const BoundaryCurve& curve, const LyapunovSet& lset,
                                      const std::vector<StartPair>& starts,
                                      const std::vector<double>& dts, double t_max,
                                      int paths_per_start, std::uint64_t seed) {
  return run_invariance(curve, lset, starts, dts, t_max, paths_per_start, seed, false);
}

DriftReport drift_diagnostic(const InvarianceReport& rep) {
  DriftReport d;
  std::vector<double> du, dth, xu, xth;
  for (const auto& lv : rep.levels) {
    d.dts.push_back(lv.dt);
    d.u_residual.push_back(lv.drift.u_residual());
    d.theta_residual.push_back(lv.drift.theta_residual());
    if (lv.drift.u_residual() > 0) {
      xu.push_back(lv.dt);
      du.push_back(lv.drift.u_residual());
    }
    if (lv.drift.theta_residual() > 0) {
      xth.push_back(lv.dt);
      dth.push_back(lv.drift.theta_residual());
    }
  }
  if (xu.size() >= 2) d.u_order = loglog_slope(xu, du);
  if (xth.size() >= 2) d.theta_order = loglog_slope(xth, dth);
  return d;
}

double MarginalReport::min_p() const {
  return std::min({X[0].p_value, X[1].p_value, Y[0].p_value, Y[1].p_value});
}

MarginalReport marginal_law_test(const BoundaryCurve& curve, Vec2 x, Vec2 y, const SimConfig& cfg_in,
                                 int n_paths, const std::function<double(double)>* coordinate_cdf) {
  SimConfig cfg = cfg_in;
  cfg.stop_on_exit = false;
  cfg.diagnostics = false;
  cfg.record_stride = 0;
  std::vector<Vec2> cx(n_paths), cy(n_paths), rx(n_paths), ry(n_paths);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n_paths; ++i) {
    const std::uint64_t base = 3ULL * static_cast<std::uint64_t>(i);
    const PathRecord r = simulate(curve, nullptr, x, y, cfg, base);
    cx[i] = r.final.X;
    cy[i] = r.final.Y;
    if (!coordinate_cdf) {
      rx[i] = simulate_rbm(curve, x, cfg, base + 1);
      ry[i] = simulate_rbm(curve, y, cfg, base + 2);
    }
  }
  MarginalReport rep;
  rep.n_paths = n_paths;
  for (int c = 0; c < 2; ++c) {
    auto coord = [c](const std::vector<Vec2>& v) {
      std::vector<double> o;
      o.reserve(v.size());
      for (const auto& p : v) o.push_back(c == 0 ? p.x : p.y);
      return o;
    };
    if (coordinate_cdf) {
      rep.X[c] = ks_one_sample(coord(cx), *coordinate_cdf);
      rep.Y[c] = ks_one_sample(coord(cy), *coordinate_cdf);
    } else {
      rep.X[c] = ks_two_sample(coord(cx), coord(rx));
      rep.Y[c] = ks_two_sample(coord(cy), coord(ry));
    }
  }
  return rep;
}

SeparationEstimate estimate_separation(const BoundaryCurve& curve, const LyapunovSet& lset,
                                       const std::vector<StartPair>& starts, const SimConfig& cfg_in,
                                       int n_paths) {
  SimConfig cfg = cfg_in;
  cfg.t_max = 1.0;
  cfg.stop_on_exit = false;
  cfg.diagnostics = false;
  std::vector<std::vector<double>> seps(starts.size());
  for (size_t k = 0; k < starts.size(); ++k) {
    std::vector<double> v(n_paths, -1.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n_paths; ++i) {
      const PathRecord r = simulate(curve, &lset, starts[k].x, starts[k].y, cfg,
                                    (static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint64_t>(i));
      if (!r.zeta) v[i] = r.final.V;
    }
    for (double d : v)
      if (d >= 0.0) seps[k].push_back(d);
  }
  SeparationEstimate est;
  est.min_survivors = n_paths;
  est.c1 = 1e300;
  for (const auto& s : seps) {
    est.min_survivors = std::min<long>(est.min_survivors, static_cast<long>(s.size()));
    if (s.size() < 100) throw Error(Errc::InsufficientSurvivors, "fewer than 100 paths survive to t = 1");
    const double q = quantile(s, 0.1);
    est.c1_per_start.push_back(q);
    est.c1 = std::min(est.c1, q);
  }
  est.p1 = 1.0;
  for (const auto& s : seps) {
    const double frac = static_cast<double>(std::count_if(s.begin(), s.end(), [&](double d) { return d >= est.c1; })) / s.size();
    est.p1 = std::min(est.p1, frac);
  }
  return est;
}

json invariance_json(const InvarianceReport& rep) {
  json levels = json::array();
  for (const auto& lv : rep.levels)
    levels.push_back({{"dt", lv.dt},
                      {"n_paths", lv.n_paths},
                      {"n_exited", lv.n_exited},
                      {"n_undefined", lv.n_undefined},
                      {"n_coupled", lv.n_coupled},
                      {"n_order_violated", lv.n_order_violated},
                      {"exit_fraction", lv.exit_fraction},
                      {"exit_se", lv.exit_se},
                      {"mean_zeta", lv.mean_zeta},
                      {"push_steps", lv.drift.push_steps},
                      {"u_residual", lv.drift.u_residual()},
                      {"theta_residual", lv.drift.theta_residual()},
                      {"bound_violations", lv.drift.bound_violations},
                      {"bound_checks", lv.drift.bound_checks}});
  const DriftReport d = drift_diagnostic(rep);
  return {{"kind", "invariance"},
          {"levels", levels},
          {"nonincreasing", rep.nonincreasing},
          {"strictly_decreasing", rep.strictly_decreasing},
          {"u_order", d.u_order},
          {"theta_order", d.theta_order}};
}

}  // namespace mirror
