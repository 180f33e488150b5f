// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/special_points.hpp"

#include <cmath>
#include <vector>

namespace mirror {

using nlohmann::json;

bool SpecialPoints::in_lower(double s, double slack) const {
  const double u = u1_of(s);
  return u <= ubar1 + slack || u >= total - slack;
}

bool SpecialPoints::in_upper(double s, double slack) const {
  const double u = u2_of(s);
  return u <= ubar2 + slack || u >= total - slack;
}

double SpecialPoints::u1_of(double s) const {
  double u = std::fmod(s - P[1].s, total);
  if (u < 0) u += total;
  return u;
}

double SpecialPoints::u2_of(double s) const {
  double u = std::fmod(Qp[6].s - s, total);
  if (u < 0) u += total;
  return u;
}

double SpecialPoints::s_of_u1(double u1) const { return P[1].s + u1; }
double SpecialPoints::s_of_u2(double u2) const { return Qp[6].s - u2; }

namespace {

MarkedPoint mark_at(const BoundaryCurve& curve, double s) {
  MarkedPoint m;
  m.known = true;
  m.s = curve.wrap(s);
  m.x = curve.point_at(m.s);
  return m;
}

MarkedPoint by_normal(const BoundaryCurve& curve, double beta) {
  const NormalMatch nm = curve.find_by_normal_angle(wrap_2pi(beta));
  if (nm.kind == NormalMatchKind::Flat)
    throw Error(Errc::FlatMatch, "normal direction matches a straight segment");
  MarkedPoint m;
  m.known = true;
  m.s = nm.s;
  m.x = nm.point;
  return m;
}

// Other end of the chord through the marked point at the given angle.
MarkedPoint partner(const BoundaryCurve& curve, const MarkedPoint& a, double angle) {
  const Chord c = chord_through(curve, a.s, angle);
  const bool a_is_P = std::abs(curve.wrap(c.s_P - a.s)) < 1e-12 * curve.total_length() ||
                      dist(c.P, a.x) < dist(c.Q, a.x);
  return mark_at(curve, a_is_P ? c.s_Q : c.s_P);
}

bool chord_free(const BoundaryCurve& curve, double s, double angle, int samples, bool primed,
                const BoundarySamples* cache = nullptr) {
  Chord c;
  try {
    c = chord_through(curve, s, angle);
  } catch (const Error&) {
    return false;
  }
  const HingeCensus h = hinge_census(curve, c, samples, cache);
  return primed ? !(h.lower_right || h.upper_left) : !(h.lower_left || h.upper_right);
}

struct Arc {
  double lo = 0.0;
  double hi = 0.0;
};

// Longest run of hinge-free chords for lower points s = base + dir * u,
// u in (0, umax), refined by bisection at both ends.
bool hinge_free_arc(const BoundaryCurve& curve, double base, double dir, double umax, double angle,
                    const SpecialOptions& opt, bool primed, double ubar1, Arc* out) {
  const double du = ubar1 / opt.scan;
  std::vector<double> us;
  for (int j = 1; j * du < umax; ++j) us.push_back(j * du);
  const int n = static_cast<int>(us.size());
  const BoundarySamples cache = sample_boundary(curve, opt.census_samples);
  std::vector<char> free(n, 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (int j = 0; j < n; ++j)
    free[j] = chord_free(curve, base + dir * us[j], angle, opt.census_samples, primed, &cache);
  int best_start = -1, best_len = 0;
  for (int j = 0; j < n;) {
    if (!free[j]) {
      ++j;
      continue;
    }
    int k = j;
    while (k < n && free[k]) ++k;
    if (k - j > best_len) {
      best_len = k - j;
      best_start = j;
    }
    j = k;
  }
  if (best_len == 0) return false;
  auto pred = [&](double u) {
    return chord_free(curve, base + dir * u, angle, opt.census_samples, primed, &cache);
  };
  auto refine = [&](double in, double outside) {
    for (int it = 0; it < 80 && std::abs(in - outside) > curve.tol_root(); ++it) {
      const double mid = 0.5 * (in + outside);
      if (pred(mid)) in = mid;
      else outside = mid;
    }
    return 0.5 * (in + outside);
  };
  const int first = best_start, last = best_start + best_len - 1;
  out->lo = first > 0 ? refine(us[first], us[first - 1]) : refine(us[first], 0.0);
  out->hi = last < n - 1 ? refine(us[last], us[last + 1]) : refine(us[last], umax);
  return true;
}

}  // namespace

bool alpha_chord_hinge_free(const BoundaryCurve& curve, double s, double alpha, int census_samples) {
  return chord_free(curve, s, alpha, census_samples, false);
}

SpecialPoints compute_special_points(const BoundaryCurve& curve, double alpha,
                                     const SpecialOptions& opt) {
  if (!(alpha > 0.0 && alpha < kPi / 2)) throw Error(Errc::InvalidInput, "alpha must lie in (0, pi/2)");
  const double alpha_p = kPi - alpha;
  SpecialPoints sp;
  sp.alpha = alpha;
  sp.total = curve.total_length();

  sp.P[1] = by_normal(curve, alpha);
  sp.Q[1] = partner(curve, sp.P[1], alpha);
  sp.Q[6] = by_normal(curve, kPi + alpha);
  sp.P[6] = partner(curve, sp.Q[6], alpha);
  sp.Pp[1] = by_normal(curve, alpha_p);
  sp.Qp[1] = partner(curve, sp.Pp[1], alpha_p);
  sp.Qp[6] = by_normal(curve, kPi + alpha_p);
  sp.Pp[6] = partner(curve, sp.Qp[6], alpha_p);
  sp.ubar1 = curve.wrap(sp.Pp[1].s - sp.P[1].s);
  sp.ubar2 = curve.wrap(sp.Qp[6].s - sp.Q[6].s);

  const double tol = curve.tol_root();
  const double ex[4] = {sp.P[6].x.x - sp.P[1].x.x, sp.Q[6].x.x - sp.Q[1].x.x,
                        sp.Pp[1].x.x - sp.Pp[6].x.x, sp.Qp[1].x.x - sp.Qp[6].x.x};
  for (double v : ex) {
    if (v < -tol) throw Error(Errc::OrientationViolated, "special points out of order along e1");
  }
  bool degenerate = false;
  for (double v : ex) degenerate = degenerate || std::abs(v) <= 1e3 * tol;
  if (degenerate) {
    sp.note = "arc from P1 to P6 is degenerate; no hinge-free chords";
    if (opt.require_hinge_free) throw Error(Errc::EmptyHingeFreeArc, sp.note);
    return sp;
  }

  Arc plain, primed;
  const bool ok_plain = hinge_free_arc(curve, sp.P[1].s, 1.0, sp.u1_of(sp.P[6].s), alpha, opt, false,
                                       sp.ubar1, &plain);
  const bool ok_primed = hinge_free_arc(curve, sp.Pp[1].s, -1.0, sp.ubar1 - sp.u1_of(sp.Pp[6].s),
                                        alpha_p, opt, true, sp.ubar1, &primed);
  if (!ok_plain || !ok_primed) {
    sp.note = ok_plain ? "no hinge-free primed chords" : "no hinge-free chords at angle alpha";
    if (opt.require_hinge_free) throw Error(Errc::EmptyHingeFreeArc, sp.note);
    return sp;
  }
  sp.P[3] = mark_at(curve, sp.P[1].s + plain.lo);
  sp.P[4] = mark_at(curve, sp.P[1].s + plain.hi);
  sp.Q[3] = partner(curve, sp.P[3], alpha);
  sp.Q[4] = partner(curve, sp.P[4], alpha);
  sp.Pp[3] = mark_at(curve, sp.Pp[1].s - primed.lo);
  sp.Pp[4] = mark_at(curve, sp.Pp[1].s - primed.hi);
  sp.Qp[3] = partner(curve, sp.Pp[3], alpha_p);
  sp.Qp[4] = partner(curve, sp.Pp[4], alpha_p);
  sp.hinge_free = true;
  return sp;
}

bool try_phi(const SpecialPoints& sp, const Chord& chord, UPoint* out) {
  const double slack = 1e-9 * sp.total;
  if (!sp.in_lower(chord.s_P, slack) || !sp.in_upper(chord.s_Q, slack)) return false;
  double u1 = sp.u1_of(chord.s_P), u2 = sp.u2_of(chord.s_Q);
  if (u1 > sp.ubar1 + slack) u1 = 0.0;
  if (u2 > sp.ubar2 + slack) u2 = 0.0;
  out->u1 = std::min(u1, sp.ubar1);
  out->u2 = std::min(u2, sp.ubar2);
  return true;
}

UPoint phi(const SpecialPoints& sp, const Chord& chord) {
  UPoint u;
  if (!try_phi(sp, chord, &u))
    throw Error(Errc::NotAdmissible, "chord does not meet both boundary parts");
  return u;
}

Chord phi_inv(const BoundaryCurve& curve, const SpecialPoints& sp, UPoint u) {
  const double slack = 1e-9 * sp.total;
  if (u.u1 < -slack || u.u1 > sp.ubar1 + slack || u.u2 < -slack || u.u2 > sp.ubar2 + slack)
    throw Error(Errc::NotAdmissible, "point outside the chart rectangle");
  return chord_from_params(curve, sp.s_of_u1(u.u1), sp.s_of_u2(u.u2));
}

json special_points_json(const SpecialPoints& sp) {
  json pts = json::object();
  auto put = [&](const std::string& name, const MarkedPoint& m) {
    if (m.known) pts[name] = {{"x", m.x.x}, {"y", m.x.y}, {"s", m.s}};
  };
  for (int i = 1; i <= 6; ++i) {
    put("P" + std::to_string(i), sp.P[i]);
    put("Q" + std::to_string(i), sp.Q[i]);
    put("P'" + std::to_string(i), sp.Pp[i]);
    put("Q'" + std::to_string(i), sp.Qp[i]);
  }
  return {{"alpha", sp.alpha},   {"total_length", sp.total}, {"ubar1", sp.ubar1},
          {"ubar2", sp.ubar2},   {"hinge_free", sp.hinge_free}, {"note", sp.note},
          {"points", pts}};
}

}  // namespace mirror
