// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mirror {

using nlohmann::json;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

bool AssumptionReport::all_pass() const {
  return std::all_of(std::begin(a), std::end(a), [](const CheckResult& c) { return c.verdict == Verdict::Pass; });
}

bool AssumptionReport::any_fail() const {
  return std::any_of(std::begin(a), std::end(a), [](const CheckResult& c) { return c.verdict == Verdict::Fail; });
}

namespace {

bool is_lower(OdeFamily f) { return f == OdeFamily::LowerPlain || f == OdeFamily::LowerPrimed; }
bool is_primed(OdeFamily f) { return f == OdeFamily::UpperPrimed || f == OdeFamily::LowerPrimed; }

// Position range of the family anchor in chart coordinates.
void family_range(const SpecialPoints& sp, OdeFamily f, double* lo, double* hi) {
  switch (f) {
    case OdeFamily::LowerPlain:
      *lo = 0.0;
      *hi = sp.P[3].known ? sp.u1_of(sp.P[3].s) : sp.ubar1;
      break;
    case OdeFamily::LowerPrimed:
      *lo = sp.Pp[3].known ? sp.u1_of(sp.Pp[3].s) : 0.0;
      *hi = sp.ubar1;
      break;
    case OdeFamily::UpperPlain:
      *lo = sp.Q[4].known ? sp.u2_of(sp.Q[4].s) : 0.0;
      *hi = sp.ubar2;
      break;
    case OdeFamily::UpperPrimed:
      *lo = 0.0;
      *hi = sp.Qp[4].known ? sp.u2_of(sp.Qp[4].s) : sp.ubar2;
      break;
  }
}

// Angle at which the chord through the anchor becomes normal to the boundary.
double normal_chord_angle(const BoundaryCurve& curve, double s, bool lower) {
  const Vec2 n = curve.normal_at(s);
  return lower ? wrap_2pi(angle_of(n)) : wrap_pi(angle_of(-n));
}

Witness witness_of(const Chord& c, std::string what) {
  Witness w;
  w.s_P = c.s_P;
  w.s_Q = c.s_Q;
  w.angle = c.angle;
  w.what = std::move(what);
  return w;
}

Witness witness_of(const Chord& c, const BoundaryCurve& curve, double s_A, std::string what) {
  Witness w = witness_of(c, std::move(what));
  w.s_A = curve.wrap(s_A);
  w.A = curve.point_at(s_A);
  return w;
}

struct Probe {
  bool formed = false;
  bool failed = false;
  Witness witness;
};

// Keeps the first failure in index order so the verdict does not depend on
// scheduling.
CheckResult reduce(const std::vector<Probe>& probes, const std::string& pass_reason) {
  CheckResult r;
  for (const auto& p : probes) {
    if (!p.formed) continue;
    ++r.chords;
    if (p.failed && !r.witness) r.witness = p.witness;
  }
  if (r.witness) {
    r.verdict = Verdict::Fail;
    r.reason = r.witness->what;
  } else if (r.chords == 0) {
    r.verdict = Verdict::Skipped;
    r.reason = "no chords could be formed";
  } else {
    r.verdict = Verdict::Pass;
    r.reason = pass_reason;
  }
  return r;
}

// First boundary point strictly inside the open arc from a to b (ccw) whose
// reflection lies inside D.
std::optional<double> first_active(const BoundaryCurve& curve, const Chord& c, double a, double b, int n) {
  const double len = curve.wrap(b - a);
  for (int j = 1; j <= n; ++j) {
    const double s = a + len * j / (n + 1);
    if (activity_margin(curve, c, curve.point_at(s)) > curve.tol_bd()) return s;
  }
  return std::nullopt;
}

bool hinge_types_ok(const HingeCensus& h, OdeFamily f, std::string* what) {
  // Required and forbidden classes, mirrored for the primes.
  bool need, forbid;
  const char* need_name;
  const char* forbid_name;
  switch (f) {
    case OdeFamily::LowerPlain:
      need = h.lower_left, forbid = h.upper_right, need_name = "lower left", forbid_name = "upper right";
      break;
    case OdeFamily::UpperPlain:
      need = h.upper_right, forbid = h.lower_left, need_name = "upper right", forbid_name = "lower left";
      break;
    case OdeFamily::LowerPrimed:
      need = h.lower_right, forbid = h.upper_left, need_name = "lower right", forbid_name = "upper left";
      break;
    default:
      need = h.upper_left, forbid = h.lower_right, need_name = "upper left", forbid_name = "lower right";
      break;
  }
  if (!need) *what = std::string("no ") + need_name + " hinge";
  else if (forbid) *what = std::string("has an ") + forbid_name + " hinge";
  return need && !forbid;
}

std::optional<double> hinge_witness(const HingeCensus& h, OdeFamily f) {
  const std::optional<Hinge>* cand[] = {&h.upper_right_witness, &h.lower_left_witness,
                                        &h.upper_left_witness, &h.lower_right_witness};
  const int first = is_primed(f) ? 2 : 0;
  for (int k = first; k < first + 2; ++k)
    if (*cand[k]) return (*cand[k])->s_A;
  return std::nullopt;
}

constexpr OdeFamily kFamilies[4] = {OdeFamily::LowerPlain, OdeFamily::UpperPlain,
                                    OdeFamily::LowerPrimed, OdeFamily::UpperPrimed};

}  // namespace

Chord family_chord(const BoundaryCurve& curve, const SpecialPoints& sp, OdeFamily f, double t_pos,
                   double t_angle, double buffer) {
  double lo = 0.0, hi = 0.0;
  family_range(sp, f, &lo, &hi);
  const double u = lo + (hi - lo) * t_pos;
  const bool lower = is_lower(f);
  const double s = lower ? sp.s_of_u1(u) : sp.s_of_u2(u);
  const double alpha = sp.alpha, alpha_p = kPi - sp.alpha;
  const double nrm = normal_chord_angle(curve, s, lower);
  double a_lo, a_hi;
  if (is_primed(f)) {
    a_lo = std::max(nrm, alpha) + buffer;
    a_hi = alpha_p - buffer;
  } else {
    a_lo = alpha + buffer;
    a_hi = std::min(nrm, alpha_p) - buffer;
  }
  if (!(a_hi > a_lo)) throw Error(Errc::NotAdmissible, "empty angle range for the family");
  const Chord c = chord_through(curve, s, a_lo + (a_hi - a_lo) * t_angle);
  const double s_anchor = lower ? c.s_P : c.s_Q;
  if (std::abs(curve.wrap(s_anchor - s + 0.5 * curve.total_length()) - 0.5 * curve.total_length()) >
      1e-9 * curve.total_length())
    throw Error(Errc::NotAdmissible, "anchor is not at the expected chord end");
  return c;
}

CheckResult check_a1(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt) {
  const double tol = curve.tol_root();
  if (!sp.P[3].known || !sp.P[4].known || !sp.Pp[3].known || !sp.Pp[4].known ||
      sp.P[6].x.x - sp.P[1].x.x <= tol || sp.Pp[1].x.x - sp.Pp[6].x.x <= tol) {
    CheckResult r;
    r.verdict = Verdict::Fail;
    const Chord c = chord_through(curve, sp.P[1].s, sp.alpha);
    r.witness = witness_of(c, curve, sp.P[6].s, "no alpha-chords [P3,Q3], [P4,Q4] with P1 < P3 < P4 < P6");
    r.reason = r.witness->what;
    return r;
  }
  const double alpha = sp.alpha, alpha_p = kPi - sp.alpha;
  const int g = opt.grid;
  std::vector<Probe> probes(4 * g * g);
#pragma omp parallel for schedule(dynamic, 8)
  for (int idx = 0; idx < 4 * g * g; ++idx) {
    const int kind = idx / (g * g), i = (idx / g) % g, j = idx % g;
    const double tp = (i + 0.5) / g, ta = (j + 0.5) / g;
    Probe& pr = probes[idx];
    double s, a_lo, a_hi;
    const bool lower = kind == 0 || kind == 2;
    // kind 0: P1<P<P3, 1: Q4<Q<Q6, 2: P'3<P'<P'1, 3: Q'6<Q'<Q'4.
    double lo = 0, hi = 0;
    if (kind == 0) lo = 0.0, hi = sp.u1_of(sp.P[3].s);
    if (kind == 1) lo = sp.u2_of(sp.Q[4].s), hi = sp.ubar2;
    if (kind == 2) lo = sp.u1_of(sp.Pp[3].s), hi = sp.ubar1;
    if (kind == 3) lo = 0.0, hi = sp.u2_of(sp.Qp[4].s);
    const double u = lo + (hi - lo) * tp;
    s = lower ? sp.s_of_u1(u) : sp.s_of_u2(u);
    const double nrm = normal_chord_angle(curve, s, lower);
    if (kind < 2) a_lo = std::max(nrm, alpha) + opt.buffer, a_hi = alpha_p;
    else a_lo = alpha, a_hi = std::min(nrm, alpha_p) - opt.buffer;
    if (!(a_hi > a_lo)) continue;
    Chord c;
    try {
      c = chord_through(curve, s, a_lo + (a_hi - a_lo) * ta);
    } catch (const Error&) {
      continue;
    }
    // Admissible: the chord meets both boundary parts.
    const double slack = 1e-9 * sp.total;
    if (!sp.in_lower(c.s_P, slack) || !sp.in_upper(c.s_Q, slack)) continue;
    pr.formed = true;
    const bool check_right = kind == 0 || kind == 3;
    const auto hit = check_right ? first_active(curve, c, c.s_P, c.s_Q, opt.scan)
                                 : first_active(curve, c, c.s_Q, c.s_P, opt.scan);
    if (hit) {
      pr.failed = true;
      pr.witness = witness_of(c, curve, *hit, check_right ? "active right boundary point" : "active left boundary point");
    }
  }
  return reduce(probes, "no active point on the guarded side");
}

CheckResult check_a2(const BoundaryCurve& curve, const SpecialPoints& sp, double* nu_found,
                     const AssumptionOptions& opt) {
  const int K = static_cast<int>(std::lround(opt.nu_max / opt.nu_step));
  const int g = opt.grid;
  const bool have = sp.P[3].known && sp.P[4].known && sp.Pp[3].known && sp.Pp[4].known;
  double lo[2], hi[2];
  if (have) {
    lo[0] = sp.u1_of(sp.P[3].s), hi[0] = sp.u1_of(sp.P[4].s);
    lo[1] = sp.u1_of(sp.Pp[4].s), hi[1] = sp.u1_of(sp.Pp[3].s);
  } else {
    lo[0] = lo[1] = 0.0;
    hi[0] = hi[1] = sp.ubar1;
  }
  const BoundarySamples cache = sample_boundary(curve, opt.census);
  const int n = (K + 1) * 2 * g;
  std::vector<Probe> probes(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (int idx = 0; idx < n; ++idx) {
    const int k = idx / (2 * g), primed = (idx / g) % 2, i = idx % g;
    const double u = lo[primed] + (hi[primed] - lo[primed]) * (i + 0.5) / g;
    const double angle = primed ? kPi - sp.alpha + k * opt.nu_step : sp.alpha - k * opt.nu_step;
    Probe& pr = probes[idx];
    Chord c;
    try {
      c = chord_through(curve, sp.s_of_u1(u), angle);
    } catch (const Error&) {
      continue;
    }
    const double slack = 1e-9 * sp.total;
    if (!sp.in_lower(c.s_P, slack) || !sp.in_upper(c.s_Q, slack)) continue;
    pr.formed = true;
    const HingeCensus h = hinge_census(curve, c, opt.census, &cache);
    const bool bad = primed ? (h.lower_right || h.upper_left) : (h.lower_left || h.upper_right);
    if (bad) {
      pr.failed = true;
      const std::optional<Hinge>& w =
          primed ? (h.lower_right ? h.lower_right_witness : h.upper_left_witness)
                 : (h.lower_left ? h.lower_left_witness : h.upper_right_witness);
      pr.witness = w ? witness_of(c, curve, w->s_A, primed ? "lower right or upper left hinge"
                                                            : "lower left or upper right hinge")
                     : witness_of(c, primed ? "lower right or upper left hinge" : "lower left or upper right hinge");
    }
  }
  // Largest nu on the grid with every smaller level clean.
  int kmax = -1;
  std::optional<Witness> first_bad;
  long formed = 0;
  for (int k = 0; k <= K; ++k) {
    bool clean = true;
    for (int r = 0; r < 2 * g; ++r) {
      const Probe& p = probes[k * 2 * g + r];
      formed += p.formed;
      if (p.failed) {
        clean = false;
        if (!first_bad) first_bad = p.witness;
      }
    }
    if (!clean) break;
    kmax = k;
  }
  *nu_found = have && kmax > 0 ? kmax * opt.nu_step : 0.0;
  CheckResult r;
  r.chords = formed;
  if (!have) {
    r.verdict = Verdict::Fail;
    r.witness = first_bad;
    if (!r.witness) {
      const Chord c = chord_through(curve, sp.P[1].s, sp.alpha);
      r.witness = witness_of(c, "no hinge-free arc of alpha-chords");
    }
    r.reason = "no arc P3 < P < P4; " + r.witness->what;
  } else if (kmax < 1) {
    r.verdict = Verdict::Fail;
    r.witness = first_bad;
    r.reason = first_bad ? first_bad->what : "no chords could be formed";
  } else {
    r.verdict = Verdict::Pass;
    r.reason = "clean up to nu = " + std::to_string(*nu_found);
  }
  return r;
}

CheckResult check_a3(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt) {
  const int g = opt.grid;
  const BoundarySamples cache = sample_boundary(curve, opt.census);
  std::vector<Probe> probes(4 * g * g);
#pragma omp parallel for schedule(dynamic, 8)
  for (int idx = 0; idx < 4 * g * g; ++idx) {
    const OdeFamily f = kFamilies[idx / (g * g)];
    const int i = (idx / g) % g, j = idx % g;
    Probe& pr = probes[idx];
    Chord c;
    try {
      c = family_chord(curve, sp, f, (i + 0.5) / g, (j + 0.5) / g, opt.buffer);
    } catch (const Error&) {
      continue;
    }
    pr.formed = true;
    const HingeCensus h = hinge_census(curve, c, opt.census, &cache);
    std::string what;
    if (!hinge_types_ok(h, f, &what)) {
      pr.failed = true;
      const auto s = hinge_witness(h, f);
      what = std::string(to_string(f)) + ": " + what;
      pr.witness = s ? witness_of(c, curve, *s, what) : witness_of(c, what);
    }
  }
  return reduce(probes, "hinge classes as required on every sampled chord");
}

CheckResult check_a4(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt) {
  const int g = opt.grid;
  std::vector<Probe> probes(4 * g * g);
#pragma omp parallel for schedule(dynamic, 8)
  for (int idx = 0; idx < 4 * g * g; ++idx) {
    const OdeFamily f = kFamilies[idx / (g * g)];
    const int i = (idx / g) % g, j = idx % g;
    Probe& pr = probes[idx];
    Chord c;
    try {
      c = family_chord(curve, sp, f, (i + 0.5) / g, (j + 0.5) / g, opt.buffer);
    } catch (const Error&) {
      continue;
    }
    pr.formed = true;
    const ExtremalFamily fam = is_lower(f) ? ExtremalFamily::LowerHinges : ExtremalFamily::UpperHinges;
    try {
      ExtremalOptions eo;
      eo.samples = opt.census;
      const ExtremalPoints e = extremal_points(curve, c, fam, eo);
      if (!e.levels_ok) {
        pr.failed = true;
        pr.witness = witness_of(c, curve, e.s_right,
                                std::string(to_string(f)) + ": tangent lines miss the required ray");
      }
    } catch (const Error& e) {
      pr.failed = true;
      pr.witness = witness_of(c, std::string(to_string(f)) + ": " + e.what());
    }
  }
  return reduce(probes, "unique nontangential crossing with hinges on the required ray");
}

CheckResult check_a5(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt) {
  const int n = opt.pair_chords;
  const int npos = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int nang = (n + npos - 1) / npos;
  auto chords_of = [&](OdeFamily f) {
    std::vector<std::optional<Chord>> out(n);
    for (int k = 0; k < n; ++k) {
      try {
        out[k] = family_chord(curve, sp, f, (k % npos + 0.5) / npos, (k / npos + 0.5) / nang, opt.buffer);
      } catch (const Error&) {
      }
    }
    return out;
  };
  const std::vector<std::optional<Chord>> fam[4] = {
      chords_of(OdeFamily::LowerPlain), chords_of(OdeFamily::UpperPrimed),
      chords_of(OdeFamily::LowerPrimed), chords_of(OdeFamily::UpperPlain)};
  std::vector<Probe> probes(2 * n * n);
#pragma omp parallel for schedule(static)
  for (int idx = 0; idx < 2 * n * n; ++idx) {
    const int pair = idx / (n * n), i = (idx / n) % n, j = idx % n;
    const auto& a = fam[2 * pair][i];
    const auto& b = fam[2 * pair + 1][j];
    if (!a || !b) continue;
    Probe& pr = probes[idx];
    pr.formed = true;
    const double den = cross(a->p, b->p);
    if (std::abs(den) < 1e-14) {
      pr.failed = true;
      pr.witness = witness_of(*a, "parallel lines");
      continue;
    }
    const double t = cross(b->P - a->P, b->p) / den;
    const Vec2 x = a->P + a->p * t;
    if (curve.signed_distance(x) < -curve.tol_bd()) {
      pr.failed = true;
      pr.witness = witness_of(*a, "line intersection outside the closed domain");
      pr.witness.A = x;
    }
  }
  return reduce(probes, "every sampled pair meets inside the closed domain");
}

AssumptionReport check_assumptions(const BoundaryCurve& curve, const SpecialPoints& sp,
                                   const AssumptionOptions& opt) {
  AssumptionReport rep;
  rep.opt = opt;
  rep.a[0] = check_a1(curve, sp, opt);
  rep.a[1] = check_a2(curve, sp, &rep.nu_found, opt);
  rep.a[2] = check_a3(curve, sp, opt);
  rep.a[3] = check_a4(curve, sp, opt);
  rep.a[4] = check_a5(curve, sp, opt);
  return rep;
}

json assumptions_json(const AssumptionReport& rep) {
  json checks = json::array();
  for (int k = 0; k < 5; ++k) {
    const CheckResult& c = rep.a[k];
    json j = {{"assumption", k + 1},
              {"verdict", to_string(c.verdict)},
              {"reason", c.reason},
              {"chords", c.chords}};
    if (c.witness) {
      const Witness& w = *c.witness;
      j["witness"] = {{"s_P", w.s_P}, {"s_Q", w.s_Q}, {"angle", w.angle}, {"what", w.what}};
      if (w.s_A) j["witness"]["s_A"] = *w.s_A;
      j["witness"]["A"] = {w.A.x, w.A.y};
    }
    checks.push_back(j);
  }
  return {{"kind", "assumptions"},
          {"checks", checks},
          {"nu_found", rep.nu_found},
          {"all_pass", rep.all_pass()},
          {"resolution",
           {{"grid", rep.opt.grid},
            {"scan", rep.opt.scan},
            {"census", rep.opt.census},
            {"pair_chords", rep.opt.pair_chords},
            {"buffer", rep.opt.buffer},
            {"nu_step", rep.opt.nu_step},
            {"nu_max", rep.opt.nu_max}}}};
}

}  // namespace mirror
