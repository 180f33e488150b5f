// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/hinges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mirror {

namespace {

constexpr double kTolPar = 1e-9;

Chord make_chord(const BoundaryCurve& curve, double s_a, Vec2 a, double s_b, Vec2 b) {
  Vec2 d = b - a;
  bool swap = std::abs(d.y) > 1e-14 * norm(d) ? d.y < 0 : d.x < 0;
  if (swap) {
    std::swap(s_a, s_b);
    std::swap(a, b);
  }
  Chord c;
  c.s_P = curve.wrap(s_a);
  c.s_Q = curve.wrap(s_b);
  c.P = a;
  c.Q = b;
  c.p = normalized(b - a);
  c.angle = wrap_pi(angle_of(c.p));
  c.m = {c.p.y, -c.p.x};
  return c;
}

double mirror_distance(const Chord& c, Vec2 A) { return std::abs(dot(A - c.P, c.m)); }

// Arclength positions used by the census: uniform plus geometric clusters.
void push_cluster(std::vector<double>& out, double s0, double span, int levels) {
  for (int k = 0; k < levels; ++k) {
    const double d = span * std::ldexp(1.0, -k);
    out.push_back(s0 + d);
    out.push_back(s0 - d);
  }
}

void mark(HingeCensus& c, const Hinge& h) {
  if (h.side == Side::Left && h.level == Level::Lower && !c.lower_left) {
    c.lower_left = true;
    c.lower_left_witness = h;
  } else if (h.side == Side::Right && h.level == Level::Lower && !c.lower_right) {
    c.lower_right = true;
    c.lower_right_witness = h;
  } else if (h.side == Side::Left && h.level == Level::Upper && !c.upper_left) {
    c.upper_left = true;
    c.upper_left_witness = h;
  } else if (h.side == Side::Right && h.level == Level::Upper && !c.upper_right) {
    c.upper_right = true;
    c.upper_right_witness = h;
  }
}

int class_index(Side s, Level l) { return (s == Side::Left ? 0 : 1) + (l == Level::Lower ? 0 : 2); }

}  // namespace

const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }
const char* to_string(Level l) { return l == Level::Upper ? "upper" : "lower"; }

Chord chord_from_line(const BoundaryCurve& curve, const LineRepr& line) {
  const auto [sp, sq] = curve.line_intersections(line);
  return make_chord(curve, sp, curve.point_at(sp), sq, curve.point_at(sq));
}

Chord chord_from_params(const BoundaryCurve& curve, double s_a, double s_b) {
  const Vec2 a = curve.point_at(s_a), b = curve.point_at(s_b);
  if (dist(a, b) <= curve.tol_root()) throw Error(Errc::DegenerateChord, "coincident chord ends");
  return make_chord(curve, s_a, a, s_b, b);
}

Chord chord_through(const BoundaryCurve& curve, double s, double angle) {
  const Vec2 a = curve.point_at(s);
  const auto pts = curve.raw_line_intersections(LineRepr(angle, a));
  // The partner is the intersection farthest from the anchor.
  double best = -1.0;
  double s_b = 0.0;
  Vec2 b;
  for (const auto& h : pts) {
    const double d = dist(h.second, a);
    if (d > best) {
      best = d;
      s_b = h.first;
      b = h.second;
    }
  }
  if (best <= curve.tol_root()) throw Error(Errc::TangentLine, "line only touches the boundary");
  return make_chord(curve, s, a, s_b, b);
}

Side side_of(const Chord& chord, Vec2 A) {
  return dot(A - chord.P, chord.m) < 0 ? Side::Left : Side::Right;
}

double activity_margin(const BoundaryCurve& curve, const Chord& chord, Vec2 A) {
  return curve.radial_excess(reflect_point(A, chord.line()));
}

bool is_active(const BoundaryCurve& curve, const Chord& chord, double s_A) {
  const Vec2 A = curve.point_at(s_A);
  if (mirror_distance(chord, A) <= curve.tol_bd())
    throw Error(Errc::OnMirror, "boundary point lies on the mirror");
  return activity_margin(curve, chord, A) >= -curve.tol_bd();
}

namespace {
std::optional<Hinge> hinge_from_frame(const Chord& chord, double s_A, Vec2 A, Vec2 t) {
  if (1.0 - std::abs(dot(chord.p, t)) <= kTolPar) return std::nullopt;
  const double c = cross(chord.p, t);
  const double lam = cross(A - chord.P, t) / c;
  const double L = chord.length();
  Hinge h;
  h.s_A = s_A;
  h.A = A;
  h.H = chord.P + chord.p * lam;
  h.side = side_of(chord, A);
  if (lam >= L) {
    h.level = Level::Upper;
    h.d = lam - L;
  } else if (lam <= 0.0) {
    h.level = Level::Lower;
    h.d = -lam;
  } else {
    h.level = lam > 0.5 * L ? Level::Upper : Level::Lower;
    h.d = 0.0;
  }
  return h;
}
}  // namespace

BoundarySamples sample_boundary(const BoundaryCurve& curve, int n) {
  BoundarySamples b;
  b.s.resize(n);
  b.A.resize(n);
  b.T.resize(n);
  for (int i = 0; i < n; ++i) {
    b.s[i] = curve.total_length() * i / n;
    curve.frame_at(b.s[i], &b.A[i], &b.T[i]);
  }
  return b;
}

std::optional<Hinge> hinge_geometry(const BoundaryCurve& curve, const Chord& chord, double s_A) {
  Vec2 A, t;
  curve.frame_at(s_A, &A, &t);
  return hinge_from_frame(chord, curve.wrap(s_A), A, t);
}

std::optional<Hinge> hinge_of(const BoundaryCurve& curve, const Chord& chord, double s_A) {
  if (!is_active(curve, chord, s_A)) return std::nullopt;
  return hinge_geometry(curve, chord, s_A);
}

namespace {
HingeSample sample_at(const BoundaryCurve& curve, const Chord& chord, double s) {
  HingeSample row;
  row.s_A = s;
  const Vec2 A = curve.point_at(s);
  if (mirror_distance(chord, A) <= curve.tol_bd()) {
    row.on_mirror = true;
    return row;
  }
  row.active = activity_margin(curve, chord, A) >= -curve.tol_bd();
  if (row.active) row.hinge = hinge_geometry(curve, chord, s);
  return row;
}
}  // namespace

std::vector<HingeSample> scan_hinges(const BoundaryCurve& curve, const Chord& chord, int n) {
  std::vector<HingeSample> rows(n);
  const double L = curve.total_length();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) rows[i] = sample_at(curve, chord, L * i / n);
  return rows;
}

std::vector<HingeSample> scan_hinges_serial(const BoundaryCurve& curve, const Chord& chord, int n) {
  std::vector<HingeSample> rows(n);
  const double L = curve.total_length();
  for (int i = 0; i < n; ++i) rows[i] = sample_at(curve, chord, L * i / n);
  return rows;
}

HingeCensus hinge_census(const BoundaryCurve& curve, const Chord& chord, int n,
                         const BoundarySamples* cache) {
  const double L = curve.total_length();
  BoundarySamples local;
  if (!cache || static_cast<int>(cache->s.size()) != n) {
    local = sample_boundary(curve, n);
    cache = &local;
  }
  std::vector<double> extra;
  extra.reserve(400);
  push_cluster(extra, chord.s_P, L / n, 30);
  push_cluster(extra, chord.s_Q, L / n, 30);
  for (double ang : {angle_of(chord.m), angle_of(-chord.m)}) {
    const NormalMatch nm = curve.find_by_normal_angle(wrap_2pi(ang));
    push_cluster(extra, nm.s, 0.05 * L, 34);
    if (nm.kind == NormalMatchKind::Flat) push_cluster(extra, nm.s_hi, 0.05 * L, 34);
  }
  struct Eval {
    double s = 0.0;
    Vec2 A, T;
    bool valid = false;
    double g = 0.0;
    std::optional<Hinge> h;
  };
  std::vector<Eval> ev;
  ev.reserve(n + extra.size());
  for (int i = 0; i < n; ++i) ev.push_back({cache->s[i], cache->A[i], cache->T[i], false, 0.0, std::nullopt});
  for (double s : extra) {
    Eval e;
    e.s = curve.wrap(s);
    curve.frame_at(e.s, &e.A, &e.T);
    ev.push_back(e);
  }
  std::sort(ev.begin(), ev.end(), [](const Eval& a, const Eval& b) { return a.s < b.s; });
  ev.erase(std::unique(ev.begin(), ev.end(), [](const Eval& a, const Eval& b) { return a.s == b.s; }),
           ev.end());

  const double excl = 1e-7 * curve.diameter();
  const double tb = curve.tol_bd();
  const int N = static_cast<int>(ev.size());
  const LineRepr line = chord.line();
  for (auto& e : ev) {
    if (mirror_distance(chord, e.A) <= excl) continue;
    e.valid = true;
    e.g = curve.radial_excess(reflect_point(e.A, line));
    e.h = hinge_from_frame(chord, e.s, e.A, e.T);
  }
  std::vector<double> pos(N);
  for (int i = 0; i < N; ++i) pos[i] = ev[i].s;

  HingeCensus census;
  std::array<int, 4> best{-1, -1, -1, -1};
  for (int i = 0; i < N; ++i) {
    if (!ev[i].valid) continue;
    const Vec2 A = ev[i].A;
    const bool active = ev[i].g >= -tb;
    if (active) {
      if (side_of(chord, A) == Side::Right) {
        if (!census.any_right_active) census.right_active_witness = pos[i];
        census.any_right_active = true;
      } else {
        if (!census.any_left_active) census.left_active_witness = pos[i];
        census.any_left_active = true;
      }
    }
    if (!ev[i].h) continue;
    if (active) mark(census, *ev[i].h);
    const int ci = class_index(ev[i].h->side, ev[i].h->level);
    if (best[ci] < 0 || ev[i].g > ev[best[ci]].g) best[ci] = i;
  }

  // Local maximization of the margin for classes not yet witnessed.
  const std::array<bool*, 4> found = {&census.lower_left, &census.lower_right, &census.upper_left,
                                      &census.upper_right};
  for (int ci = 0; ci < 4; ++ci) {
    if (*found[ci] || best[ci] < 0) continue;
    const int i = best[ci];
    double a = pos[(i + N - 1) % N], b = pos[(i + 1) % N];
    if (b < a) b += L;
    if (a > pos[i]) a -= L;
    auto f = [&](double s) {
      const Vec2 A = curve.point_at(s);
      if (mirror_distance(chord, A) <= excl) return -std::numeric_limits<double>::infinity();
      return activity_margin(curve, chord, A);
    };
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60 && b - a > 1e-13 * L; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = f(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = f(x1);
      }
    }
    const double sm = f1 > f2 ? x1 : x2;
    if (std::max(f1, f2) >= -tb) {
      auto h = hinge_geometry(curve, chord, sm);
      if (h && class_index(h->side, h->level) == ci) mark(census, *h);
    }
  }
  return census;
}

ExtremalPoints extremal_points(const BoundaryCurve& curve, const Chord& chord,
                               ExtremalFamily family, const ExtremalOptions& opt) {
  const double lenR = curve.wrap(chord.s_Q - chord.s_P);
  const double noise = 1e-13 * curve.diameter();
  auto g = [&](double off) {
    return activity_margin(curve, chord, curve.point_at(chord.s_P + off));
  };
  std::vector<double> offs;
  const int N = std::max(8, opt.samples);
  for (int j = 1; j < N; ++j) offs.push_back(lenR * j / N);
  for (int k = 1; k <= 44; ++k) {
    const double d = lenR / N * std::ldexp(1.0, -k);
    offs.push_back(d);
    offs.push_back(lenR - d);
  }
  std::sort(offs.begin(), offs.end());
  std::vector<std::pair<double, int>> signs;
  int nonzero = 0;
  for (double o : offs) {
    const double v = g(o);
    const int sg = v > noise ? 1 : (v < -noise ? -1 : 0);
    if (sg != 0) {
      signs.emplace_back(o, sg);
      ++nonzero;
    }
  }
  if (nonzero == 0)
    throw Error(Errc::TangentialIntersection, "reflected left boundary coincides with the right boundary");
  int changes = 0;
  int idx = -1;
  for (size_t i = 1; i < signs.size(); ++i) {
    if (signs[i].second != signs[i - 1].second) {
      ++changes;
      idx = static_cast<int>(i);
    }
  }
  if (changes > 1)
    throw Error(Errc::MultipleIntersections,
                std::to_string(changes) + " crossings of the reflected left boundary");
  ExtremalPoints out;
  double s_star;
  if (changes == 0) {
    if (!opt.allow_limit) throw Error(Errc::NoIntersection, "no crossing on the right boundary");
    out.limit = true;
    s_star = signs.front().second > 0 ? chord.s_Q : chord.s_P;
    out.s_right = out.s_left = curve.wrap(s_star);
    out.A_right = out.A_left = curve.point_at(s_star);
    out.levels_ok = out.ordering_ok = true;
    return out;
  }
  double lo = signs[idx - 1].first, hi = signs[idx].first;
  const int slo = signs[idx - 1].second;
  for (int it = 0; it < 200 && hi - lo > 0.1 * curve.tol_root(); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    if (std::abs(v) <= noise * 1e-3) {
      lo = hi = mid;
      break;
    }
    if ((v > 0 ? 1 : -1) == slo) lo = mid;
    else hi = mid;
  }
  s_star = curve.wrap(chord.s_P + 0.5 * (lo + hi));
  out.s_right = s_star;
  out.A_right = curve.point_at(s_star);
  const Vec2 refl = reflect_point(out.A_right, chord.line());
  const Projection pr = curve.project(refl);
  out.s_left = pr.s;
  out.A_left = pr.point;

  const Vec2 tR = curve.tangent_at(out.s_right);
  Vec2 tL = curve.tangent_at(out.s_left);
  tL = tL - chord.m * (2.0 * dot(tL, chord.m));
  out.crossing_angle = std::atan2(std::abs(cross(tR, tL)), std::abs(dot(tR, tL)));
  if (out.crossing_angle < opt.tol_angle)
    throw Error(Errc::TangentialIntersection, "crossing angle " + std::to_string(out.crossing_angle));

  out.H_left = hinge_geometry(curve, chord, out.s_left);
  out.H_right = hinge_geometry(curve, chord, out.s_right);
  const Level want = family == ExtremalFamily::LowerHinges ? Level::Lower : Level::Upper;
  out.levels_ok = out.H_left && out.H_right && out.H_left->level == want &&
                  out.H_right->level == want && out.H_left->side == Side::Left &&
                  out.H_right->side == Side::Right;
  if (out.H_left && out.H_right) {
    out.ordering_ok = family == ExtremalFamily::LowerHinges ? out.H_left->d > out.H_right->d
                                                            : out.H_right->d > out.H_left->d;
  }
  return out;
}

namespace {
void chord_normals(const BoundaryCurve& curve, const Chord& chord, double* pnP, double* pnQ) {
  *pnP = dot(chord.p, curve.normal_at(chord.s_P));
  *pnQ = dot(chord.p, curve.normal_at(chord.s_Q));
  if (std::abs(*pnP) < 1e-12 || std::abs(*pnQ) < 1e-12)
    throw Error(Errc::DegenerateChord, "chord tangent to the boundary at an end");
}
}  // namespace

FieldValue field_F(const BoundaryCurve& curve, const Chord& chord, Vec2 X, Vec2 nX, double V) {
  double pnP, pnQ;
  chord_normals(curve, chord, &pnP, &pnQ);
  return {-dot(X - chord.P, nX) / (pnP * V), dot(X - chord.Q, nX) / (pnQ * V)};
}

FieldValue field_G(const BoundaryCurve& curve, const Chord& chord, Vec2 Y, Vec2 nY, double V) {
  double pnP, pnQ;
  chord_normals(curve, chord, &pnP, &pnQ);
  return {dot(Y - chord.P, nY) / (pnP * V), -dot(Y - chord.Q, nY) / (pnQ * V)};
}

}  // namespace mirror
