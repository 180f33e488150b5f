// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mirror {

namespace {

constexpr std::array<double, 8> kGLx = {-0.9602898564975363, -0.7966664774136267,
                                        -0.5255324099163290, -0.1834346424956498,
                                        0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLw = {0.1012285362903763, 0.2223810344533745,
                                        0.3137066458778873, 0.3626837833783620,
                                        0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss8(F&& f, double a, double b) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) acc += kGLw[i] * f(c + h * kGLx[i]);
  return acc * h;
}

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(F f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Continuous normal angle along an arc piece, anchored at t0.
double arc_normal_offset(const BoundaryPiece& pc, double t) {
  const Vec2 n = perp(pc.d1(t));
  return wrap_signed(angle_of(n) - t - kPi);
}

double piece_turning(const BoundaryPiece& pc) {
  if (pc.kind == PieceKind::Segment) return 0.0;
  return (pc.t1 - pc.t0) + arc_normal_offset(pc, pc.t1) - arc_normal_offset(pc, pc.t0);
}

// Solve a x^2 + b x + c = 0; returns number of real roots.
int solve_quadratic(double a, double b, double c, double* r0, double* r1) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc > -1e-14 * b * b) {
      *r0 = *r1 = -b / (2.0 * a);
      return 1;
    }
    return 0;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) {
    *r0 = *r1 = 0.0;
    return 1;
  }
  *r0 = q / a;
  *r1 = c / q;
  if (*r0 > *r1) std::swap(*r0, *r1);
  return 2;
}

// Maps an angle onto [t0, t1] if it lies there up to slack; returns false otherwise.
bool angle_in_arc(double t, double t0, double t1, double slack, double* out) {
  double u = t0 + wrap_2pi(t - t0);
  if (u > t1 + slack) {
    if (u - kTwoPi >= t0 - slack) u -= kTwoPi;
    else return false;
  }
  *out = std::clamp(u, t0, t1);
  return true;
}

}  // namespace

BoundaryPiece BoundaryPiece::circle_arc(Vec2 center, double radius, double from, double to) {
  BoundaryPiece p;
  p.kind = PieceKind::CircleArc;
  p.center = center;
  p.rx = p.ry = radius;
  p.t0 = from;
  p.t1 = to;
  return p;
}

BoundaryPiece BoundaryPiece::ellipse_arc(Vec2 center, double semi_x, double semi_y,
                                         double from, double to) {
  BoundaryPiece p;
  p.kind = PieceKind::EllipseArc;
  p.center = center;
  p.rx = semi_x;
  p.ry = semi_y;
  p.t0 = from;
  p.t1 = to;
  return p;
}

BoundaryPiece BoundaryPiece::segment(Vec2 from, Vec2 to) {
  BoundaryPiece p;
  p.kind = PieceKind::Segment;
  p.a = from;
  p.b = to;
  p.t0 = 0.0;
  p.t1 = 1.0;
  return p;
}

Vec2 BoundaryPiece::eval(double t) const {
  if (kind == PieceKind::Segment) return a + (b - a) * t;
  return {center.x + rx * std::cos(t), center.y + ry * std::sin(t)};
}

Vec2 BoundaryPiece::d1(double t) const {
  if (kind == PieceKind::Segment) return b - a;
  return {-rx * std::sin(t), ry * std::cos(t)};
}

Vec2 BoundaryPiece::d2(double t) const {
  if (kind == PieceKind::Segment) return {0.0, 0.0};
  return {-rx * std::cos(t), -ry * std::sin(t)};
}

LineRepr::LineRepr(double angle_, Vec2 anchor_) : angle(wrap_pi(angle_)), anchor(anchor_) {}

LineRepr LineRepr::through(Vec2 a, Vec2 b) { return LineRepr(angle_of(b - a), a); }

Vec2 reflect_point(Vec2 a, const LineRepr& line) {
  const Vec2 m = line.m();
  return a - m * (2.0 * dot(a - line.anchor, m));
}

BoundaryCurve BoundaryCurve::build(std::vector<BoundaryPiece> pieces, const Tolerances& tol) {
  if (pieces.empty()) throw Error(Errc::InvalidInput, "empty piece list");
  BoundaryCurve c;
  c.tol_ = tol;
  for (const auto& p : pieces) {
    if (p.kind == PieceKind::Segment) {
      if (!(norm(p.b - p.a) > 0.0)) throw Error(Errc::DegeneratePiece, "zero-length segment");
    } else {
      if (!(p.rx > 0.0 && p.ry > 0.0)) throw Error(Errc::DegeneratePiece, "nonpositive radius");
      if (!(p.t1 > p.t0)) throw Error(Errc::DegeneratePiece, "arc must run counterclockwise");
      if (p.t1 - p.t0 > kTwoPi + 1e-12) throw Error(Errc::DegeneratePiece, "arc exceeds a full turn");
    }
  }
  c.pieces_ = std::move(pieces);
  const int n = static_cast<int>(c.pieces_.size());

  // Diameter from a coarse sampling.
  std::vector<Vec2> samples;
  for (const auto& p : c.pieces_)
    for (int i = 0; i <= 64; ++i)
      samples.push_back(p.eval(p.t_begin() + (p.t_end() - p.t_begin()) * i / 64.0));
  double diam = 0.0;
  for (size_t i = 0; i < samples.size(); ++i)
    for (size_t j = i + 1; j < samples.size(); ++j) diam = std::max(diam, dist(samples[i], samples[j]));
  if (!(diam > 0.0)) throw Error(Errc::DegeneratePiece, "curve has zero extent");
  c.diameter_ = diam;

  for (int k = 0; k < n; ++k) {
    const auto& p = c.pieces_[k];
    const auto& q = c.pieces_[(k + 1) % n];
    const double gap = dist(p.eval(p.t_end()), q.eval(q.t_begin()));
    if (gap > c.tol_close())
      throw Error(Errc::NotClosed, "gap " + std::to_string(gap) + " after piece " + std::to_string(k));
  }

  c.tables_.resize(n);
  c.cum_.assign(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    const auto& p = c.pieces_[k];
    double len = 0.0;
    if (p.kind == PieceKind::Segment) {
      len = norm(p.b - p.a);
    } else if (p.kind == PieceKind::CircleArc) {
      len = p.rx * (p.t1 - p.t0);
    } else {
      auto& tab = c.tables_[k];
      const int knots = std::max(16, static_cast<int>(std::ceil(64.0 * (p.t1 - p.t0) / (kPi / 2))));
      tab.t.resize(knots + 1);
      tab.s.resize(knots + 1);
      tab.t[0] = p.t0;
      tab.s[0] = 0.0;
      auto speed = [&p](double t) { return p.speed(t); };
      const double rough = std::max(p.rx, p.ry) * (p.t1 - p.t0);
      for (int i = 1; i <= knots; ++i) {
        tab.t[i] = p.t0 + (p.t1 - p.t0) * i / knots;
        tab.s[i] = tab.s[i - 1] +
                   adaptive_simpson(speed, tab.t[i - 1], tab.t[i], 1e-13 * rough / knots);
      }
      len = tab.s[knots];
    }
    c.cum_[k + 1] = c.cum_[k] + len;
  }
  c.total_ = c.cum_[n];

  // Convexity: successive tangents along a uniform sampling, plus joints.
  const int N = 4096;
  Vec2 prev = c.tangent_at(0.0);
  const Vec2 first = prev;
  for (int i = 1; i <= N; ++i) {
    const Vec2 t = (i == N) ? first : c.tangent_at(c.total_ * i / N);
    if (cross(prev, t) < -c.tol_.convex || (dot(prev, t) < 0.0 && cross(prev, t) <= 0.0))
      throw Error(Errc::NotConvex, "negative turning near s=" + std::to_string(c.total_ * i / N));
    prev = t;
  }
  double turning = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto& p = c.pieces_[k];
    const auto& q = c.pieces_[(k + 1) % n];
    const Vec2 te = normalized(p.d1(p.t_end()));
    const Vec2 ts = normalized(q.d1(q.t_begin()));
    const double corner = std::atan2(cross(te, ts), dot(te, ts));
    if (corner < -1e-9) throw Error(Errc::NotConvex, "reflex joint after piece " + std::to_string(k));
    turning += piece_turning(p) + std::max(0.0, corner);
  }
  if (std::abs(turning - kTwoPi) > 1e-6)
    throw Error(Errc::NotConvex, "total turning " + std::to_string(turning) + " differs from 2pi");

  c.build_polar();
  return c;
}

double BoundaryCurve::wrap(double s) const {
  double r = std::fmod(s, total_);
  if (r < 0) r += total_;
  if (r >= total_) r -= total_;
  return r;
}

double BoundaryCurve::piece_length_to(int k, double t) const {
  const auto& p = pieces_[k];
  switch (p.kind) {
    case PieceKind::Segment: return norm(p.b - p.a) * t;
    case PieceKind::CircleArc: return p.rx * (t - p.t0);
    case PieceKind::EllipseArc: {
      const auto& tab = tables_[k];
      auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
      int i = static_cast<int>(it - tab.t.begin()) - 1;
      i = std::clamp(i, 0, static_cast<int>(tab.t.size()) - 2);
      return tab.s[i] + gauss8([&p](double u) { return p.speed(u); }, tab.t[i], t);
    }
  }
  return 0.0;
}

double BoundaryCurve::piece_t_of(int k, double ls) const {
  const auto& p = pieces_[k];
  const double len = cum_[k + 1] - cum_[k];
  ls = std::clamp(ls, 0.0, len);
  switch (p.kind) {
    case PieceKind::Segment: return ls / len;
    case PieceKind::CircleArc: return p.t0 + ls / p.rx;
    case PieceKind::EllipseArc: {
      const auto& tab = tables_[k];
      auto it = std::upper_bound(tab.s.begin(), tab.s.end(), ls);
      int i = static_cast<int>(it - tab.s.begin()) - 1;
      i = std::clamp(i, 0, static_cast<int>(tab.s.size()) - 2);
      double lo = tab.t[i], hi = tab.t[i + 1];
      double t = lo + (ls - tab.s[i]) / p.speed(lo);
      for (int it2 = 0; it2 < 30; ++it2) {
        if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
        const double f = tab.s[i] + gauss8([&p](double u) { return p.speed(u); }, tab.t[i], t) - ls;
        if (f > 0) hi = t; else lo = t;
        const double step = f / p.speed(t);
        t -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
      }
      return std::clamp(t, tab.t[i], tab.t[i + 1]);
    }
  }
  return 0.0;
}

int BoundaryCurve::piece_at(double s, double* t) const {
  s = wrap(s);
  auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  int k = static_cast<int>(it - cum_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(pieces_.size()) - 1);
  if (t) *t = piece_t_of(k, s - cum_[k]);
  return k;
}

double BoundaryCurve::s_of(int piece, double t) const {
  return wrap(cum_[piece] + piece_length_to(piece, t));
}

Vec2 BoundaryCurve::point_at(double s) const {
  double t;
  const int k = piece_at(s, &t);
  return pieces_[k].eval(t);
}

void BoundaryCurve::frame_at(double s, Vec2* point, Vec2* tangent) const {
  double t;
  const int k = piece_at(s, &t);
  *point = pieces_[k].eval(t);
  *tangent = normalized(pieces_[k].d1(t));
}

Vec2 BoundaryCurve::tangent_at(double s) const {
  double t;
  const int k = piece_at(s, &t);
  return normalized(pieces_[k].d1(t));
}

Vec2 BoundaryCurve::normal_at(double s) const { return perp(tangent_at(s)); }

double BoundaryCurve::curvature_at(double s) const {
  double t;
  const int k = piece_at(s, &t);
  const auto& p = pieces_[k];
  const Vec2 v = p.d1(t);
  const double sp = norm(v);
  return cross(v, p.d2(t)) / (sp * sp * sp);
}

JointInfo BoundaryCurve::joint_at(double s) const {
  JointInfo info;
  s = wrap(s);
  const int n = static_cast<int>(pieces_.size());
  double t;
  int k = piece_at(s, &t);
  const auto& p = pieces_[k];
  const Vec2 v = p.d1(t);
  info.normal_after = perp(normalized(v));
  info.curvature_after = cross(v, p.d2(t)) / std::pow(norm(v), 3);
  info.normal_before = info.normal_after;
  info.curvature_before = info.curvature_after;
  int joint = -1;
  if (std::abs(s - cum_[k]) <= tol_root()) joint = k;
  else if (std::abs(cum_[k + 1] - s) <= tol_root()) joint = (k + 1) % n;
  else if (k == 0 && std::abs(total_ - s) <= tol_root()) joint = 0;
  if (joint < 0) return info;
  const auto& before = pieces_[(joint + n - 1) % n];
  const auto& after = pieces_[joint];
  const Vec2 vb = before.d1(before.t_end());
  const Vec2 va = after.d1(after.t_begin());
  info.normal_before = perp(normalized(vb));
  info.normal_after = perp(normalized(va));
  info.curvature_before = cross(vb, before.d2(before.t_end())) / std::pow(norm(vb), 3);
  info.curvature_after = cross(va, after.d2(after.t_begin())) / std::pow(norm(va), 3);
  info.smooth = norm(info.normal_before - info.normal_after) < 1e-9;
  return info;
}

std::vector<double> BoundaryCurve::corner_positions() const {
  std::vector<double> out;
  for (size_t k = 0; k < pieces_.size(); ++k) {
    if (!joint_at(cum_[k]).smooth) out.push_back(cum_[k]);
  }
  return out;
}

NormalMatch BoundaryCurve::find_by_normal_angle(double beta) const {
  const int n = static_cast<int>(pieces_.size());
  const Vec2 n0 = perp(normalized(pieces_[0].d1(pieces_[0].t_begin())));
  const double a0 = angle_of(n0);
  const double target = a0 + wrap_2pi(beta - a0);
  double start = a0;
  for (int k = 0; k < n; ++k) {
    const auto& p = pieces_[k];
    if (k > 0) {
      const auto& q = pieces_[k - 1];
      const Vec2 te = normalized(q.d1(q.t_end()));
      const Vec2 ts = normalized(p.d1(p.t_begin()));
      const double corner = std::max(0.0, std::atan2(cross(te, ts), dot(te, ts)));
      if (target < start + corner - 1e-14) {
        NormalMatch m;
        m.kind = NormalMatchKind::Corner;
        m.s = cum_[k];
        m.point = p.eval(p.t_begin());
        return m;
      }
      start += corner;
    }
    const double turn = piece_turning(p);
    if (p.kind == PieceKind::Segment) {
      if (std::abs(target - start) <= 1e-12) {
        NormalMatch m;
        m.kind = NormalMatchKind::Flat;
        m.s_lo = cum_[k];
        m.s_hi = wrap(cum_[k + 1]);
        m.s = m.s_lo;
        m.point = p.a;
        return m;
      }
    } else if (target <= start + turn) {
      const double off0 = arc_normal_offset(p, p.t0);
      auto unwrapped = [&](double t) { return start + (t - p.t0) + arc_normal_offset(p, t) - off0; };
      double lo = p.t0, hi = p.t1;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (unwrapped(mid) < target) lo = mid; else hi = mid;
      }
      const double t = 0.5 * (lo + hi);
      NormalMatch m;
      m.kind = NormalMatchKind::Unique;
      m.s = s_of(k, t);
      m.point = p.eval(t);
      return m;
    }
    start += turn;
  }
  NormalMatch m;
  m.kind = NormalMatchKind::Corner;
  m.s = 0.0;
  m.point = pieces_[0].eval(pieces_[0].t_begin());
  return m;
}

std::vector<std::pair<double, Vec2>> BoundaryCurve::raw_line_intersections(const LineRepr& line) const {
  std::vector<std::pair<double, Vec2>> hits;
  const Vec2 p = line.p();
  const Vec2 A = line.anchor;
  for (int k = 0; k < static_cast<int>(pieces_.size()); ++k) {
    const auto& pc = pieces_[k];
    if (pc.kind == PieceKind::Segment) {
      const Vec2 e = pc.b - pc.a;
      const double den = cross(e, p);
      if (std::abs(den) <= 1e-14 * norm(e)) {
        if (std::abs(cross(pc.a - A, p)) <= tol_bd())
          throw Error(Errc::TangentLine, "line contains a boundary segment");
        continue;
      }
      const double mu = cross(A - pc.a, p) / den;
      if (mu < -1e-12 || mu > 1.0 + 1e-12) continue;
      const double mc = std::clamp(mu, 0.0, 1.0);
      hits.emplace_back(s_of(k, mc), pc.eval(mc));
    } else {
      const Vec2 w{(A.x - pc.center.x) / pc.rx, (A.y - pc.center.y) / pc.ry};
      const Vec2 q{p.x / pc.rx, p.y / pc.ry};
      double r0, r1;
      const int nr = solve_quadratic(norm2(q), 2.0 * dot(w, q), norm2(w) - 1.0, &r0, &r1);
      for (int i = 0; i < nr; ++i) {
        const double lam = i == 0 ? r0 : r1;
        const Vec2 loc = w + q * lam;
        double t;
        if (!angle_in_arc(std::atan2(loc.y, loc.x), pc.t0, pc.t1, 1e-12, &t)) continue;
        hits.emplace_back(s_of(k, t), pc.eval(t));
      }
    }
  }
  // Deduplicate points shared by adjacent pieces or double roots.
  std::vector<std::pair<double, Vec2>> out;
  const double eps = 10.0 * tol_root();
  for (const auto& h : hits) {
    bool dup = false;
    for (const auto& o : out)
      if (dist(o.second, h.second) <= eps) dup = true;
    if (!dup) out.push_back(h);
  }
  return out;
}

std::pair<double, double> BoundaryCurve::line_intersections(const LineRepr& line) const {
  auto pts = raw_line_intersections(line);
  if (pts.empty()) throw Error(Errc::NoIntersection, "line misses the domain");
  if (pts.size() == 1) throw Error(Errc::TangentLine, "line touches the boundary at one point");
  if (pts.size() > 2) {
    size_t bi = 0, bj = 1;
    double best = -1;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        if (dist(pts[i].second, pts[j].second) > best) {
          best = dist(pts[i].second, pts[j].second);
          bi = i;
          bj = j;
        }
    pts = {pts[bi], pts[bj]};
  }
  const Vec2 d = pts[1].second - pts[0].second;
  if (norm(d) <= tol_root()) throw Error(Errc::TangentLine, "intersection points coincide");
  bool swap = false;
  if (std::abs(d.y) > 1e-14 * norm(d)) swap = d.y < 0;
  else swap = d.x < 0;
  if (swap) std::swap(pts[0], pts[1]);
  return {pts[0].first, pts[1].first};
}

bool BoundaryCurve::ray_hit(int k, Vec2 dir, double* r) const {
  const auto& pc = pieces_[k];
  const Vec2 A = center_;
  if (pc.kind == PieceKind::Segment) {
    const Vec2 e = pc.b - pc.a;
    const double den = cross(e, dir);
    if (den == 0.0) return false;
    const double mu = cross(A - pc.a, dir) / den;
    if (mu < -1e-9 || mu > 1.0 + 1e-9) return false;
    const double lam = cross(A - pc.a, e) / den;
    if (lam <= 0) return false;
    *r = lam;
    return true;
  }
  const Vec2 w{(A.x - pc.center.x) / pc.rx, (A.y - pc.center.y) / pc.ry};
  const Vec2 q{dir.x / pc.rx, dir.y / pc.ry};
  double r0, r1;
  const int nr = solve_quadratic(norm2(q), 2.0 * dot(w, q), norm2(w) - 1.0, &r0, &r1);
  bool found = false;
  for (int i = 0; i < nr; ++i) {
    const double lam = i == 0 ? r0 : r1;
    if (lam <= 0) continue;
    const Vec2 loc = w + q * lam;
    double t;
    if (!angle_in_arc(std::atan2(loc.y, loc.x), pc.t0, pc.t1, 1e-9, &t)) continue;
    if (!found || lam < *r) *r = lam;
    found = true;
  }
  return found;
}

void BoundaryCurve::build_polar() {
  const int n = static_cast<int>(pieces_.size());
  Vec2 c;
  const int M = 1024;
  for (int i = 0; i < M; ++i) c += point_at(total_ * i / M);
  center_ = c / M;

  piece_polar_.assign(n + 1, 0.0);
  double acc = angle_of(pieces_[0].eval(pieces_[0].t_begin()) - center_);
  for (int k = 0; k < n; ++k) {
    piece_polar_[k] = acc;
    const auto& p = pieces_[k];
    double prev = angle_of(p.eval(p.t_begin()) - center_);
    for (int i = 1; i <= 64; ++i) {
      const double a = angle_of(p.eval(p.t_begin() + (p.t_end() - p.t_begin()) * i / 64.0) - center_);
      acc += wrap_signed(a - prev);
      prev = a;
    }
  }
  piece_polar_[n] = piece_polar_[0] + kTwoPi;

  nbins_ = 2048;
  bin_rmin_.assign(nbins_, 0.0);
  bin_rmax_.assign(nbins_, 0.0);
  const int sub = 8;
  const double dth = kTwoPi / nbins_;
  std::vector<double> R(nbins_ * sub + 1);
  for (int i = 0; i <= nbins_ * sub; ++i) {
    const double th = piece_polar_[0] + dth * i / sub;
    const Vec2 dir = unit(th);
    auto it = std::upper_bound(piece_polar_.begin(), piece_polar_.end(), th);
    int k = std::clamp(static_cast<int>(it - piece_polar_.begin()) - 1, 0, n - 1);
    double r = 0.0;
    bool ok = ray_hit(k, dir, &r);
    for (int d = 1; !ok && d <= n; ++d) ok = ray_hit((k + d) % n, dir, &r);
    R[i] = r;
  }
  for (int b = 0; b < nbins_; ++b) {
    double lo = R[b * sub], hi = lo, jump = 0.0;
    for (int j = 1; j <= sub; ++j) {
      lo = std::min(lo, R[b * sub + j]);
      hi = std::max(hi, R[b * sub + j]);
      jump = std::max(jump, std::abs(R[b * sub + j] - R[b * sub + j - 1]));
    }
    bin_rmin_[b] = lo - jump - 1e-12 * diameter_;
    bin_rmax_[b] = hi + jump + 1e-12 * diameter_;
  }
}

double BoundaryCurve::radial_excess(Vec2 a) const {
  const Vec2 d = a - center_;
  const double r = norm(d);
  if (r == 0.0) return bin_rmin_.empty() ? 0.0 : *std::min_element(bin_rmin_.begin(), bin_rmin_.end());
  const Vec2 dir = d / r;
  const int n = static_cast<int>(pieces_.size());
  const double th = piece_polar_[0] + wrap_2pi(std::atan2(d.y, d.x) - piece_polar_[0]);
  auto it = std::upper_bound(piece_polar_.begin(), piece_polar_.end(), th);
  const int k = std::clamp(static_cast<int>(it - piece_polar_.begin()) - 1, 0, n - 1);
  double R = 0.0;
  bool ok = ray_hit(k, dir, &R);
  for (int j = 1; !ok && j <= n; ++j) {
    ok = ray_hit((k + j) % n, dir, &R);
    if (!ok) ok = ray_hit((k + n - j) % n, dir, &R);
  }
  return R - r;
}

bool BoundaryCurve::contains_fast(Vec2 a) const {
  const Vec2 d = a - center_;
  const double r = norm(d);
  const double th = wrap_2pi(std::atan2(d.y, d.x) - piece_polar_[0]);
  int b = static_cast<int>(th * (nbins_ / kTwoPi));
  if (b >= nbins_) b = nbins_ - 1;
  if (r < bin_rmin_[b]) return true;
  if (r > bin_rmax_[b]) return false;
  return radial_excess(a) >= 0.0;
}

Projection BoundaryCurve::project_piece(int k, Vec2 a) const {
  const auto& pc = pieces_[k];
  double t = pc.t_begin();
  if (pc.kind == PieceKind::Segment) {
    const Vec2 e = pc.b - pc.a;
    t = std::clamp(dot(a - pc.a, e) / norm2(e), 0.0, 1.0);
  } else if (pc.kind == PieceKind::CircleArc) {
    const Vec2 d = a - pc.center;
    double u;
    if (norm2(d) > 0.0 && angle_in_arc(angle_of(d), pc.t0, pc.t1, 0.0, &u)) {
      t = u;
    } else {
      t = dist(pc.eval(pc.t0), a) <= dist(pc.eval(pc.t1), a) ? pc.t0 : pc.t1;
    }
  } else {
    const int K = 24;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= K; ++i) {
      const double u = pc.t0 + (pc.t1 - pc.t0) * i / K;
      const double d2 = norm2(pc.eval(u) - a);
      if (d2 < best) {
        best = d2;
        t = u;
      }
    }
    double u = t;
    for (int it = 0; it < 40; ++it) {
      const Vec2 e = pc.eval(u) - a;
      const Vec2 v = pc.d1(u);
      const double g = dot(e, v);
      const double h = norm2(v) + dot(e, pc.d2(u));
      if (h <= 0) break;
      const double step = g / h;
      u = std::clamp(u - step, pc.t0, pc.t1);
      if (std::abs(step) < 1e-15) break;
    }
    if (norm2(pc.eval(u) - a) < best) t = u;
  }
  Projection pr;
  pr.point = pc.eval(t);
  pr.distance = dist(pr.point, a);
  pr.s = s_of(k, t);
  pr.normal = perp(normalized(pc.d1(t)));
  return pr;
}

Projection BoundaryCurve::project(Vec2 a) const {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(pieces_.size()); ++k) {
    Projection p = project_piece(k, a);
    if (p.distance < best.distance) best = p;
  }
  if (best.distance > 0.0 && radial_excess(a) < 0.0) best.normal = (best.point - a) / best.distance;
  return best;
}

double BoundaryCurve::signed_distance(Vec2 a) const {
  const double d = project(a).distance;
  return radial_excess(a) >= 0.0 ? d : -d;
}

Inside BoundaryCurve::is_inside(Vec2 a) const {
  const double re = radial_excess(a);
  const double tb = tol_bd();
  if (std::abs(re) <= tb) return Inside::Boundary;
  if (std::abs(re) < 1e-3 * diameter_ && project(a).distance <= tb) return Inside::Boundary;
  return re > 0 ? Inside::Inside : Inside::Outside;
}

double BoundaryCurve::area() const {
  double acc = 0.0;
  for (const auto& p : pieces_) {
    const int K = 64;
    const double a = p.t_begin(), b = p.t_end();
    for (int i = 0; i < K; ++i) {
      acc += gauss8(
          [&p](double t) {
            const Vec2 x = p.eval(t);
            return cross(x, p.d1(t));
          },
          a + (b - a) * i / K, a + (b - a) * (i + 1) / K);
    }
  }
  return 0.5 * acc;
}

double sampled_hausdorff(const BoundaryCurve& a, const BoundaryCurve& b, int n) {
  double h = 0.0;
  for (int i = 0; i < n; ++i) {
    h = std::max(h, b.project(a.point_at(a.total_length() * (i + 0.5) / n)).distance);
    h = std::max(h, a.project(b.point_at(b.total_length() * (i + 0.5) / n)).distance);
  }
  return h;
}

}  // namespace mirror
