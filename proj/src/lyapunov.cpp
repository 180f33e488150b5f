// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/lyapunov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace mirror {

using nlohmann::json;

const char* to_string(OdeFamily f) {
  switch (f) {
    case OdeFamily::UpperPlain: return "upper";
    case OdeFamily::LowerPlain: return "lower";
    case OdeFamily::UpperPrimed: return "upper'";
    case OdeFamily::LowerPrimed: return "lower'";
  }
  return "?";
}

Frame frame_of(OdeFamily f) {
  switch (f) {
    case OdeFamily::UpperPlain: return Frame::Identity;
    case OdeFamily::LowerPlain: return Frame::Rot180;
    case OdeFamily::UpperPrimed: return Frame::MirrorX;
    case OdeFamily::LowerPrimed: return Frame::MirrorY;
  }
  return Frame::Identity;
}

Vec2 frame_point(Frame f, Vec2 x) {
  switch (f) {
    case Frame::Identity: return x;
    case Frame::Rot180: return {-x.x, -x.y};
    case Frame::MirrorX: return {-x.x, x.y};
    case Frame::MirrorY: return {x.x, -x.y};
  }
  return x;
}

std::vector<BoundaryPiece> frame_pieces(const std::vector<BoundaryPiece>& pieces, Frame f) {
  if (f == Frame::Identity) return pieces;
  std::vector<BoundaryPiece> out;
  out.reserve(pieces.size());
  auto map_arc = [&](const BoundaryPiece& p, double from, double to) {
    BoundaryPiece q = p;
    q.center = frame_point(f, p.center);
    q.t0 = from;
    q.t1 = to;
    return q;
  };
  for (const auto& p : pieces) {
    if (p.kind == PieceKind::Segment) {
      const Vec2 a = frame_point(f, p.a), b = frame_point(f, p.b);
      out.push_back(f == Frame::Rot180 ? BoundaryPiece::segment(a, b) : BoundaryPiece::segment(b, a));
      continue;
    }
    switch (f) {
      case Frame::Rot180: out.push_back(map_arc(p, p.t0 + kPi, p.t1 + kPi)); break;
      case Frame::MirrorX: out.push_back(map_arc(p, kPi - p.t1, kPi - p.t0)); break;
      case Frame::MirrorY: out.push_back(map_arc(p, -p.t1, -p.t0)); break;
      default: break;
    }
  }
  // Mirrors reverse the orientation; reversing the list keeps s = 0 fixed.
  if (f != Frame::Rot180) std::reverse(out.begin(), out.end());
  return out;
}

SpecialPoints frame_special(const SpecialPoints& sp, Frame f) {
  if (f == Frame::Identity) return sp;
  SpecialPoints o = sp;
  const double L = sp.total;
  auto map = [&](const MarkedPoint& m) {
    MarkedPoint r = m;
    if (!m.known) return r;
    r.x = frame_point(f, m.x);
    if (f != Frame::Rot180) {
      r.s = std::fmod(L - m.s, L);
      if (r.s < 0) r.s += L;
    }
    return r;
  };
  for (int k = 1; k <= 6; ++k) {
    switch (f) {
      case Frame::Rot180:
        o.P[k] = map(sp.Q[7 - k]);
        o.Q[k] = map(sp.P[7 - k]);
        o.Pp[k] = map(sp.Qp[7 - k]);
        o.Qp[k] = map(sp.Pp[7 - k]);
        break;
      case Frame::MirrorX:
        o.P[k] = map(sp.Pp[k]);
        o.Q[k] = map(sp.Qp[k]);
        o.Pp[k] = map(sp.P[k]);
        o.Qp[k] = map(sp.Q[k]);
        break;
      case Frame::MirrorY:
        o.P[k] = map(sp.Qp[7 - k]);
        o.Q[k] = map(sp.Pp[7 - k]);
        o.Pp[k] = map(sp.Q[7 - k]);
        o.Qp[k] = map(sp.P[7 - k]);
        break;
      default: break;
    }
  }
  if (f == Frame::Rot180 || f == Frame::MirrorY) std::swap(o.ubar1, o.ubar2);
  return o;
}

UPoint to_frame(const SpecialPoints& sp, Frame f, UPoint u) {
  switch (f) {
    case Frame::Identity: return u;
    case Frame::Rot180: return {sp.ubar2 - u.u2, sp.ubar1 - u.u1};
    case Frame::MirrorX: return {sp.ubar1 - u.u1, sp.ubar2 - u.u2};
    case Frame::MirrorY: return {u.u2, u.u1};
  }
  return u;
}

UPoint from_frame(const SpecialPoints& sp, Frame f, UPoint uf) {
  switch (f) {
    case Frame::Identity: return uf;
    case Frame::Rot180: return {sp.ubar1 - uf.u2, sp.ubar2 - uf.u1};
    case Frame::MirrorX: return {sp.ubar1 - uf.u1, sp.ubar2 - uf.u2};
    case Frame::MirrorY: return {uf.u2, uf.u1};
  }
  return uf;
}

namespace {

UPoint map_velocity(Frame f, double d1, double d2) {
  switch (f) {
    case Frame::Identity: return {d1, d2};
    case Frame::Rot180: return {-d2, -d1};
    case Frame::MirrorX: return {-d1, -d2};
    case Frame::MirrorY: return {d2, d1};
  }
  return {d1, d2};
}

// Signed angle from the chord direction to the outward normal at Q.
double normality_gap(const BoundaryCurve& curve, const Chord& c) {
  return wrap_signed(angle_of(-curve.normal_at(c.s_Q)) - angle_of(c.p));
}

}  // namespace

FamilyOde::FamilyOde(const BoundaryCurve& curve, const SpecialPoints& sp, OdeFamily family)
    : curve_(&curve), sp_(&sp), family_(family), frame_(frame_of(family)) {
  if (!sp.hinge_free) throw Error(Errc::EmptyHingeFreeArc, "special points lack P3 and P4");
  fcurve_ = frame_ == Frame::Identity
                ? curve
                : BoundaryCurve::build(frame_pieces(curve.pieces(), frame_), curve.tolerances());
  fsp_ = frame_special(sp, frame_);
  const NormalMatch nm = fcurve_.find_by_normal_angle(wrap_2pi(sp.alpha + kPi / 2));
  q_tilde_ = nm.point;
  s_tilde_ = nm.s;
}

UPoint FamilyOde::start_frame() const {
  return {fsp_.u1_of(fsp_.P[4].s), fsp_.u2_of(fsp_.Q[4].s)};
}

double FamilyOde::event_frame(UPoint uf) const {
  return normality_gap(fcurve_, phi_inv(fcurve_, fsp_, uf));
}

OdeRhs FamilyOde::rhs_frame(UPoint uf) const {
  const BoundaryCurve& c = fcurve_;
  const Chord chord = phi_inv(c, fsp_, uf);
  OdeRhs r;
  r.event = normality_gap(c, chord);
  double sL = chord.s_Q, sR = chord.s_Q;
  Vec2 QL = chord.Q, QR = chord.Q;
  const bool at_corner = std::abs(chord.angle - fsp_.alpha) < 1e-9;
  if (r.event <= 0.0) {
    r.limit = true;
  } else {
    ExtremalOptions eo;
    eo.allow_limit = true;
    eo.tol_angle = 0.0;
    bool ok = false;
    try {
      const ExtremalPoints ex = extremal_points(c, chord, ExtremalFamily::UpperHinges, eo);
      if (!(ex.limit && at_corner)) {
        ok = true;
        r.limit = ex.limit;
        sL = ex.s_left;
        sR = ex.s_right;
        QL = ex.A_left;
        QR = ex.A_right;
      }
    } catch (const Error& e) {
      if (!at_corner && r.event > 1e-3) throw;
      if (!at_corner) {
        ok = true;
        r.limit = true;
      }
    }
    if (!ok) {
      // The right extremal point tends to the point whose normal is i e^{i alpha}.
      sR = s_tilde_;
      QR = q_tilde_;
      const Projection pr = c.project(reflect_point(QR, chord.line()));
      sL = pr.s;
      QL = pr.point;
    }
  }
  const Vec2 nL = c.normal_at(sL), nR = c.normal_at(sR);
  const double pnP = dot(chord.p, c.normal_at(chord.s_P));
  const double pnQ = dot(chord.p, c.normal_at(chord.s_Q));
  if (std::abs(pnP) < 1e-14 || std::abs(pnQ) < 1e-14)
    throw Error(Errc::DegenerateChord, "chord tangent to the boundary");
  r.du1 = (-dot(QL - chord.P, nL) - dot(QR - chord.P, nR)) / pnP;
  r.du2 = (dot(QL - chord.Q, nL) + dot(QR - chord.Q, nR)) / pnQ;
  r.Q_left = QL;
  r.Q_right = QR;
  return r;
}

OdeRhs FamilyOde::rhs(UPoint u) const {
  OdeRhs r = rhs_frame(to_frame(*sp_, frame_, u));
  const UPoint d = map_velocity(frame_, r.du1, r.du2);
  r.du1 = d.u1;
  r.du2 = d.u2;
  r.Q_left = frame_point(frame_, r.Q_left);
  r.Q_right = frame_point(frame_, r.Q_right);
  return r;
}

OdeRhs ode_rhs(const BoundaryCurve& curve, const SpecialPoints& sp, UPoint u, OdeFamily family) {
  return FamilyOde(curve, sp, family).rhs(u);
}

OdeArc integrate_ode_arc(const BoundaryCurve& curve, const SpecialPoints& sp, OdeFamily family,
                         const OdeOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const FamilyOde ode(curve, sp, family);
  const SpecialPoints& fsp = ode.frame_sp();
  const BoundaryCurve& fc = ode.frame_curve();
  const Frame frame = frame_of(family);

  OdeArc arc;
  arc.family = family;
  arc.min_du1 = arc.min_du2 = std::numeric_limits<double>::infinity();
  arc.min_angle_excess = std::numeric_limits<double>::infinity();

  auto system = [&](const State& x, State& dx, double) {
    const OdeRhs r = ode.rhs_frame({x[0], x[1]});
    dx[0] = r.du1;
    dx[1] = r.du2;
  };
  auto event = [&](const State& x) { return ode.event_frame({x[0], x[1]}) - opt.e_stop; };

  const UPoint u0 = ode.start_frame();
  State x{u0.u1, u0.u2};
  if (event(x) <= 0.0) throw Error(Errc::FamilyViolation, "corner chord already normal at its upper end");
  auto stepper = odeint::make_dense_output(opt.tol, opt.tol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, 0.0, 1e-4);
  std::vector<UPoint> frame_pts{u0};
  const double a_max = 10.0 * curve.diameter();
  double a_end = 0.0;
  State x_end = x;
  bool done = false;
  while (!done) {
    const auto iv = stepper.do_step(system);
    ++arc.steps;
    const State xe = stepper.current_state();
    const double ee = event(xe);
    double t_hi = iv.second;
    if (ee <= 0.0) {
      double lo = iv.first, hi = iv.second;
      State tmp;
      for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, tmp);
        if (event(tmp) > 0.0) lo = mid;
        else hi = mid;
      }
      t_hi = lo;
      done = true;
    }
    for (int j = 1; j <= opt.dense_per_step; ++j) {
      const double t = iv.first + (t_hi - iv.first) * j / opt.dense_per_step;
      State tmp;
      stepper.calc_state(t, tmp);
      frame_pts.push_back({tmp[0], tmp[1]});
    }
    State acc;
    stepper.calc_state(t_hi, acc);
    const OdeRhs r = ode.rhs_frame({acc[0], acc[1]});
    arc.min_du1 = std::min(arc.min_du1, r.du1);
    arc.min_du2 = std::min(arc.min_du2, r.du2);
    const Chord ch = phi_inv(fc, fsp, {acc[0], acc[1]});
    arc.min_angle_excess = std::min(arc.min_angle_excess, wrap_signed(ch.angle - fsp.alpha));
    a_end = t_hi;
    x_end = acc;
    if (!done && iv.second > a_max) throw Error(Errc::NoTermination, "ODE parameter exceeds bound");
  }
  arc.a_star = a_end;
  arc.positive = arc.min_du1 > 0.0 && arc.min_du2 > 0.0;
  const Chord last = phi_inv(fc, fsp, {x_end[0], x_end[1]});
  arc.normality = std::abs(dot(last.p, fc.normal_at(last.s_Q)) + 1.0);
  // Q4 < Q5 < Q6 along the upper boundary of the frame.
  const double u2_6 = fsp.u2_of(fsp.Q[6].s);
  arc.ordering_ok = x_end[1] > u0.u2 && x_end[1] < u2_6 - fc.tol_root();
  if (!arc.ordering_ok) throw Error(Errc::OrderingViolated, "terminal chord passes Q6");
  for (const UPoint& p : frame_pts) arc.points.push_back(from_frame(sp, frame, p));
  arc.start = arc.points.front();
  arc.end = arc.points.back();
  return arc;
}

std::vector<UPoint> arc_alpha(const BoundaryCurve& curve, const SpecialPoints& sp, bool primed,
                              int samples) {
  const auto& P = primed ? sp.Pp : sp.P;
  const double angle = primed ? kPi - sp.alpha : sp.alpha;
  double s3 = P[3].s, s4 = P[4].s;
  // The primed arc runs clockwise from P'3 to P'4 along the lower boundary.
  const double span = primed ? -curve.wrap(s3 - s4) : curve.wrap(s4 - s3);
  std::vector<UPoint> out;
  for (int j = 0; j < samples; ++j) {
    const double s = s3 + span * j / (samples - 1);
    const Chord c = chord_through(curve, s, angle);
    out.push_back(phi(sp, c));
  }
  return out;
}

namespace {

bool segments_cross(UPoint a, UPoint b, UPoint c, UPoint d) {
  auto orient = [](UPoint p, UPoint q, UPoint r) {
    return (q.u1 - p.u1) * (r.u2 - p.u2) - (q.u2 - p.u2) * (r.u1 - p.u1);
  };
  const double d1 = orient(c, d, a), d2 = orient(c, d, b);
  const double d3 = orient(a, b, c), d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double seg_dist(UPoint p, UPoint a, UPoint b) {
  const double vx = b.u1 - a.u1, vy = b.u2 - a.u2;
  const double L2 = vx * vx + vy * vy;
  double t = L2 > 0 ? ((p.u1 - a.u1) * vx + (p.u2 - a.u2) * vy) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.u1 - a.u1 - t * vx, p.u2 - a.u2 - t * vy);
}

void append(std::vector<UPoint>& loop, const std::vector<UPoint>& pts, bool skip_first) {
  for (size_t i = skip_first ? 1 : 0; i < pts.size(); ++i) loop.push_back(pts[i]);
}

MarkedPoint mark(const BoundaryCurve& curve, double s) {
  MarkedPoint m;
  m.known = true;
  m.s = curve.wrap(s);
  m.x = curve.point_at(m.s);
  return m;
}

}  // namespace

bool loop_self_intersects(const std::vector<UPoint>& loop) {
  const int n = static_cast<int>(loop.size()) - 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(loop[i], loop[i + 1], loop[j], loop[j + 1])) return true;
    }
  return false;
}

int winding_number(const std::vector<UPoint>& loop, UPoint u) {
  int w = 0;
  for (size_t i = 0; i + 1 < loop.size(); ++i) {
    const UPoint a = loop[i], b = loop[i + 1];
    const double c = (b.u1 - a.u1) * (u.u2 - a.u2) - (u.u1 - a.u1) * (b.u2 - a.u2);
    if (a.u2 <= u.u2) {
      if (b.u2 > u.u2 && c > 0) ++w;
    } else if (b.u2 <= u.u2 && c < 0) {
      --w;
    }
  }
  return w;
}

bool LyapunovSet::contains(UPoint u, double tol) const {
  bool inside = false;
  for (size_t i = 0; i + 1 < loop.size(); ++i) {
    const UPoint a = loop[i], b = loop[i + 1];
    if (seg_dist(u, a, b) <= tol) return true;
    if ((a.u2 > u.u2) != (b.u2 > u.u2)) {
      const double x = a.u1 + (u.u2 - a.u2) * (b.u1 - a.u1) / (b.u2 - a.u2);
      if (u.u1 < x) inside = !inside;
    }
  }
  return inside;
}

UPoint LyapunovSet::corner(const std::string& name) const {
  // Names are "u<k>" or "u<k>'".
  const bool primed = name.size() == 3 && name[2] == '\'';
  const int k = name.size() >= 2 ? name[1] - '0' : 0;
  const auto& P = primed ? sp.Pp : sp.P;
  const auto& Q = primed ? sp.Qp : sp.Q;
  if (name.empty() || name[0] != 'u' || k < 1 || k > 6 || !P[k].known || !Q[k].known)
    throw Error(Errc::InvalidInput, "unknown corner " + name);
  return {sp.u1_of(P[k].s), sp.u2_of(Q[k].s)};
}

LyapunovSet assemble(const BoundaryCurve& curve, const SpecialPoints& sp_in,
                     const AssembleOptions& opt) {
  LyapunovSet ls;
  ls.sp = sp_in;
  SpecialPoints& sp = ls.sp;

  const OdeArc up = integrate_ode_arc(curve, sp_in, OdeFamily::UpperPlain, opt.ode);
  const OdeArc lo = integrate_ode_arc(curve, sp_in, OdeFamily::LowerPlain, opt.ode);
  const OdeArc upp = integrate_ode_arc(curve, sp_in, OdeFamily::UpperPrimed, opt.ode);
  const OdeArc lop = integrate_ode_arc(curve, sp_in, OdeFamily::LowerPrimed, opt.ode);
  ls.ode = {up, lo, upp, lop};

  auto fill = [&](std::array<MarkedPoint, 7>& P, std::array<MarkedPoint, 7>& Q, int k, UPoint u) {
    P[k] = mark(curve, sp.s_of_u1(u.u1));
    Q[k] = mark(curve, sp.s_of_u2(u.u2));
  };
  fill(sp.P, sp.Q, 5, up.end);
  fill(sp.P, sp.Q, 2, lo.end);
  fill(sp.Pp, sp.Qp, 5, upp.end);
  fill(sp.Pp, sp.Qp, 2, lop.end);

  const UPoint u2 = lo.end, u5 = up.end, u2p = lop.end, u5p = upp.end;
  if (!(u5.u1 < u2p.u1) || !(u2p.u2 < u5.u2))
    throw Error(Errc::ConnectorImpossible, "P5 < P'2 and Q'2 < Q5 must hold");
  if (!(u2.u1 < u5p.u1) || !(u5p.u2 < u2.u2))
    throw Error(Errc::ConnectorImpossible, "P2 < P'5 and Q'5 < Q2 must hold");

  std::vector<UPoint> a23(lo.points.rbegin(), lo.points.rend());
  const std::vector<UPoint> a34 = arc_alpha(curve, sp_in, false, opt.arc_samples);
  const std::vector<UPoint> a45 = up.points;
  const std::vector<UPoint> c5 = {u5, {u2p.u1, u5.u2}, u2p};
  std::vector<UPoint> a23p(lop.points.rbegin(), lop.points.rend());
  const std::vector<UPoint> a34p = arc_alpha(curve, sp_in, true, opt.arc_samples);
  const std::vector<UPoint> a45p = upp.points;
  const std::vector<UPoint> c5p = {u5p, {u2.u1, u5p.u2}, u2};
  ls.arcs = {{"u2-u3", a23},   {"u3-u4", a34},   {"u4-u5", a45},   {"u5-u2'", c5},
             {"u2'-u3'", a23p}, {"u3'-u4'", a34p}, {"u4'-u5'", a45p}, {"u5'-u2", c5p}};

  double gap = 0.0;
  for (size_t i = 0; i < ls.arcs.size(); ++i) {
    const UPoint e = ls.arcs[i].points.back();
    const UPoint b = ls.arcs[(i + 1) % ls.arcs.size()].points.front();
    gap = std::max(gap, std::hypot(e.u1 - b.u1, e.u2 - b.u2));
  }
  ls.closure_gap = gap;
  for (size_t i = 0; i < ls.arcs.size(); ++i) append(ls.loop, ls.arcs[i].points, i > 0);
  ls.loop.back() = ls.loop.front();
  if (gap > 1e-6 * curve.diameter()) throw Error(Errc::ArcsIntersect, "arcs do not close");
  if (loop_self_intersects(ls.loop)) throw Error(Errc::ArcsIntersect, "boundary loop self-intersects");
  return ls;
}

bool bisector_chord(const BoundaryCurve& curve, Vec2 x, Vec2 y, Chord* out) {
  if (dist(x, y) <= 1e-14 * curve.diameter())
    throw Error(Errc::CoincidentPoints, "x and y coincide");
  const Vec2 mid = (x + y) * 0.5;
  const Vec2 d = normalized(y - x);
  const LineRepr line(angle_of(perp(d)), mid);
  try {
    *out = chord_from_line(curve, line);
  } catch (const Error&) {
    return false;
  }
  return true;
}

bool pair_in_T(const BoundaryCurve& curve, const LyapunovSet& lset, Vec2 x, Vec2 y) {
  if (!(y.x - x.x > 0.0)) {
    if (dist(x, y) <= 1e-14 * curve.diameter())
      throw Error(Errc::CoincidentPoints, "x and y coincide");
    return false;
  }
  Chord c;
  if (!bisector_chord(curve, x, y, &c)) return false;
  UPoint u;
  if (!try_phi(lset.sp, c, &u)) return false;
  return lset.contains(u);
}

json lyapunov_json(const LyapunovSet& ls) {
  auto pts = [](const std::vector<UPoint>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back({p.u1, p.u2});
    return a;
  };
  json arcs = json::array();
  for (const auto& a : ls.arcs) arcs.push_back({{"label", a.label}, {"points", pts(a.points)}});
  json ode = json::array();
  for (const auto& o : ls.ode)
    ode.push_back({{"family", to_string(o.family)},
                   {"a_star", o.a_star},
                   {"steps", o.steps},
                   {"start", {o.start.u1, o.start.u2}},
                   {"end", {o.end.u1, o.end.u2}},
                   {"min_du1", o.min_du1},
                   {"min_du2", o.min_du2},
                   {"normality", o.normality},
                   {"ordering_ok", o.ordering_ok}});
  json corners = json::object();
  const auto& sp = ls.sp;
  for (int k = 2; k <= 5; ++k) {
    const std::string n = std::to_string(k);
    corners["u" + n] = {sp.u1_of(sp.P[k].s), sp.u2_of(sp.Q[k].s)};
    corners["u" + n + "'"] = {sp.u1_of(sp.Pp[k].s), sp.u2_of(sp.Qp[k].s)};
  }
  return {{"kind", "lyapunov"},
          {"ubar1", sp.ubar1},
          {"ubar2", sp.ubar2},
          {"closure_gap", ls.closure_gap},
          {"corners", corners},
          {"ode", ode},
          {"arcs", arcs},
          {"loop", pts(ls.loop)},
          {"special_points", special_points_json(sp)}};
}

}  // namespace mirror
