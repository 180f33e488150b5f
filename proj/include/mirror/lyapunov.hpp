// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mirror/special_points.hpp"

namespace mirror {

// The four chord families whose boundary arcs are ODE solutions.
enum class OdeFamily {
  UpperPlain,   // A(Q4, Q6): arc from u4 to u5
  LowerPlain,   // A(P1, P3): arc from u2 to u3
  UpperPrimed,  // A(Q'4, Q'6): arc from u4' to u5'
  LowerPrimed,  // A(P'1, P'3): arc from u2' to u3'
};

const char* to_string(OdeFamily f);

// Rigid motion that carries a family onto the upper plain family of the
// image domain.  Arclength is preserved (rotation) or reversed (mirrors).
enum class Frame { Identity, Rot180, MirrorX, MirrorY };

Frame frame_of(OdeFamily f);
Vec2 frame_point(Frame f, Vec2 x);
std::vector<BoundaryPiece> frame_pieces(const std::vector<BoundaryPiece>& pieces, Frame f);
SpecialPoints frame_special(const SpecialPoints& sp, Frame f);
UPoint to_frame(const SpecialPoints& sp, Frame f, UPoint u);
UPoint from_frame(const SpecialPoints& sp, Frame f, UPoint uf);

struct OdeRhs {
  double du1 = 0.0;
  double du2 = 0.0;
  Vec2 Q_left;   // in the original domain
  Vec2 Q_right;
  bool limit = false;  // crossing collapsed onto the chord end
  double event = 0.0;  // angular distance to normality at the upper end
};

// Right-hand side for a family, evaluated in original coordinates.
class FamilyOde {
 public:
  FamilyOde(const BoundaryCurve& curve, const SpecialPoints& sp, OdeFamily family);

  OdeFamily family() const { return family_; }
  const BoundaryCurve& frame_curve() const { return fcurve_; }
  const SpecialPoints& frame_sp() const { return fsp_; }

  OdeRhs rhs(UPoint u) const;
  // Same quantities in frame coordinates.
  OdeRhs rhs_frame(UPoint uf) const;
  double event_frame(UPoint uf) const;
  UPoint start_frame() const;

 private:
  const BoundaryCurve* curve_;
  const SpecialPoints* sp_;
  OdeFamily family_;
  Frame frame_;
  BoundaryCurve fcurve_;
  SpecialPoints fsp_;
  Vec2 q_tilde_;
  double s_tilde_ = 0.0;
};

OdeRhs ode_rhs(const BoundaryCurve& curve, const SpecialPoints& sp, UPoint u, OdeFamily family);

struct OdeOptions {
  double tol = 1e-9;
  double e_stop = 1e-7;
  int dense_per_step = 4;
};

struct OdeArc {
  OdeFamily family = OdeFamily::UpperPlain;
  // Points in original coordinates, from the alpha-chord corner to the
  // normal end (u4 -> u5 or its analog).
  std::vector<UPoint> points;
  UPoint start;
  UPoint end;
  double a_star = 0.0;
  int steps = 0;
  double min_du1 = 0.0;  // frame components, over accepted steps
  double min_du2 = 0.0;
  bool positive = false;
  double normality = 0.0;  // |p.n(Q) + 1| at the end, frame upper end
  bool ordering_ok = false;
  // Largest chord-angle deficit below alpha along the arc (frame).
  double min_angle_excess = 0.0;
};

OdeArc integrate_ode_arc(const BoundaryCurve& curve, const SpecialPoints& sp, OdeFamily family,
                         const OdeOptions& opt = {});

std::vector<UPoint> arc_alpha(const BoundaryCurve& curve, const SpecialPoints& sp, bool primed,
                              int samples = 200);

struct LyapunovArc {
  std::string label;
  std::vector<UPoint> points;
};

struct LyapunovSet {
  SpecialPoints sp;  // with indices 2 and 5 filled
  std::vector<LyapunovArc> arcs;
  std::vector<OdeArc> ode;  // UpperPlain, LowerPlain, UpperPrimed, LowerPrimed
  std::vector<UPoint> loop;  // closed polygon, last point equals the first
  double closure_gap = 0.0;

  // Closed set: points within tol of the boundary count as inside.
  bool contains(UPoint u, double tol = 1e-9) const;
  UPoint corner(const std::string& name) const;
};

struct AssembleOptions {
  int arc_samples = 200;
  OdeOptions ode;
};

LyapunovSet assemble(const BoundaryCurve& curve, const SpecialPoints& sp,
                     const AssembleOptions& opt = {});

// Chord of the perpendicular bisector of x and y, P lower and Q upper.
bool bisector_chord(const BoundaryCurve& curve, Vec2 x, Vec2 y, Chord* out);
bool pair_in_T(const BoundaryCurve& curve, const LyapunovSet& lset, Vec2 x, Vec2 y);

// Winding number of the loop around u (reference membership).
int winding_number(const std::vector<UPoint>& loop, UPoint u);
// True when two non-adjacent loop segments cross.
bool loop_self_intersects(const std::vector<UPoint>& loop);

nlohmann::json lyapunov_json(const LyapunovSet& lset);

}  // namespace mirror
