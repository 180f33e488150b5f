// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mirror/errors.hpp"
#include "mirror/vec2.hpp"

namespace mirror {

enum class PieceKind { CircleArc, EllipseArc, Segment };

// One analytic piece of a counterclockwise boundary.  Arcs are parametrized
// by the angle t in [t0, t1] (point = center + (rx cos t, ry sin t)), segments
// by t in [0, 1].
struct BoundaryPiece {
  PieceKind kind = PieceKind::Segment;
  Vec2 center;
  double rx = 0.0;
  double ry = 0.0;
  double t0 = 0.0;
  double t1 = 1.0;
  Vec2 a;
  Vec2 b;

  static BoundaryPiece circle_arc(Vec2 center, double radius, double from, double to);
  static BoundaryPiece ellipse_arc(Vec2 center, double semi_x, double semi_y, double from,
                                   double to);
  static BoundaryPiece segment(Vec2 from, Vec2 to);

  double t_begin() const { return kind == PieceKind::Segment ? 0.0 : t0; }
  double t_end() const { return kind == PieceKind::Segment ? 1.0 : t1; }
  Vec2 eval(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  double speed(double t) const { return norm(d1(t)); }
};

// A line with angle in [0, pi) through an anchor point.
struct LineRepr {
  double angle = 0.0;
  Vec2 anchor;

  LineRepr() = default;
  LineRepr(double angle_, Vec2 anchor_);
  static LineRepr through(Vec2 a, Vec2 b);
  Vec2 p() const { return unit(angle); }
  // m = -i p; points to the right of the directed line.
  Vec2 m() const { return {std::sin(angle), -std::cos(angle)}; }
};

Vec2 reflect_point(Vec2 a, const LineRepr& line);

enum class Inside { Inside, Boundary, Outside };

struct Tolerances {
  double root = 1e-10;    // times diameter
  double close = 1e-9;    // times diameter
  double convex = 1e-12;
  double bd = 1e-9;       // times diameter
};

struct JointInfo {
  bool smooth = true;
  Vec2 normal_before;
  Vec2 normal_after;
  double curvature_before = 0.0;
  double curvature_after = 0.0;
};

enum class NormalMatchKind { Unique, Corner, Flat };

struct NormalMatch {
  NormalMatchKind kind = NormalMatchKind::Unique;
  double s = 0.0;
  Vec2 point;
  // Populated for Flat: the segment endpoints.
  double s_lo = 0.0;
  double s_hi = 0.0;
};

struct Projection {
  Vec2 point;
  double s = 0.0;
  double distance = 0.0;
  // Inward direction at the foot; at a corner this is the push direction.
  Vec2 normal;
};

class BoundaryCurve {
 public:
  BoundaryCurve() = default;

  static BoundaryCurve build(std::vector<BoundaryPiece> pieces, const Tolerances& tol = {});

  const std::vector<BoundaryPiece>& pieces() const { return pieces_; }
  const std::vector<double>& cumulative_lengths() const { return cum_; }
  double total_length() const { return total_; }
  double diameter() const { return diameter_; }
  double tol_root() const { return tol_.root * diameter_; }
  double tol_close() const { return tol_.close * diameter_; }
  double tol_bd() const { return tol_.bd * diameter_; }
  const Tolerances& tolerances() const { return tol_; }

  double wrap(double s) const;
  Vec2 point_at(double s) const;
  void frame_at(double s, Vec2* point, Vec2* tangent) const;
  Vec2 tangent_at(double s) const;
  Vec2 normal_at(double s) const;
  double curvature_at(double s) const;
  // One-sided data when s sits on a piece joint.
  JointInfo joint_at(double s) const;
  // Arclength positions of joints whose tangent turns discontinuously.
  std::vector<double> corner_positions() const;

  // Arclength of the point with parameter t on piece k.
  double s_of(int piece, double t) const;
  int piece_at(double s, double* t) const;

  NormalMatch find_by_normal_angle(double beta) const;
  // Ordered (P, Q) per the e2 convention.
  std::pair<double, double> line_intersections(const LineRepr& line) const;
  // Raw intersections: (s, point) pairs, deduplicated, unordered.
  std::vector<std::pair<double, Vec2>> raw_line_intersections(const LineRepr& line) const;

  // Positive inside, zero on the boundary; the distance to the boundary
  // measured along the ray from the interior reference center.
  double radial_excess(Vec2 a) const;
  bool contains_fast(Vec2 a) const;
  Projection project(Vec2 a) const;
  double signed_distance(Vec2 a) const;
  Inside is_inside(Vec2 a) const;

  Vec2 center() const { return center_; }
  double area() const;

 private:
  struct ArcTable {
    std::vector<double> t;  // knots
    std::vector<double> s;  // cumulative arclength at knots
  };

  double piece_length_to(int k, double t) const;
  double piece_t_of(int k, double local_s) const;
  Projection project_piece(int k, Vec2 a) const;
  bool ray_hit(int k, Vec2 dir, double* r) const;
  void build_polar();

  std::vector<BoundaryPiece> pieces_;
  std::vector<ArcTable> tables_;
  std::vector<double> cum_;
  double total_ = 0.0;
  double diameter_ = 1.0;
  Tolerances tol_;

  Vec2 center_;
  int nbins_ = 0;
  std::vector<double> bin_rmin_;
  std::vector<double> bin_rmax_;
  std::vector<int> bin_piece_;
  std::vector<double> piece_polar_;  // polar angle of each piece start, unwrapped
};

BoundaryCurve fillet_smooth(const BoundaryCurve& curve, double rho);

// Hausdorff distance between two curves estimated from n samples of each.
double sampled_hausdorff(const BoundaryCurve& a, const BoundaryCurve& b, int n);

}  // namespace mirror
