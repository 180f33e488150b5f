// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mirror/geometry.hpp"

namespace mirror {

enum class Side { Left, Right };
enum class Level { Upper, Lower };

const char* to_string(Side s);
const char* to_string(Level l);

// A mirror position: the line through two boundary points, P lower and Q
// upper by the e2 convention.
struct Chord {
  double s_P = 0.0;
  double s_Q = 0.0;
  Vec2 P;
  Vec2 Q;
  double angle = 0.0;
  Vec2 p;
  Vec2 m;

  LineRepr line() const { return LineRepr(angle, P); }
  double length() const { return dist(P, Q); }
};

Chord chord_from_line(const BoundaryCurve& curve, const LineRepr& line);
Chord chord_from_params(const BoundaryCurve& curve, double s_a, double s_b);
// The chord at the given angle through the boundary point at s.
Chord chord_through(const BoundaryCurve& curve, double s, double angle);

struct Hinge {
  double s_A = 0.0;
  Vec2 A;
  Vec2 H;
  Side side = Side::Left;
  Level level = Level::Lower;
  double d = 0.0;
};

// Positive when the reflection of A across the chord lies inside D.
double activity_margin(const BoundaryCurve& curve, const Chord& chord, Vec2 A);
bool is_active(const BoundaryCurve& curve, const Chord& chord, double s_A);
Side side_of(const Chord& chord, Vec2 A);

// Uniformly spaced boundary points and unit tangents, s_i = L i / n.
struct BoundarySamples {
  std::vector<double> s;
  std::vector<Vec2> A;
  std::vector<Vec2> T;
};
BoundarySamples sample_boundary(const BoundaryCurve& curve, int n);

// Hinge geometry of A without the activity test.
std::optional<Hinge> hinge_geometry(const BoundaryCurve& curve, const Chord& chord, double s_A);
std::optional<Hinge> hinge_of(const BoundaryCurve& curve, const Chord& chord, double s_A);

struct HingeSample {
  double s_A = 0.0;
  bool on_mirror = false;
  bool active = false;
  std::optional<Hinge> hinge;
};

// Uniform boundary scan; the OpenMP and serial variants give identical rows.
std::vector<HingeSample> scan_hinges(const BoundaryCurve& curve, const Chord& chord, int n);
std::vector<HingeSample> scan_hinges_serial(const BoundaryCurve& curve, const Chord& chord, int n);

struct HingeCensus {
  bool lower_left = false;
  bool lower_right = false;
  bool upper_left = false;
  bool upper_right = false;
  std::optional<Hinge> lower_left_witness;
  std::optional<Hinge> lower_right_witness;
  std::optional<Hinge> upper_left_witness;
  std::optional<Hinge> upper_right_witness;
  bool any_right_active = false;
  bool any_left_active = false;
  double right_active_witness = 0.0;
  double left_active_witness = 0.0;
};

// Which hinge classes occur for the chord.  A uniform scan of n points is
// augmented with geometric refinement next to the parallel-tangent points
// and the chord ends, then local maximization of the activity margin.
HingeCensus hinge_census(const BoundaryCurve& curve, const Chord& chord, int n = 2000,
                         const BoundarySamples* cache = nullptr);

enum class ExtremalFamily { LowerHinges, UpperHinges };

struct ExtremalPoints {
  double s_left = 0.0;
  double s_right = 0.0;
  Vec2 A_left;
  Vec2 A_right;
  std::optional<Hinge> H_left;
  std::optional<Hinge> H_right;
  double crossing_angle = 0.0;
  bool levels_ok = false;
  bool ordering_ok = false;  // strict d inequality for the family
  bool limit = false;        // collapsed onto a chord end
};

struct ExtremalOptions {
  int samples = 2000;
  double tol_angle = 1e-6;
  // Accept a collapsed crossing (no sign change) as the chord-end limit.
  bool allow_limit = false;
};

ExtremalPoints extremal_points(const BoundaryCurve& curve, const Chord& chord,
                               ExtremalFamily family, const ExtremalOptions& opt = {});

// Drift coefficients of the mirror chart.
struct FieldValue {
  double c1 = 0.0;
  double c2 = 0.0;
};
FieldValue field_F(const BoundaryCurve& curve, const Chord& chord, Vec2 X, Vec2 nX, double V);
FieldValue field_G(const BoundaryCurve& curve, const Chord& chord, Vec2 Y, Vec2 nY, double V);

}  // namespace mirror
