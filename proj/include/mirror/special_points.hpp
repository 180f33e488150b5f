// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>

#include "json.hpp"
#include "mirror/hinges.hpp"

namespace mirror {

struct UPoint {
  double u1 = 0.0;
  double u2 = 0.0;
};

struct MarkedPoint {
  bool known = false;
  double s = 0.0;
  Vec2 x;
};

// Indices 1..6 follow the point names; slot 0 is unused.
struct SpecialPoints {
  double alpha = 0.0;
  double total = 0.0;
  double ubar1 = 0.0;
  double ubar2 = 0.0;
  std::array<MarkedPoint, 7> P, Q, Pp, Qp;
  bool hinge_free = false;
  std::string note;

  double s_lower_start() const { return P[1].s; }
  double s_upper_start() const { return Qp[6].s; }
  bool in_lower(double s, double slack = 0.0) const;
  bool in_upper(double s, double slack = 0.0) const;
  double u1_of(double s) const;
  double u2_of(double s) const;
  double s_of_u1(double u1) const;
  double s_of_u2(double u2) const;
};

struct SpecialOptions {
  int scan = 2000;
  int census_samples = 2000;
  // Without the hinge-free arc the remaining points are still returned.
  bool require_hinge_free = true;
};

// Is the angle-alpha chord through the lower point at s free of lower-left
// and upper-right hinges?
bool alpha_chord_hinge_free(const BoundaryCurve& curve, double s, double alpha, int census_samples);

SpecialPoints compute_special_points(const BoundaryCurve& curve, double alpha,
                                     const SpecialOptions& opt = {});

UPoint phi(const SpecialPoints& sp, const Chord& chord);
bool try_phi(const SpecialPoints& sp, const Chord& chord, UPoint* out);
Chord phi_inv(const BoundaryCurve& curve, const SpecialPoints& sp, UPoint u);

nlohmann::json special_points_json(const SpecialPoints& sp);

}  // namespace mirror
