// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "mirror/lyapunov.hpp"

namespace mirror {

enum class Verdict { Pass, Fail, Skipped };
const char* to_string(Verdict v);

// A chord and, when relevant, the boundary point exhibiting the violation.
struct Witness {
  double s_P = 0.0;
  double s_Q = 0.0;
  double angle = 0.0;
  std::optional<double> s_A;
  Vec2 A;
  std::string what;
};

struct CheckResult {
  Verdict verdict = Verdict::Skipped;
  std::string reason;
  std::optional<Witness> witness;
  long chords = 0;
};

struct AssumptionOptions {
  int grid = 50;          // positions and angles per family
  int scan = 200;         // boundary points per activity scan
  int census = 500;       // hinge census and crossing scan resolution
  int pair_chords = 20;   // chords per family in the intersection check
  double buffer = 1e-6;   // radians kept away from the closed angle bounds
  double nu_step = 0.001;
  double nu_max = 0.05;
};

struct AssumptionReport {
  CheckResult a[5];
  double nu_found = 0.0;
  AssumptionOptions opt;

  bool all_pass() const;
  bool any_fail() const;
};

// Chord of a family at relative position t_pos and relative angle t_angle,
// both in [0, 1].  Without P3/P4 the position range falls back to the
// whole lower (upper) part.
Chord family_chord(const BoundaryCurve& curve, const SpecialPoints& sp, OdeFamily family,
                   double t_pos, double t_angle, double buffer = 1e-6);

CheckResult check_a1(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt = {});
CheckResult check_a2(const BoundaryCurve& curve, const SpecialPoints& sp, double* nu_found,
                     const AssumptionOptions& opt = {});
CheckResult check_a3(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt = {});
CheckResult check_a4(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt = {});
CheckResult check_a5(const BoundaryCurve& curve, const SpecialPoints& sp, const AssumptionOptions& opt = {});

AssumptionReport check_assumptions(const BoundaryCurve& curve, const SpecialPoints& sp,
                                   const AssumptionOptions& opt = {});

nlohmann::json assumptions_json(const AssumptionReport& rep);

}  // namespace mirror
