// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
//
// Cached domains shared by the test suites.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mirror/domain_io.hpp"
#include "mirror/lyapunov.hpp"
#include "mirror/special_points.hpp"

namespace fixtures {

inline const mirror::Domain& example1() {
  static const mirror::Domain d = mirror::preset_domain("example1");
  return d;
}

inline const mirror::SpecialPoints& example1_sp() {
  static const mirror::SpecialPoints sp = mirror::compute_special_points(example1().curve, mirror::kPi / 4);
  return sp;
}

inline const mirror::LyapunovSet& example1_lset() {
  static const mirror::LyapunovSet ls = mirror::assemble(example1().curve, example1_sp());
  return ls;
}

struct TablePoint {
  const char* name;
  double x;
  double y;
};

// Published coordinates of the special points of Example 1 at alpha = pi/4.
inline const std::vector<TablePoint>& example1_table() {
  static const std::vector<TablePoint> t = {
      {"P1", -2.41, -1.00},  {"P3", -2.005, -1.28}, {"P4", -0.7, -1.41},  {"P6", -0.027, -1.41},
      {"Q1", 0.55, 1.97},    {"Q3", 1.13, 1.85},    {"Q4", 2.13, 1.41},   {"Q6", 2.50, 1.11},
      {"P'1", 2.71, -0.6},   {"P'3", 2.09, -1.01},  {"P'4", 0.9, -1.35},  {"P'6", 0.4, -1.40},
      {"Q'1", 0.11, 2.0},    {"Q'3", -0.81, 1.89},  {"Q'4", -1.83, 1.38}, {"Q'6", -2.12, 1.12},
  };
  return t;
}

// Looks up a named point ("P3", "Q'6", ...).
inline const mirror::MarkedPoint& named(const mirror::SpecialPoints& sp, const std::string& name) {
  const bool primed = name.size() == 3;
  const int k = name.back() - '0';
  if (name[0] == 'P') return primed ? sp.Pp[k] : sp.P[k];
  return primed ? sp.Qp[k] : sp.Q[k];
}

}  // namespace fixtures
