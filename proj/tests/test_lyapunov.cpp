// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/rng.hpp"

using namespace mirror;

namespace {

double seg_dist(UPoint p, UPoint a, UPoint b) {
  const double dx = b.u1 - a.u1, dy = b.u2 - a.u2;
  const double L2 = dx * dx + dy * dy;
  double t = L2 > 0 ? ((p.u1 - a.u1) * dx + (p.u2 - a.u2) * dy) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.u1 - a.u1 - t * dx, p.u2 - a.u2 - t * dy);
}

double loop_dist(const std::vector<UPoint>& loop, UPoint p) {
  double d = 1e300;
  for (size_t i = 0; i + 1 < loop.size(); ++i) d = std::min(d, seg_dist(p, loop[i], loop[i + 1]));
  return d;
}

}  // namespace

TEST_SUITE("lyapunov") {
  TEST_CASE("ODE arcs of example 1") {
    const auto& ls = fixtures::example1_lset();
    REQUIRE(ls.ode.size() == 4);
    for (const auto& a : ls.ode) {
      CAPTURE(to_string(a.family));
      CHECK(a.positive);
      CHECK(a.min_du1 > 0.0);
      CHECK(a.min_du2 > 0.0);
      CHECK(a.normality <= 1e-6);
      CHECK(a.ordering_ok);
      CHECK(a.steps > 0);
      CHECK(a.points.size() >= 2);
    }
  }

  TEST_CASE("the loop is closed and simple") {
    const auto& ls = fixtures::example1_lset();
    REQUIRE(ls.loop.size() > 10);
    CHECK(ls.closure_gap < 1e-6);
    CHECK(ls.loop.front().u1 == ls.loop.back().u1);
    CHECK(ls.loop.front().u2 == ls.loop.back().u2);
    CHECK_FALSE(loop_self_intersects(ls.loop));
  }

  TEST_CASE("membership agrees with the winding number") {
    const auto& ls = fixtures::example1_lset();
    PhiloxStream r(41, 0);
    int inside = 0;
    for (int i = 0; i < 3000; ++i) {
      const UPoint u{ls.sp.ubar1 * r.uniform(), ls.sp.ubar2 * r.uniform()};
      if (loop_dist(ls.loop, u) < 1e-6) continue;
      const bool w = winding_number(ls.loop, u) != 0;
      CHECK(ls.contains(u) == w);
      inside += w;
    }
    CHECK(inside > 100);
  }

  TEST_CASE("loop corners belong to the set") {
    const auto& ls = fixtures::example1_lset();
    for (const char* n : {"u2", "u3", "u4", "u5", "u2'", "u3'", "u4'", "u5'"}) {
      const std::string name = n;
      const UPoint u = ls.corner(name);
      CAPTURE(name);
      CAPTURE(u.u1);
      CAPTURE(u.u2);
      CHECK(ls.contains(u, 1e-7));
    }
  }

  TEST_CASE("frames are rigid and invertible") {
    const auto& sp = fixtures::example1_sp();
    for (Frame f : {Frame::Identity, Frame::Rot180, Frame::MirrorX, Frame::MirrorY}) {
      const Vec2 x{0.3, -1.7};
      CHECK(dist(frame_point(f, frame_point(f, x)), x) < 1e-15);
      CHECK(norm(frame_point(f, x)) == doctest::Approx(norm(x)));
      const UPoint u{0.4 * sp.ubar1, 0.6 * sp.ubar2};
      const UPoint back = from_frame(sp, f, to_frame(sp, f, u));
      CHECK(back.u1 == doctest::Approx(u.u1));
      CHECK(back.u2 == doctest::Approx(u.u2));
    }
  }

  TEST_CASE("right-hand side is positive inside each family") {
    const auto& c = fixtures::example1().curve;
    const auto& ls = fixtures::example1_lset();
    for (const auto& a : ls.ode) {
      const FamilyOde ode(c, ls.sp, a.family);
      // Interior points of the computed arc.
      for (size_t i = 1; i + 1 < a.points.size(); i += std::max<size_t>(1, a.points.size() / 10)) {
        const OdeRhs r = ode.rhs(a.points[i]);
        const UPoint uf = to_frame(ls.sp, frame_of(a.family), a.points[i]);
        const OdeRhs rf = ode.rhs_frame(uf);
        CHECK(rf.du1 > 0.0);
        CHECK(rf.du2 > 0.0);
        CHECK(std::abs(r.du1) + std::abs(r.du2) > 0.0);
      }
    }
  }

  TEST_CASE("pairs mirrored across a chart chord lie in T") {
    const auto& c = fixtures::example1().curve;
    const auto& ls = fixtures::example1_lset();
    UPoint u{0, 0};
    for (size_t i = 0; i + 1 < ls.loop.size(); ++i) {
      u.u1 += ls.loop[i].u1 / static_cast<double>(ls.loop.size() - 1);
      u.u2 += ls.loop[i].u2 / static_cast<double>(ls.loop.size() - 1);
    }
    REQUIRE(ls.contains(u));
    const Chord ch = phi_inv(c, ls.sp, u);
    const Vec2 mid = (ch.P + ch.Q) * 0.5;
    const Vec2 x = mid - ch.m * 0.05, y = mid + ch.m * 0.05;
    Chord bis;
    REQUIRE(bisector_chord(c, x, y, &bis));
    CHECK(dist(bis.P, ch.P) < 1e-8);
    CHECK(dist(bis.Q, ch.Q) < 1e-8);
    CHECK(pair_in_T(c, ls, x, y));
    CHECK_FALSE(pair_in_T(c, ls, y, x));
  }
}
