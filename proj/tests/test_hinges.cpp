// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/assumptions.hpp"
#include "mirror/hinges.hpp"
#include "mirror/rng.hpp"

using namespace mirror;

TEST_SUITE("hinges") {
  TEST_CASE("parallel scan matches the serial reference") {
    const auto& c = fixtures::example1().curve;
    for (double frac : {0.1, 0.3, 0.55, 0.8}) {
      const Chord ch = chord_through(c, frac * c.total_length(), 1.1);
      const auto a = scan_hinges(c, ch, 1500);
      const auto b = scan_hinges_serial(c, ch, 1500);
      REQUIRE(a.size() == b.size());
      for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].s_A == b[i].s_A);
        CHECK(a[i].active == b[i].active);
        CHECK(a[i].on_mirror == b[i].on_mirror);
        REQUIRE(a[i].hinge.has_value() == b[i].hinge.has_value());
        if (a[i].hinge) {
          CHECK(a[i].hinge->H == b[i].hinge->H);
          CHECK(a[i].hinge->d == b[i].hinge->d);
        }
      }
    }
  }

  TEST_CASE("hinge lies on the mirror and on the tangent line") {
    const auto& c = fixtures::example1().curve;
    PhiloxStream r(11, 0);
    int seen = 0;
    for (int i = 0; i < 40; ++i) {
      const Chord ch = chord_through(c, r.uniform() * c.total_length(), 0.2 + 2.7 * r.uniform());
      for (int k = 0; k < 50; ++k) {
        const double s = r.uniform() * c.total_length();
        const auto h = hinge_geometry(c, ch, s);
        if (!h) continue;
        ++seen;
        const Vec2 t = c.tangent_at(s);
        CHECK(std::abs(cross(h->H - h->A, t)) < 1e-9 * (1 + dist(h->H, h->A)));
        CHECK(std::abs(cross(h->H - ch.P, ch.p)) < 1e-9 * (1 + dist(h->H, ch.P)));
        // Distance to the nearer chord end, signed by level.
        const double lam = dot(h->H - ch.P, ch.p);
        if (h->d > 0) {
          if (h->level == Level::Lower) CHECK(h->d == doctest::Approx(-lam));
          else CHECK(h->d == doctest::Approx(lam - ch.length()));
        }
      }
    }
    CHECK(seen > 1000);
  }

  TEST_CASE("every point is active for a diameter of the disk") {
    const auto c = preset_domain("disk").curve;
    const Chord ch = chord_from_line(c, LineRepr(0.3, {0, 0}));
    for (int i = 0; i < 100; ++i) {
      const Vec2 A = c.point_at(c.total_length() * (i + 0.5) / 100);
      CHECK(std::abs(activity_margin(c, ch, A)) < 1e-9);
    }
  }

  TEST_CASE("the small cap of the disk is active") {
    const auto c = preset_domain("disk").curve;
    const Chord ch = chord_from_line(c, LineRepr(0.0, {0, 0.5}));
    for (int i = 1; i < 50; ++i) {
      const double th = kPi / 6 + (kPi * 2 / 3) * i / 50;
      CHECK(activity_margin(c, ch, unit(th)) > 0.0);
    }
    // Far side of the big cap reflects outside.
    CHECK(activity_margin(c, ch, {0, -1}) < 0.0);
  }

  TEST_CASE("extremal points reflect onto each other") {
    const auto& c = fixtures::example1().curve;
    const auto& sp = fixtures::example1_sp();
    PhiloxStream r(12, 0);
    for (int i = 0; i < 10; ++i) {
      const Chord ch = family_chord(c, sp, OdeFamily::LowerPlain, r.uniform(), r.uniform());
      const auto ex = extremal_points(c, ch, ExtremalFamily::LowerHinges);
      CHECK(dist(reflect_point(ex.A_right, ch.line()), ex.A_left) < 1e-7);
      CHECK(ex.levels_ok);
      CHECK(ex.ordering_ok);
      CHECK(ex.H_left->d > ex.H_right->d);
    }
  }
}
