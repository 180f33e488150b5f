// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/errors.hpp"
#include "mirror/hinges.hpp"
#include "mirror/rng.hpp"

using namespace mirror;

TEST_SUITE("special_points") {
  TEST_CASE("example 1 points match the published table") {
    const auto& sp = fixtures::example1_sp();
    for (const auto& row : fixtures::example1_table()) {
      CAPTURE(row.name);
      const auto& m = fixtures::named(sp, row.name);
      REQUIRE(m.known);
      CHECK(std::abs(m.x.x - row.x) <= 0.015);
      CHECK(std::abs(m.x.y - row.y) <= 0.015);
    }
  }

  TEST_CASE("closed forms of P1 and Q'6") {
    const auto& sp = fixtures::example1_sp();
    const double r2 = std::sqrt(2.0);
    CHECK(dist(sp.P[1].x, {-1 - r2, -1}) < 1e-8);
    CHECK(dist(sp.Qp[6].x, {-1.5 * r2, -1 + 1.5 * r2}) < 1e-8);
    CHECK(sp.hinge_free);
  }

  TEST_CASE("points lie on the boundary") {
    const auto& c = fixtures::example1().curve;
    const auto& sp = fixtures::example1_sp();
    for (const auto& row : fixtures::example1_table()) {
      const auto& m = fixtures::named(sp, row.name);
      CHECK(dist(c.point_at(m.s), m.x) < 1e-9);
    }
  }

  TEST_CASE("chart round trip") {
    const auto& c = fixtures::example1().curve;
    const auto& sp = fixtures::example1_sp();
    PhiloxStream r(21, 0);
    int done = 0;
    for (int i = 0; i < 200; ++i) {
      const UPoint u{sp.ubar1 * (0.05 + 0.9 * r.uniform()), sp.ubar2 * (0.05 + 0.9 * r.uniform())};
      Chord ch;
      try {
        ch = phi_inv(c, sp, u);
      } catch (const Error&) {
        continue;  // the two points coincide or the line is degenerate
      }
      UPoint back;
      if (!try_phi(sp, ch, &back)) continue;
      ++done;
      CHECK(back.u1 == doctest::Approx(u.u1).epsilon(1e-9));
      CHECK(back.u2 == doctest::Approx(u.u2).epsilon(1e-9));
      CHECK(sp.in_lower(ch.s_P, 1e-9));
      CHECK(sp.in_upper(ch.s_Q, 1e-9));
    }
    CHECK(done > 150);
  }

  TEST_CASE("u coordinates are arclength offsets") {
    const auto& sp = fixtures::example1_sp();
    CHECK(sp.u1_of(sp.P[1].s) == doctest::Approx(0.0));
    CHECK(sp.u2_of(sp.Qp[6].s) == doctest::Approx(0.0));
    for (double f : {0.1, 0.5, 0.9}) {
      CHECK(sp.u1_of(sp.s_of_u1(f * sp.ubar1)) == doctest::Approx(f * sp.ubar1));
      CHECK(sp.u2_of(sp.s_of_u2(f * sp.ubar2)) == doctest::Approx(f * sp.ubar2));
    }
  }

  TEST_CASE("the disk has no hinge-free arc") {
    const auto c = preset_domain("disk").curve;
    try {
      compute_special_points(c, kPi / 4);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::EmptyHingeFreeArc);
    }
    SpecialOptions relaxed;
    relaxed.require_hinge_free = false;
    const SpecialPoints sp = compute_special_points(c, kPi / 4, relaxed);
    CHECK_FALSE(sp.hinge_free);
  }

  TEST_CASE("example 2 special points with the relaxed rule") {
    const auto d = preset_domain("example2");
    SpecialOptions relaxed;
    relaxed.require_hinge_free = false;
    const SpecialPoints sp = compute_special_points(d.curve, kPi / 4, relaxed);
    CHECK(sp.total == doctest::Approx(d.curve.total_length()));
  }
}
