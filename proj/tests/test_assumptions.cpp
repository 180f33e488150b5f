// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/assumptions.hpp"
#include "mirror/rng.hpp"

using namespace mirror;

TEST_SUITE("assumptions") {
  TEST_CASE("example 1 satisfies all five") {
    const auto rep = check_assumptions(fixtures::example1().curve, fixtures::example1_sp());
    for (int i = 0; i < 5; ++i) {
      CAPTURE(i + 1);
      CHECK(rep.a[i].verdict == Verdict::Pass);
      CHECK(rep.a[i].chords > 0);
    }
    CHECK(rep.all_pass());
    CHECK(rep.nu_found > 0.0);
    const auto j = assumptions_json(rep);
    CHECK(j.dump().find("\"fail\"") == std::string::npos);
  }

  TEST_CASE("the disk fails with a witness") {
    const auto c = preset_domain("disk").curve;
    SpecialOptions relaxed;
    relaxed.require_hinge_free = false;
    const SpecialPoints sp = compute_special_points(c, kPi / 4, relaxed);
    AssumptionOptions opt;
    opt.grid = 12;
    const auto rep = check_assumptions(c, sp, opt);
    CHECK(rep.any_fail());
    bool witnessed = false;
    for (const auto& r : rep.a)
      if (r.verdict == Verdict::Fail) witnessed = witnessed || r.witness.has_value() || !r.reason.empty();
    CHECK(witnessed);
  }

  TEST_CASE("family chords stay inside their angle windows") {
    const auto& c = fixtures::example1().curve;
    const auto& sp = fixtures::example1_sp();
    PhiloxStream r(31, 0);
    for (OdeFamily f : {OdeFamily::UpperPlain, OdeFamily::LowerPlain, OdeFamily::UpperPrimed, OdeFamily::LowerPrimed}) {
      for (int i = 0; i < 25; ++i) {
        const Chord ch = family_chord(c, sp, f, r.uniform(), r.uniform());
        CAPTURE(to_string(f));
        CHECK(ch.length() > 0.0);
        CHECK(std::abs(c.radial_excess(ch.P)) < 1e-8);
        CHECK(std::abs(c.radial_excess(ch.Q)) < 1e-8);
        // P is the lower end.
        CHECK(ch.P.y <= ch.Q.y + 1e-12);
      }
    }
  }
}
