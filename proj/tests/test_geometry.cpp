// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "mirror/domain_io.hpp"
#include "mirror/errors.hpp"
#include "mirror/geometry.hpp"
#include "mirror/rng.hpp"

using namespace mirror;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidInput;
}

// Shoelace area of a dense sampling of the pieces themselves.
double shoelace(const std::vector<BoundaryPiece>& pieces, int per_piece) {
  double a = 0.0;
  for (const auto& p : pieces) {
    for (int i = 0; i < per_piece; ++i) {
      const double t0 = p.t_begin() + (p.t_end() - p.t_begin()) * i / per_piece;
      const double t1 = p.t_begin() + (p.t_end() - p.t_begin()) * (i + 1) / per_piece;
      a += 0.5 * cross(p.eval(t0), p.eval(t1));
    }
  }
  return a;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("unit disk") {
    const auto d = preset_domain("disk");
    const auto& c = d.curve;
    CHECK(c.total_length() == doctest::Approx(kTwoPi).epsilon(1e-10));
    CHECK(c.area() == doctest::Approx(kPi).epsilon(1e-10));
    CHECK(c.diameter() == doctest::Approx(2.0).epsilon(1e-6));
    for (int i = 0; i < 16; ++i) {
      const double s = c.total_length() * i / 16;
      const Vec2 x = c.point_at(s);
      CHECK(norm(x) == doctest::Approx(1.0).epsilon(1e-12));
      // Inward normal, unit curvature.
      CHECK(dist(c.normal_at(s), -x) < 1e-9);
      CHECK(c.curvature_at(s) == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(c.signed_distance({0.3, 0.4}) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(c.signed_distance({1.2, 0.0}) == doctest::Approx(-0.2).epsilon(1e-9));
    CHECK(c.is_inside({0.0, 0.0}) == Inside::Inside);
    CHECK(c.is_inside({2.0, 0.0}) == Inside::Outside);
    CHECK(c.is_inside({0.0, 1.0}) == Inside::Boundary);
  }

  TEST_CASE("line intersections of the disk") {
    const auto c = preset_domain("disk").curve;
    const auto [sP, sQ] = c.line_intersections(LineRepr(0.0, {0.0, 0.5}));
    const Vec2 P = c.point_at(sP), Q = c.point_at(sQ);
    CHECK(P.y == doctest::Approx(0.5));
    CHECK(Q.y == doctest::Approx(0.5));
    CHECK(std::abs(P.x) == doctest::Approx(std::sqrt(0.75)));
    CHECK(P.x == doctest::Approx(-Q.x));
    CHECK_THROWS_AS(c.line_intersections(LineRepr(0.0, {0.0, 2.0})), Error);
  }

  TEST_CASE("square corners and projection") {
    const auto c = preset_domain("square").curve;
    CHECK(c.area() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.total_length() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c.corner_positions().size() == 4);
    const Projection p = c.project({1.5, 1.5});
    CHECK(dist(p.point, {1.0, 1.0}) < 1e-9);
    CHECK(p.distance == doctest::Approx(std::sqrt(0.5)));
    const Projection q = c.project({0.5, -0.25});
    CHECK(dist(q.point, {0.5, 0.0}) < 1e-9);
    CHECK(dist(q.normal, {0.0, 1.0}) < 1e-9);
  }

  TEST_CASE("example 1 area against a shoelace oracle") {
    const auto d = preset_domain("example1");
    CHECK(d.curve.area() == doctest::Approx(shoelace(d.pieces, 20000)).epsilon(1e-7));
    // The two circular arcs meet at an angle at (-2 sqrt 2, 0); all other joints are smooth.
    const auto corners = d.curve.corner_positions();
    REQUIRE(corners.size() == 1);
    CHECK(dist(d.curve.point_at(corners[0]), {-2 * std::sqrt(2.0), 0.0}) < 1e-9);
  }

  TEST_CASE("reflection is an isometric involution") {
    PhiloxStream r(3, 0);
    for (int i = 0; i < 200; ++i) {
      const LineRepr l(kPi * r.uniform(), {r.normal(), r.normal()});
      const Vec2 a{r.normal(), r.normal()}, b{r.normal(), r.normal()};
      const Vec2 ra = reflect_point(a, l), rb = reflect_point(b, l);
      CHECK(dist(reflect_point(ra, l), a) < 1e-12);
      CHECK(dist(ra, rb) == doctest::Approx(dist(a, b)).epsilon(1e-12));
      // The anchor lies on the line and is fixed.
      CHECK(dist(reflect_point(l.anchor, l), l.anchor) < 1e-12);
    }
  }

  TEST_CASE("projection lands on the boundary and is nearest") {
    const auto c = preset_domain("example1").curve;
    PhiloxStream r(4, 0);
    for (int i = 0; i < 100; ++i) {
      const Vec2 a{6 * r.uniform() - 3, 6 * r.uniform() - 3};
      const Projection p = c.project(a);
      CHECK(std::abs(c.radial_excess(p.point)) < 1e-8);
      for (int k = 0; k < 64; ++k)
        CHECK(dist(a, c.point_at(c.total_length() * k / 64)) >= p.distance - 1e-9);
    }
  }

  TEST_CASE("validation errors") {
    CHECK(code_of([] {
            BoundaryCurve::build({BoundaryPiece::segment({0, 0}, {1, 0}), BoundaryPiece::segment({1, 0}, {1, 1})});
          }) == Errc::NotClosed);
    CHECK(code_of([] {
            BoundaryCurve::build({BoundaryPiece::segment({0, 0}, {0, 1}), BoundaryPiece::segment({0, 1}, {1, 1}),
                                  BoundaryPiece::segment({1, 1}, {1, 0}), BoundaryPiece::segment({1, 0}, {0, 0})});
          }) == Errc::NotConvex);
    CHECK(code_of([] {
            BoundaryCurve::build({BoundaryPiece::segment({0, 0}, {0, 0})});
          }) == Errc::DegeneratePiece);
    CHECK(code_of([] { BoundaryCurve::build({}); }) == Errc::InvalidInput);
    CHECK(code_of([] { preset_domain("nope"); }) == Errc::InvalidInput);
    CHECK(code_of([] { domain_from_json(nlohmann::json::parse(R"({"pieces":[{"kind":"spline"}]})")); }) ==
          Errc::InvalidInput);
  }

  TEST_CASE("fillet smoothing stays close to the square") {
    const auto c = preset_domain("square").curve;
    const BoundaryCurve f = fillet_smooth(c, 0.1);
    CHECK(f.corner_positions().empty());
    const double hd = sampled_hausdorff(c, f, 4000);
    CHECK(hd > 0.0);
    CHECK(hd <= 0.1 * (std::sqrt(2.0) - 1.0) + 1e-3);
    CHECK_THROWS_AS(fillet_smooth(c, 0.6), Error);
  }

  TEST_CASE("presets round-trip through JSON") {
    for (const auto& name : preset_names()) {
      const Domain d = preset_domain(name);
      const Domain e = domain_from_json(domain_to_json(d), name);
      CHECK(domain_hash(d) == domain_hash(e));
      CHECK(e.curve.area() == doctest::Approx(d.curve.area()).epsilon(1e-12));
    }
  }
}
