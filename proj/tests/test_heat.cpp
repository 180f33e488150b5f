// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/fem.hpp"
#include "mirror/spectral.hpp"

using namespace mirror;

namespace {

double mass_total(const TriMesh& m, const std::vector<double>& u) {
  const FemSystem s = assemble_fem(m);
  std::vector<double> mu;
  s.M.matvec(u, mu);
  double t = 0;
  for (double v : mu) t += v;
  return t;
}

}  // namespace

TEST_SUITE("heat") {
  TEST_CASE("bump shape") {
    const Bump b{{0.5, 0.5}, 0.4, 2.0};
    CHECK(b({0.5, 0.5}) == doctest::Approx(2.0));
    CHECK(b({0.9, 0.5}) == 0.0);
    CHECK(b({1.5, 0.5}) == 0.0);
    CHECK(b({0.7, 0.5}) == doctest::Approx(2.0 * std::exp(1.0 - 1.0 / 0.75)));
    CHECK(b({0.7, 0.5}) == doctest::Approx(b({0.5, 0.3})));
  }

  TEST_CASE("implicit Euler conserves mass and relaxes to the mean") {
    const auto c = preset_domain("disk").curve;
    const TriMesh m = triangulate(c, 0.1);
    const Bump b{{0.3, 0.2}, 0.5, 1.0};
    std::vector<double> u0(m.n_vertices());
    for (int i = 0; i < m.n_vertices(); ++i) u0[i] = b(m.vertices[i]);
    const double m0 = mass_total(m, u0);
    const auto u1 = heat_fem(m, u0, 0.5, 0.01);
    CHECK(mass_total(m, u1) == doctest::Approx(m0).epsilon(1e-9));
    double lo = 1e300, hi = -1e300;
    for (double v : u1) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi <= 1.0 + 1e-12);
    const auto uinf = heat_fem(m, u0, 20.0, 0.05);
    const double mean = m0 / m.total_area();
    for (double v : uinf) CHECK(v == doctest::Approx(mean).epsilon(1e-4));
    // Zero time leaves the data unchanged.
    CHECK(heat_fem(m, u0, 0.0, 0.01) == u0);
  }

  TEST_CASE("cross-check at time zero") {
    const auto& c = fixtures::example1().curve;
    const Bump b{{0.0, 0.0}, 1.0, 1.0};
    HeatOptions o;
    o.h = 0.2;
    o.mc_paths = 200;
    o.mc.dt = 1e-3;
    const std::vector<Vec2> pts = {{0.0, 0.0}, {0.5, 0.2}, {-0.3, -0.4}};
    const HeatReport r = heat_cross_check(c, b, 0.0, pts, o);
    for (const auto& row : r.rows) {
      CHECK(row.mc == doctest::Approx(row.f0).epsilon(1e-12));
      CHECK(row.mc_se < 1e-12);
      CHECK(std::abs(row.fem - row.f0) < 0.05);
      CHECK(row.pass);
    }
  }

  TEST_CASE("cross-check at a short time") {
    const auto& c = fixtures::example1().curve;
    const Bump b{{0.068, 0.173}, 1.0, 1.0};
    HeatOptions o;
    o.h = 0.2;
    o.mc_paths = 1000;
    o.mc.dt = 1e-3;
    const HeatReport r = heat_cross_check(c, b, 0.2, {{0.068, 0.173}, {0.5, 0.3}}, o);
    CHECK(r.all_pass);
    for (const auto& row : r.rows) {
      CHECK(row.mc_se > 0.0);
      CHECK(row.diff <= 3 * (row.mc_se + row.mesh_error));
    }
    CHECK(heat_json(r).at("kind") == "heat");
  }
}
