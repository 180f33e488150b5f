// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/fem.hpp"
#include "mirror/mesh.hpp"
#include "mirror/rng.hpp"

using namespace mirror;

TEST_SUITE("mesh") {
  TEST_CASE("disk vertex count scales like area over h squared") {
    const auto c = preset_domain("disk").curve;
    for (double h : {0.1, 0.05}) {
      const TriMesh m = triangulate(c, h);
      const double expect = kPi / (h * h);
      CHECK(m.n_vertices() > 0.7 * expect);
      CHECK(m.n_vertices() < 1.3 * expect * 2 / std::sqrt(3.0));
      CHECK(m.min_angle() >= 15.0 * kPi / 180 - 1e-12);
    }
  }

  TEST_CASE("square is tiled exactly") {
    const auto c = preset_domain("square").curve;
    const TriMesh m = triangulate(c, 0.05);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-9));
    for (int t = 0; t < m.n_triangles(); ++t) CHECK(m.area(t) > 0.0);
    for (Vec2 corner : {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}}) {
      bool found = false;
      for (int i = 0; i < m.n_vertices(); ++i) found = found || (dist(m.vertices[i], corner) < 1e-12 && m.boundary[i]);
      CHECK(found);
    }
  }

  TEST_CASE("Delaunay audit of a random point set") {
    PhiloxStream r(51, 0);
    std::vector<Vec2> pts(600);
    for (auto& p : pts) p = {r.uniform(), r.uniform()};
    TriMesh m;
    m.vertices = pts;
    m.triangles = delaunay(pts);
    // Euler: 2n - 2 - hull vertices triangles; at least n.
    CHECK(m.n_triangles() >= static_cast<int>(pts.size()));
    CHECK(m.n_triangles() <= 2 * static_cast<int>(pts.size()) - 5);
    int bad = 0;
    for (int t = 0; t < m.n_triangles(); ++t) {
      CHECK(m.area(t) > 0.0);
      for (int k = 0; k < static_cast<int>(pts.size()); k += 7) {
        const auto& T = m.triangles[t];
        if (k == T[0] || k == T[1] || k == T[2]) continue;
        bad += in_circumcircle(m, t, pts[k]);
      }
    }
    CHECK(bad == 0);
  }

  TEST_CASE("red refinement keeps coarse vertices and area") {
    const auto& c = fixtures::example1().curve;
    const TriMesh m0 = triangulate(c, 0.2);
    const TriMesh m1 = refine(m0, c);
    CHECK(m1.n_triangles() == 4 * m0.n_triangles());
    for (int i = 0; i < m0.n_vertices(); ++i) CHECK(m1.vertices[i] == m0.vertices[i]);
    CHECK(std::abs(m1.total_area() - c.area()) < std::abs(m0.total_area() - c.area()));
    CHECK(m1.total_area() == doctest::Approx(c.area()).epsilon(1e-3));
    for (int i = 0; i < m1.n_vertices(); ++i)
      if (m1.boundary[i]) CHECK(std::abs(c.radial_excess(m1.vertices[i])) < 1e-9);
  }

  TEST_CASE("prolongation and interpolation reproduce linear fields") {
    const auto& c = fixtures::example1().curve;
    const TriMesh m0 = triangulate(c, 0.2);
    const TriMesh m1 = refine(m0, c);
    auto f = [](Vec2 p) { return 2.0 - 0.7 * p.x + 1.3 * p.y; };
    std::vector<double> u0(m0.n_vertices());
    for (int i = 0; i < m0.n_vertices(); ++i) u0[i] = f(m0.vertices[i]);
    const auto u1 = prolong(m1, u0);
    for (int i = 0; i < m1.n_vertices(); ++i) {
      if (m1.boundary[i] && m1.parents[i][0] != m1.parents[i][1]) continue;  // moved onto the curve
      CHECK(u1[i] == doctest::Approx(f(m1.vertices[i])).epsilon(1e-12));
    }
    const MeshLocator loc(m0);
    PhiloxStream r(52, 0);
    int hits = 0;
    for (int k = 0; k < 500; ++k) {
      const Vec2 x{6 * r.uniform() - 3, 4 * r.uniform() - 2};
      std::array<double, 3> w;
      if (!loc.locate(x, &w)) continue;
      ++hits;
      CHECK(loc.interpolate(u0, x) == doctest::Approx(f(x)).epsilon(1e-10));
    }
    CHECK(hits > 200);
    CHECK_THROWS(loc.interpolate(u0, {10.0, 10.0}));
  }
}

TEST_SUITE("fem") {
  TEST_CASE("reference triangle element matrices") {
    double K[3][3], M[3][3];
    element_matrices({0, 0}, {1, 0}, {0, 1}, K, M);
    const double Kx[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(K[i][j] == doctest::Approx(Kx[i][j]).epsilon(1e-14));
        CHECK(M[i][j] == doctest::Approx((i == j ? 2.0 : 1.0) / 24.0).epsilon(1e-14));
      }
  }

  TEST_CASE("stiffness kills constants and mass integrates them") {
    const auto& c = fixtures::example1().curve;
    const TriMesh m = triangulate(c, 0.1);
    const FemSystem s = assemble_fem(m);
    std::vector<double> one(s.K.n, 1.0), y;
    s.K.matvec(one, y);
    for (double v : y) CHECK(std::abs(v) < 1e-12);
    s.M.matvec(one, y);
    CHECK(dot_serial(one, y) == doctest::Approx(m.total_area()).epsilon(1e-12));
    // Gradient energy of a linear field: |grad|^2 times area.
    std::vector<double> lin(s.K.n);
    for (int i = 0; i < s.K.n; ++i) lin[i] = 3.0 * m.vertices[i].x - 4.0 * m.vertices[i].y;
    s.K.matvec(lin, y);
    CHECK(dot_serial(lin, y) == doctest::Approx(25.0 * m.total_area()).epsilon(1e-10));
  }

  TEST_CASE("parallel assembly and products match the serial reference") {
    const auto& c = fixtures::example1().curve;
    const TriMesh m = refine(triangulate(c, 0.15), c);
    const FemSystem a = assemble_fem(m), b = assemble_fem_serial(m);
    REQUIRE(a.K.row_ptr == b.K.row_ptr);
    REQUIRE(a.K.col == b.K.col);
    for (size_t i = 0; i < a.K.val.size(); ++i) {
      CHECK(a.K.val[i] == doctest::Approx(b.K.val[i]).epsilon(1e-13));
      CHECK(a.M.val[i] == doctest::Approx(b.M.val[i]).epsilon(1e-13));
    }
    // Same summation order on every call.
    const FemSystem a2 = assemble_fem(m);
    CHECK(a.K.val == a2.K.val);
    CHECK(a.M.val == a2.M.val);
    std::vector<double> x(a.K.n), y1, y2;
    for (int i = 0; i < a.K.n; ++i) x[i] = std::sin(3 * m.vertices[i].x) + m.vertices[i].y;
    a.K.matvec(x, y1);
    a.K.matvec_serial(x, y2);
    CHECK(y1 == y2);
    CHECK(dot_par(x, y1) == doctest::Approx(dot_serial(x, y1)).epsilon(1e-12));
    const auto diag = a.K.diagonal();
    for (int i = 0; i < a.K.n; ++i) {
      CHECK(diag[i] > 0.0);
      CHECK(diag[i] == a.K.at(i, i));
    }
  }

  TEST_CASE("matrices are symmetric") {
    const auto c = preset_domain("disk").curve;
    const TriMesh m = triangulate(c, 0.15);
    const FemSystem s = assemble_fem(m);
    for (int i = 0; i < s.K.n; ++i)
      for (int k = s.K.row_ptr[i]; k < s.K.row_ptr[i + 1]; ++k) {
        const int j = s.K.col[k];
        CHECK(s.K.val[k] == doctest::Approx(s.K.at(j, i)).epsilon(1e-14));
        CHECK(s.M.val[k] == doctest::Approx(s.M.at(j, i)).epsilon(1e-14));
      }
  }
}
