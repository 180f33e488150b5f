// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/errors.hpp"
#include "mirror/rng.hpp"
#include "mirror/spectral.hpp"

using namespace mirror;

namespace {

const EigenReport& rect_report() {
  static const EigenReport rep = [] {
    LadderOptions o;
    o.h = 0.1;
    return eigen_ladder(preset_domain("rect-1x2").curve, o);
  }();
  return rep;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("rectangle eigenfunction is cos(pi y / 2)") {
    const auto& lv = rect_report().finest();
    const auto& psi = lv.eig.vectors[1];
    double num = 0, da = 0, db = 0;
    for (int i = 0; i < lv.mesh.n_vertices(); ++i) {
      const double g = std::cos(kPi * lv.mesh.vertices[i].y / 2);
      num += psi[i] * g;
      da += psi[i] * psi[i];
      db += g * g;
    }
    CHECK(std::abs(num) / std::sqrt(da * db) > 0.9999);
  }

  TEST_CASE("rectangle nodal line is the midline") {
    const auto& lv = rect_report().finest();
    const NodalLine nl = nodal_line(lv.mesh, lv.eig.vectors[1]);
    REQUIRE(nl.n_points > 10);
    for (const auto& pl : nl.polylines)
      for (const Vec2& p : pl) CHECK(std::abs(p.y - 1.0) < 0.01);
    const HotSpots hs = hot_spots(lv.mesh, lv.eig.vectors[1]);
    CHECK(hs.max_on_boundary);
    CHECK(hs.min_on_boundary);
    CHECK(std::abs(std::abs(hs.xmax.y - hs.xmin.y) - 2.0) < 1e-9);
  }

  TEST_CASE("monotone fraction ignores sign and scale") {
    const auto& lv = rect_report().finest();
    const auto& psi = lv.eig.vectors[1];
    PhiloxStream r(61, 0);
    std::vector<StartPair> pairs;
    for (int i = 0; i < 2000; ++i) {
      Vec2 a{r.uniform(), 2 * r.uniform()}, b{r.uniform(), 2 * r.uniform()};
      if (a.y > b.y) std::swap(a, b);
      pairs.push_back({a, b});
    }
    std::vector<double> neg(psi.size()), big(psi.size());
    for (size_t i = 0; i < psi.size(); ++i) {
      neg[i] = -psi[i];
      big[i] = 7.5 * psi[i];
    }
    const auto a = monotone_fraction(lv.mesh, psi, pairs, 1e-9);
    const auto b = monotone_fraction(lv.mesh, neg, pairs, 1e-9);
    const auto c = monotone_fraction(lv.mesh, big, pairs, 7.5e-9);
    CHECK(a.fraction == 1.0);
    CHECK(b.fraction == a.fraction);
    CHECK(c.fraction == a.fraction);
    CHECK(a.sign == -b.sign);
  }

  TEST_CASE("analysis refuses a multiple eigenvalue") {
    LadderOptions o;
    o.h = 0.05;
    const auto rep = eigen_ladder(preset_domain("square").curve, o);
    REQUIRE(rep.verdict != Multiplicity::Simple);
    try {
      analyze_eigenfunction(preset_domain("square").curve, nullptr, rep);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::MultiplicityUnresolved);
    }
  }

  TEST_CASE("analysis without special points fills hot spots and the nodal line") {
    const auto a = analyze_eigenfunction(preset_domain("rect-1x2").curve, nullptr, rect_report());
    CHECK_FALSE(a.have_regions);
    CHECK(a.hot.size() == rect_report().levels.size());
    for (const auto& h : a.hot) {
      CHECK(h.max_on_boundary);
      CHECK(h.min_on_boundary);
    }
    CHECK(a.nodal.n_points > 0);
    CHECK(a.tol_mono > 0.0);
    CHECK(a.tol_mono == psi_richardson_error(rect_report()));
  }

  TEST_CASE("pairs sampled in T are accepted by pair_in_T") {
    const auto& c = fixtures::example1().curve;
    const auto& ls = fixtures::example1_lset();
    const auto pairs = sample_pairs_in_T(c, ls, 200, 3);
    CHECK(pairs.size() == 200);
    for (const auto& p : pairs) {
      CHECK(pair_in_T(c, ls, p.x, p.y));
      CHECK(c.is_inside(p.x) != Inside::Outside);
    }
    const auto again = sample_pairs_in_T(c, ls, 200, 3);
    CHECK(again.front().x == pairs.front().x);
    CHECK(again.back().y == pairs.back().y);
  }

  TEST_CASE("eigen JSON carries the verdict") {
    const auto j = eigen_json(rect_report());
    CHECK(j.at("kind") == "eigen");
    CHECK(j.dump().find("simple") != std::string::npos);
  }
}
