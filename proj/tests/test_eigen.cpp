// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/eigensolver.hpp"
#include "mirror/errors.hpp"
#include "mirror/spectral.hpp"

using namespace mirror;

namespace {

// J_n by its power series; accurate for the small arguments used here.
double bessel_j(int n, double x) {
  double term = std::pow(0.5 * x, n) / std::tgamma(n + 1.0), sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= -(0.25 * x * x) / (k * static_cast<double>(k + n));
    sum += term;
  }
  return sum;
}

// First positive zero of J1' by bisection on a bracket.
double first_j1_prime_zero() {
  auto f = [](double x) { return 0.5 * (bessel_j(0, x) - bessel_j(2, x)); };
  double lo = 1.0, hi = 2.5;
  REQUIRE(f(lo) * f(hi) < 0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

void check_solver_quality(const EigenReport& rep) {
  for (const auto& lv : rep.levels) {
    CHECK(lv.eig.gram_error < 1e-8);
    CHECK(std::abs(lv.eig.mu[0]) < 1e-8);
    for (size_t k = 1; k < lv.eig.residuals.size(); ++k) CHECK(lv.eig.residuals[k] < 1e-8);
  }
}

LadderOptions ladder(double h) {
  LadderOptions o;
  o.h = h;
  return o;
}

}  // namespace

TEST_SUITE("eigen") {
  TEST_CASE("Bessel oracle") {
    const double j = first_j1_prime_zero();
    CHECK(j == doctest::Approx(1.8411837813406593).epsilon(1e-12));
    // Independent check against the library Bessel function.
    const double d = 1e-6;
    CHECK(std::abs(std::cyl_bessel_j(1.0, j + d) - std::cyl_bessel_j(1.0, j - d)) / (2 * d) < 1e-8);
  }

  TEST_CASE("rectangle: simple second eigenvalue pi^2/4") {
    const auto rep = eigen_ladder(preset_domain("rect-1x2").curve, ladder(0.1));
    check_solver_quality(rep);
    CHECK(rep.mu_ext[1] == doctest::Approx(kPi * kPi / 4).epsilon(5e-3));
    CHECK(rep.mu_ext[2] == doctest::Approx(kPi * kPi).epsilon(5e-3));
    CHECK(rep.verdict == Multiplicity::Simple);
    CHECK(rep.order == doctest::Approx(2.0).epsilon(0.15));
    // Nested conforming spaces: eigenvalues decrease under refinement.
    for (size_t l = 1; l < rep.levels.size(); ++l)
      for (int k = 1; k < 3; ++k) CHECK(rep.levels[l].eig.mu[k] <= rep.levels[l - 1].eig.mu[k] + 1e-12);
    // The Richardson value lies below the finest Galerkin value.
    CHECK(rep.mu_ext[1] < rep.mu[1]);
  }

  TEST_CASE("square: double second eigenvalue") {
    const auto rep = eigen_ladder(preset_domain("square").curve, ladder(0.05));
    check_solver_quality(rep);
    CHECK(rep.mu_ext[1] == doctest::Approx(kPi * kPi).epsilon(5e-3));
    CHECK(rep.mu_ext[2] == doctest::Approx(kPi * kPi).epsilon(5e-3));
    CHECK(rep.verdict == Multiplicity::Double);
  }

  TEST_CASE("disk: double second eigenvalue j'11 squared") {
    const double j = first_j1_prime_zero();
    const auto rep = eigen_ladder(preset_domain("disk").curve, ladder(0.1));
    check_solver_quality(rep);
    CHECK(rep.mu_ext[1] == doctest::Approx(j * j).epsilon(5e-3));
    CHECK(rep.verdict == Multiplicity::Double);
  }

  TEST_CASE("ladder rejects a coarse base size") {
    try {
      eigen_ladder(preset_domain("square").curve, ladder(0.5));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvalidInput);
    }
  }

  TEST_CASE("classification thresholds") {
    CHECK(classify(1.0, 0.01) == Multiplicity::Simple);
    CHECK(classify(0.05, 0.01) == Multiplicity::Unresolved);
    CHECK(classify(0.005, 0.01) == Multiplicity::Double);
    CHECK(classify(-0.005, 0.01) == Multiplicity::Double);
    CHECK(to_string(Multiplicity::Simple) == std::string("simple"));
  }

  TEST_CASE("preconditioned CG solves a shifted system") {
    const auto c = preset_domain("disk").curve;
    const TriMesh m = triangulate(c, 0.1);
    const FemSystem s = assemble_fem(m);
    const CsrMatrix A = shifted(s, 1.0);
    std::vector<double> xs(A.n), b, inv = A.diagonal();
    for (int i = 0; i < A.n; ++i) xs[i] = std::cos(m.vertices[i].x + 2 * m.vertices[i].y);
    A.matvec(xs, b);
    for (double& v : inv) v = 1.0 / v;
    std::vector<double> x(A.n, 0.0);
    const CgStats st = pcg(A, inv, b, x, 1e-12, 5000);
    CHECK(st.converged);
    double err = 0;
    for (int i = 0; i < A.n; ++i) err = std::max(err, std::abs(x[i] - xs[i]));
    CHECK(err < 1e-9);
  }
}
