// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "json.hpp"
#include "mirror/coupling.hpp"
#include "mirror/eigensolver.hpp"
#include "mirror/mesh.hpp"

namespace mirror {

enum class Multiplicity { Simple, Double, Unresolved };
const char* to_string(Multiplicity m);

struct MeshLevel {
  double h = 0.0;  // nominal size of this level
  TriMesh mesh;
  EigenResult eig;
  double gap_ratio = 0.0;  // (mu3 - mu2) / mu2 at this level
};

// Eigenvalues of -Laplace with Neumann conditions on a nested mesh ladder.
// The generator of the reflected motion is half of it.
struct EigenReport {
  std::vector<MeshLevel> levels;  // coarse to fine
  std::vector<double> mu;         // finest level
  std::vector<double> mu_ext;     // Richardson, order 2
  std::vector<double> mu_err;     // |fine - middle| / 3
  double gap_ratio = 0.0;         // from the extrapolated values
  double gap_error = 0.0;
  double order = 0.0;  // fitted convergence order of mu2
  Multiplicity verdict = Multiplicity::Unresolved;

  const MeshLevel& finest() const { return levels.back(); }
};

struct LadderOptions {
  double h = 0.1;
  int levels = 3;
  MeshOptions mesh;
  EigenOptions eig;
};

// Base mesh at size h refined levels-1 times; each level starts from the
// prolonged Ritz block of the previous one.
EigenReport eigen_ladder(const BoundaryCurve& curve, const LadderOptions& opt = {});
Multiplicity classify(double gap_ratio, double gap_error);

// Fraction of pairs with psi(y) >= psi(x) - tol.
struct MonotonicityReport {
  long n_pairs = 0;
  long n_ok = 0;
  double fraction = 0.0;
  double worst_violation = 0.0;  // largest psi(x) - psi(y), or 0
  double tol = 0.0;
  int sign = 1;  // orientation of psi that maximizes the fraction
};

struct SignReport {
  int n_left = 0;
  int n_right = 0;
  int bad_left = 0;
  int bad_right = 0;
  double bad_fraction = 0.0;
  double tol = 0.0;
  int sign = 1;  // s psi >= -tol on D_L, s psi <= tol on D_R
  bool opposite_to_monotone = false;
};

struct ConeReport {
  double lo = 0.0;
  double hi = 0.0;
  double tol_angle = 0.0;
  int n_triangles = 0;
  int n_ok = 0;
  double fraction = 0.0;
  double worst_excess = 0.0;  // radians outside [lo, hi]
  std::vector<int> violations;
};

struct HotSpots {
  int argmax = -1;
  int argmin = -1;
  Vec2 xmax;
  Vec2 xmin;
  bool max_on_boundary = false;
  bool min_on_boundary = false;
};

struct NodalLine {
  std::vector<std::vector<Vec2>> polylines;
  int n_points = 0;
  int in_left = 0;   // points inside D_L beyond tol
  int in_right = 0;
};

struct AnalyzeOptions {
  int pairs = 10000;
  std::uint64_t seed = 1;
  double tol_angle = 0.0;
  // Negative selects the Richardson error of psi.
  double tol_mono = -1.0;
};

struct AnalysisReport {
  double tol_mono = 0.0;
  bool have_regions = false;  // special points available
  MonotonicityReport mono;
  SignReport sign;
  ConeReport cone;
  std::vector<HotSpots> hot;  // per ladder level
  NodalLine nodal;
};

// Max-norm difference of the second eigenvector on the two finest levels
// after sign alignment, divided by 3.
double psi_richardson_error(const EigenReport& rep);

MonotonicityReport monotone_fraction(const TriMesh& mesh, const std::vector<double>& psi,
                                     const std::vector<StartPair>& pairs, double tol);
HotSpots hot_spots(const TriMesh& mesh, const std::vector<double>& psi);
NodalLine nodal_line(const TriMesh& mesh, const std::vector<double>& psi);

// Uniform pairs in the domain accepted by pair_in_T.  An optional filter
// restricts the points further (for example to a mesh).
std::vector<StartPair> sample_pairs_in_T(const BoundaryCurve& curve, const LyapunovSet& lset,
                                         int count, std::uint64_t seed,
                                         const std::function<bool(Vec2)>& keep = {});

// Throws MultiplicityUnresolved unless the verdict is simple.  Without a
// Lyapunov set only hot spots and the nodal line are filled.
AnalysisReport analyze_eigenfunction(const BoundaryCurve& curve, const LyapunovSet* lset,
                                     const EigenReport& rep, const AnalyzeOptions& opt = {});

// Smooth radial bump exp(1 - 1/(1 - r^2/R^2)), peak value amplitude.
struct Bump {
  Vec2 center;
  double radius = 1.0;
  double amplitude = 1.0;
  double operator()(Vec2 x) const;
};

struct HeatOptions {
  double h = 0.1;          // coarse mesh; the fine one is its refinement
  double dt = 2e-3;        // coarse time step; the fine run uses dt / 2
  SimConfig mc;            // reflected Euler settings for the Monte Carlo side
  int mc_paths = 10000;
};

struct HeatRow {
  Vec2 x;
  double f0 = 0.0;
  double fem = 0.0;
  double fem_coarse = 0.0;
  double mesh_error = 0.0;  // |fine - coarse|
  double mc = 0.0;
  double mc_se = 0.0;
  double diff = 0.0;
  bool pass = false;  // diff <= 3 (mc_se + mesh_error)
};

struct HeatReport {
  double t = 0.0;
  std::vector<HeatRow> rows;
  bool all_pass = false;
};

// Implicit Euler for u_t = Laplace(u) / 2 with Neumann conditions against
// the Monte Carlo mean of f0(X(t)).
HeatReport heat_cross_check(const BoundaryCurve& curve, const Bump& f0, double t,
                            const std::vector<Vec2>& x_eval, const HeatOptions& opt = {});
// FEM part alone; returns the nodal solution at time t.
std::vector<double> heat_fem(const TriMesh& mesh, const std::vector<double>& u0, double t, double dt);

nlohmann::json eigen_json(const EigenReport& rep);
nlohmann::json analysis_json(const AnalysisReport& rep);
nlohmann::json heat_json(const HeatReport& rep);

}  // namespace mirror
