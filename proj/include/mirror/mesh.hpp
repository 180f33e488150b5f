// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mirror/geometry.hpp"

namespace mirror {

struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<char> boundary;                 // per vertex
  std::vector<double> boundary_s;             // arclength of boundary vertices, NaN inside
  // Set by refine: the coarse edge each vertex came from (a == b for
  // inherited vertices).
  std::vector<std::array<int, 2>> parents;
  double h = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double area(int t) const;
  double total_area() const;
  double min_angle() const;  // radians
};

struct MeshOptions {
  std::uint64_t seed = 1;
  double jitter = 0.05;  // interior lattice jitter, times h
  double min_angle_deg = 15.0;
  int retries = 5;
};

// Delaunay triangulation of boundary samples and a jittered interior
// lattice.  Corners of the curve are always boundary vertices.
TriMesh triangulate(const BoundaryCurve& curve, double h, const MeshOptions& opt = {});

// Delaunay triangulation of a point set inside the returned hull.
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts);

// Red refinement: every triangle splits in four.  Boundary midpoints are
// placed on the curve at the arclength midpoint.
TriMesh refine(const TriMesh& mesh, const BoundaryCurve& curve);
// Linear interpolation of a coarse vertex field onto a refined mesh.
std::vector<double> prolong(const TriMesh& fine, const std::vector<double>& coarse);

// Uniform-bucket point location.
class MeshLocator {
 public:
  explicit MeshLocator(const TriMesh& mesh);
  // Triangle containing x and barycentric weights; points slightly outside
  // snap to the nearest triangle within tol.
  std::optional<int> locate(Vec2 x, std::array<double, 3>* bary, double tol = 1e-9) const;
  double interpolate(const std::vector<double>& f, Vec2 x) const;

 private:
  const TriMesh* mesh_;
  Vec2 lo_;
  double cell_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<int> start_;
  std::vector<int> items_;
};

// True when x lies strictly inside the circumcircle of triangle t.
bool in_circumcircle(const TriMesh& mesh, int t, Vec2 x);

}  // namespace mirror
