// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/fem.hpp"

#include <algorithm>

#include "mirror/errors.hpp"

namespace mirror {

void CsrMatrix::matvec(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

void CsrMatrix::matvec_serial(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::at(int i, int j) const {
  const auto b = col.begin() + row_ptr[i], e = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(b, e, j);
  return it != e && *it == j ? val[it - col.begin()] : 0.0;
}

void element_matrices(Vec2 a, Vec2 b, Vec2 c, double K[3][3], double M[3][3]) {
  const Vec2 v[3] = {a, b, c};
  const double area = 0.5 * cross(b - a, c - a);
  // Gradients of the barycentric functions are perp(opposite edge)/(2A).
  Vec2 g[3];
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = v[(i + 2) % 3] - v[(i + 1) % 3];
    g[i] = Vec2{-e.y, e.x} / (2.0 * area);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      K[i][j] = area * dot(g[i], g[j]);
      M[i][j] = area / 12.0 * (i == j ? 2.0 : 1.0);
    }
  }
}

namespace {

void check_triangles(const TriMesh& mesh) {
  const double floor = 1e-14 * mesh.h * mesh.h;
  for (int t = 0; t < mesh.n_triangles(); ++t)
    if (!(mesh.area(t) > floor)) throw Error(Errc::DegenerateTriangle, "triangle " + std::to_string(t));
}

// Sorted column pattern including the diagonal.
void build_pattern(const TriMesh& mesh, CsrMatrix& A) {
  const int n = mesh.n_vertices();
  std::vector<std::vector<int>> adj(n);
  for (const auto& T : mesh.triangles)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) adj[T[i]].push_back(T[j]);
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  A.col.clear();
  for (int i = 0; i < n; ++i) {
    auto& r = adj[i];
    r.push_back(i);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    A.row_ptr[i + 1] = A.row_ptr[i] + static_cast<int>(r.size());
    A.col.insert(A.col.end(), r.begin(), r.end());
  }
  A.val.assign(A.col.size(), 0.0);
}

int slot(const CsrMatrix& A, int i, int j) {
  const auto b = A.col.begin() + A.row_ptr[i], e = A.col.begin() + A.row_ptr[i + 1];
  return static_cast<int>(std::lower_bound(b, e, j) - A.col.begin());
}

}  // namespace

FemSystem assemble_fem(const TriMesh& mesh) {
  check_triangles(mesh);
  FemSystem s;
  build_pattern(mesh, s.K);
  s.M = s.K;
  const int n = mesh.n_vertices();
  std::vector<int> inc_ptr(n + 1, 0), inc;
  for (const auto& T : mesh.triangles)
    for (int v : T) ++inc_ptr[v + 1];
  for (int i = 0; i < n; ++i) inc_ptr[i + 1] += inc_ptr[i];
  inc.resize(inc_ptr[n]);
  {
    std::vector<int> fill(inc_ptr.begin(), inc_ptr.end() - 1);
    for (int t = 0; t < mesh.n_triangles(); ++t)
      for (int v : mesh.triangles[t]) inc[fill[v]++] = t;
  }
#pragma omp parallel for schedule(dynamic, 256)
  for (int i = 0; i < n; ++i) {
    for (int k = inc_ptr[i]; k < inc_ptr[i + 1]; ++k) {
      const auto& T = mesh.triangles[inc[k]];
      double Ke[3][3], Me[3][3];
      element_matrices(mesh.vertices[T[0]], mesh.vertices[T[1]], mesh.vertices[T[2]], Ke, Me);
      const int li = T[0] == i ? 0 : (T[1] == i ? 1 : 2);
      for (int lj = 0; lj < 3; ++lj) {
        const int p = slot(s.K, i, T[lj]);
        s.K.val[p] += Ke[li][lj];
        s.M.val[p] += Me[li][lj];
      }
    }
  }
  return s;
}

FemSystem assemble_fem_serial(const TriMesh& mesh) {
  check_triangles(mesh);
  FemSystem s;
  build_pattern(mesh, s.K);
  s.M = s.K;
  for (const auto& T : mesh.triangles) {
    double Ke[3][3], Me[3][3];
    element_matrices(mesh.vertices[T[0]], mesh.vertices[T[1]], mesh.vertices[T[2]], Ke, Me);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const int p = slot(s.K, T[a], T[b]);
        s.K.val[p] += Ke[a][b];
        s.M.val[p] += Me[a][b];
      }
    }
  }
  return s;
}

CsrMatrix shifted(const FemSystem& sys, double sigma) {
  CsrMatrix A = sys.K;
  for (size_t k = 0; k < A.val.size(); ++k) A.val[k] += sigma * sys.M.val[k];
  return A;
}

double dot_serial(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dot_par(const std::vector<double>& a, const std::vector<double>& b) {
  // Fixed chunks summed in order keep the result independent of threads.
  constexpr long kChunk = 4096;
  const long n = static_cast<long>(a.size());
  const long nc = (n + kChunk - 1) / kChunk;
  std::vector<double> part(nc, 0.0);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c) {
    double s = 0.0;
    for (long i = c * kChunk; i < std::min(n, (c + 1) * kChunk); ++i) s += a[i] * b[i];
    part[c] = s;
  }
  double s = 0.0;
  for (double v : part) s += v;
  return s;
}

}  // namespace mirror
