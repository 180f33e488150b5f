// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mirror/mesh.hpp"

namespace mirror {

struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  // y = A x.  Rows are independent, so both give identical results.
  void matvec(const std::vector<double>& x, std::vector<double>& y) const;
  void matvec_serial(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> diagonal() const;
  double at(int i, int j) const;
};

struct FemSystem {
  CsrMatrix K;  // stiffness
  CsrMatrix M;  // consistent mass, same pattern as K
};

// P1 element matrices of a counterclockwise triangle.
void element_matrices(Vec2 a, Vec2 b, Vec2 c, double K[3][3], double M[3][3]);

// Row-wise gather over incident triangles; the summation order per entry
// is fixed, so the result does not depend on the thread count.
FemSystem assemble_fem(const TriMesh& mesh);
// Classic element-by-element scatter.
FemSystem assemble_fem_serial(const TriMesh& mesh);

// Same pattern as K: K + sigma M.
CsrMatrix shifted(const FemSystem& sys, double sigma);

double dot_serial(const std::vector<double>& a, const std::vector<double>& b);
// Chunked; independent of the thread count.
double dot_par(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mirror
