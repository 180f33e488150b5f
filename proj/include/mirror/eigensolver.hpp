// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mirror/fem.hpp"

namespace mirror {

struct CgStats {
  int iterations = 0;
  double residual = 0.0;  // relative to |b|
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients; x holds the initial guess.
CgStats pcg(const CsrMatrix& A, const std::vector<double>& inv_diag, const std::vector<double>& b,
            std::vector<double>& x, double tol, int max_iter, bool parallel = true);

struct EigenOptions {
  int k = 3;            // pairs wanted, the constant included
  int guard = 3;        // extra block vectors
  double tol_mu = 1e-10;
  double tol_res = 1e-8;
  int max_iter = 10000;
  double cg_tol = 1e-12;
  bool parallel = true;
};

struct EigenResult {
  std::vector<double> mu;                   // ascending, mu[0] ~ 0
  std::vector<std::vector<double>> vectors; // M-orthonormal
  std::vector<double> residuals;            // |K v - mu M v| / |M v|
  double gram_error = 0.0;
  double sigma = 0.0;
  int iterations = 0;
  long cg_iterations = 0;
  std::vector<std::vector<double>> block;  // final Ritz block, guards included
};

// Smallest generalized eigenpairs of (K, M) by block inverse iteration on
// K + sigma M with the constant mode deflated.  A starting block (for
// example a prolonged coarse result) replaces the monomial default.
EigenResult eigen_smallest(const FemSystem& sys, const std::vector<Vec2>& coords,
                           const EigenOptions& opt = {},
                           const std::vector<std::vector<double>>* start = nullptr);

}  // namespace mirror
