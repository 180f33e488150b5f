// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/eigensolver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mirror/errors.hpp"

namespace mirror {

namespace {

using Vec = std::vector<double>;

double dotv(const Vec& a, const Vec& b, bool parallel) { return parallel ? dot_par(a, b) : dot_serial(a, b); }

void mv(const CsrMatrix& A, const Vec& x, Vec& y, bool parallel) {
  if (parallel) A.matvec(x, y);
  else A.matvec_serial(x, y);
}

}  // namespace

CgStats pcg(const CsrMatrix& A, const Vec& inv_diag, const Vec& b, Vec& x, double tol, int max_iter,
            bool parallel) {
  const int n = A.n;
  x.resize(n, 0.0);
  Vec r(n), z(n), p(n), q(n);
  mv(A, x, q, parallel);
  for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double bnorm = std::sqrt(dotv(b, b, parallel));
  CgStats st;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    st.converged = true;
    return st;
  }
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dotv(r, z, parallel);
  double rn = std::sqrt(dotv(r, r, parallel));
  for (int it = 0; it < max_iter; ++it) {
    if (rn <= tol * bnorm) {
      st.converged = true;
      break;
    }
    mv(A, p, q, parallel);
    const double alpha = rz / dotv(p, q, parallel);
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
      z[i] = inv_diag[i] * r[i];
    }
    const double rz_new = dotv(r, z, parallel);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rn = std::sqrt(dotv(r, r, parallel));
    st.iterations = it + 1;
  }
  st.converged = st.converged || rn <= tol * bnorm;
  st.residual = rn / bnorm;
  return st;
}

EigenResult eigen_smallest(const FemSystem& sys, const std::vector<Vec2>& coords, const EigenOptions& opt,
                           const std::vector<Vec>* start) {
  if (opt.k < 3) throw Error(Errc::InvalidInput, "at least three eigenpairs are required");
  const int n = sys.K.n;
  const bool par = opt.parallel;
  const int want = opt.k - 1;
  const int bs = std::min(want + opt.guard, n - 1);
  EigenResult res;

  double trM = 0.0;
  for (int i = 0; i < n; ++i) trM += sys.M.at(i, i);
  res.sigma = 1e-3 * trM;
  const CsrMatrix A = shifted(sys, res.sigma);
  Vec inv_diag = A.diagonal();
  for (double& d : inv_diag) d = 1.0 / d;

  // M-normalized constant.
  Vec c(n, 1.0), tmp(n), tmp2(n);
  mv(sys.M, c, tmp, par);
  const double cMc = dotv(c, tmp, par);
  for (double& v : c) v /= std::sqrt(cMc);
  Vec Mc;
  mv(sys.M, c, Mc, par);
  auto deflate = [&](Vec& x) {
    const double a = dotv(Mc, x, par);
    for (int i = 0; i < n; ++i) x[i] -= a * c[i];
  };

  // Low-degree monomials in normalized coordinates as the starting block.
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& q : coords) {
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  const Vec2 mid = (lo + hi) * 0.5;
  const double sc = 2.0 / std::max(hi.x - lo.x, hi.y - lo.y);
  std::vector<Vec> X(bs, Vec(n));
  for (int j = 0; j < bs; ++j) {
    int deg = 1, idx = j;
    while (idx > deg) idx -= ++deg;
    for (int i = 0; i < n; ++i) {
      const double x = (coords[i].x - mid.x) * sc, y = (coords[i].y - mid.y) * sc;
      X[j][i] = std::pow(x, deg - idx) * std::pow(y, idx) + 1e-3 * std::sin(7.3 * (j + 1) * x + 3.1 * y);
    }
    if (start && j < static_cast<int>(start->size()) && static_cast<int>((*start)[j].size()) == n)
      X[j] = (*start)[j];
    deflate(X[j]);
  }

  std::vector<double> theta(bs, 0.0), prev(bs, 0.0);
  std::vector<char> locked(bs, 0);
  std::vector<Vec> Y(bs), KX(bs), MX(bs);
  bool first = true;
  for (int it = 1; it <= opt.max_iter; ++it) {
    if (!first) {
      for (int j = 0; j < bs; ++j) {
        if (locked[j]) {
          Y[j] = X[j];
          continue;
        }
        mv(sys.M, X[j], tmp, par);
        Vec y(n);
        const double w = 1.0 / (theta[j] + res.sigma);
        for (int i = 0; i < n; ++i) y[i] = X[j][i] * w;
        const CgStats st = pcg(A, inv_diag, tmp, y, opt.cg_tol, 20 * n + 100, par);
        res.cg_iterations += st.iterations;
        deflate(y);
        Y[j] = std::move(y);
      }
    } else {
      Y = X;
    }
    // Rayleigh-Ritz on span(Y).
    Eigen::MatrixXd Kp(bs, bs), Mp(bs, bs);
    for (int j = 0; j < bs; ++j) {
      mv(sys.K, Y[j], KX[j], par);
      mv(sys.M, Y[j], MX[j], par);
    }
    for (int a = 0; a < bs; ++a) {
      for (int b = a; b < bs; ++b) {
        Kp(a, b) = Kp(b, a) = dotv(Y[a], KX[b], par);
        Mp(a, b) = Mp(b, a) = dotv(Y[a], MX[b], par);
      }
    }
    Kp = 0.5 * (Kp + Kp.transpose());
    Mp = 0.5 * (Mp + Mp.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kp, Mp);
    if (ges.info() != Eigen::Success) throw Error(Errc::NoConvergence, "projected eigenproblem failed");
    const Eigen::MatrixXd C = ges.eigenvectors();
    std::vector<Vec> Xn(bs, Vec(n, 0.0)), KXn(bs, Vec(n, 0.0)), MXn(bs, Vec(n, 0.0));
    for (int j = 0; j < bs; ++j) {
      for (int a = 0; a < bs; ++a) {
        const double w = C(a, j);
        for (int i = 0; i < n; ++i) {
          Xn[j][i] += w * Y[a][i];
          KXn[j][i] += w * KX[a][i];
          MXn[j][i] += w * MX[a][i];
        }
      }
      prev[j] = theta[j];
      theta[j] = ges.eigenvalues()(j);
    }
    X = std::move(Xn);
    res.iterations = it;
    res.residuals.assign(want, 0.0);
    bool done = !first;
    for (int j = 0; j < bs; ++j) {
      for (int i = 0; i < n; ++i) tmp2[i] = KXn[j][i] - theta[j] * MXn[j][i];
      const double r = std::sqrt(dotv(tmp2, tmp2, par) / dotv(MXn[j], MXn[j], par));
      const double dmu = std::abs(theta[j] - prev[j]) / std::max(std::abs(theta[j]), 1e-300);
      const bool ok = !first && r < opt.tol_res && dmu < opt.tol_mu;
      if (j < want) {
        res.residuals[j] = r;
        done = done && ok;
      }
      locked[j] = ok && j < want;
    }
    first = false;
    if (done) break;
    if (it == opt.max_iter) throw Error(Errc::NoConvergence, "block inverse iteration hit the iteration cap");
  }

  res.block = X;
  // Deterministic sign: positive correlation with a generic linear field.
  res.mu.push_back(0.0);
  mv(sys.K, c, tmp, par);
  res.mu[0] = dotv(c, tmp, par);
  res.vectors.push_back(c);
  Vec lin(n);
  for (int i = 0; i < n; ++i) lin[i] = coords[i].x + 0.5 * coords[i].y;
  mv(sys.M, lin, tmp2, par);
  for (int j = 0; j < want; ++j) {
    if (dotv(X[j], tmp2, par) < 0)
      for (double& v : X[j]) v = -v;
    res.mu.push_back(theta[j]);
    res.vectors.push_back(X[j]);
  }
  res.residuals.insert(res.residuals.begin(), 0.0);
  {
    mv(sys.K, c, tmp, par);
    res.residuals[0] = std::sqrt(dotv(tmp, tmp, par) / dotv(Mc, Mc, par));
  }
  double g = 0.0;
  for (size_t a = 0; a < res.vectors.size(); ++a) {
    mv(sys.M, res.vectors[a], tmp, par);
    for (size_t b = 0; b < res.vectors.size(); ++b)
      g = std::max(g, std::abs(dotv(res.vectors[b], tmp, par) - (a == b ? 1.0 : 0.0)));
  }
  res.gram_error = g;
  return res;
}

}  // namespace mirror
