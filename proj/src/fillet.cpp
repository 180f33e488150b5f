// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>

#include "mirror/geometry.hpp"

namespace mirror {

namespace {

struct OffsetPoint {
  Vec2 c;   // point + rho * inward normal
  Vec2 dc;  // derivative in the piece parameter
};

OffsetPoint offset(const BoundaryPiece& p, double t, double rho) {
  const Vec2 v = p.d1(t);
  const double sp = norm(v);
  const Vec2 T = v / sp;
  const double kappa = cross(v, p.d2(t)) / (sp * sp * sp);
  return {p.eval(t) + perp(T) * rho, T * (sp * (1.0 - rho * kappa))};
}

Vec2 trimmed_point(const BoundaryPiece& p, double t) { return p.eval(t); }

}  // namespace

BoundaryCurve fillet_smooth(const BoundaryCurve& curve, double rho) {
  if (!(rho > 0.0)) throw Error(Errc::InvalidInput, "fillet radius must be positive");
  const auto& pieces = curve.pieces();
  const int n = static_cast<int>(pieces.size());
  const auto& cum = curve.cumulative_lengths();
  double shortest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) shortest = std::min(shortest, cum[k + 1] - cum[k]);
  if (!(rho < 0.5 * shortest)) throw Error(Errc::RhoTooLarge, "rho exceeds half the shortest piece");

  std::vector<double> lo(n), hi(n);
  for (int k = 0; k < n; ++k) {
    lo[k] = pieces[k].t_begin();
    hi[k] = pieces[k].t_end();
  }
  struct Fillet {
    bool present = false;
    Vec2 center;
    double from = 0.0, to = 0.0;
  };
  std::vector<Fillet> fillets(n);

  for (int k = 0; k < n; ++k) {
    if (curve.joint_at(cum[k]).smooth) continue;
    const auto& A = pieces[(k + n - 1) % n];
    const auto& B = pieces[k];
    const int ia = (k + n - 1) % n;
    const Vec2 te = normalized(A.d1(A.t_end()));
    const Vec2 ts = normalized(B.d1(B.t_begin()));
    const double phi = std::atan2(cross(te, ts), dot(te, ts));
    const double d = rho * std::tan(0.5 * phi);
    double ta = A.t_end() - d / A.speed(A.t_end());
    double tb = B.t_begin() + d / B.speed(B.t_begin());
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      const OffsetPoint oa = offset(A, ta, rho);
      const OffsetPoint ob = offset(B, tb, rho);
      const Vec2 F = oa.c - ob.c;
      if (norm(F) < 1e-14 * curve.diameter()) {
        ok = true;
        break;
      }
      // J = [oa.dc, -ob.dc]
      const double det = cross(oa.dc, -ob.dc);
      if (std::abs(det) < 1e-300) break;
      const double dta = cross(F, -ob.dc) / det;
      const double dtb = cross(oa.dc, F) / det;
      ta -= dta;
      tb -= dtb;
    }
    if (!ok) throw Error(Errc::RhoTooLarge, "fillet did not converge at joint " + std::to_string(k));
    if (ta <= lo[ia] || ta > A.t_end() || tb < B.t_begin() || tb >= hi[k])
      throw Error(Errc::RhoTooLarge, "fillet overruns a piece at joint " + std::to_string(k));
    hi[ia] = ta;
    lo[k] = tb;
    Fillet f;
    f.present = true;
    f.center = offset(A, ta, rho).c;
    f.from = angle_of(trimmed_point(A, ta) - f.center);
    f.to = f.from + wrap_2pi(angle_of(trimmed_point(B, tb) - f.center) - f.from);
    fillets[k] = f;
  }

  std::vector<BoundaryPiece> out;
  for (int k = 0; k < n; ++k) {
    if (fillets[k].present)
      out.push_back(BoundaryPiece::circle_arc(fillets[k].center, rho, fillets[k].from, fillets[k].to));
    const auto& p = pieces[k];
    if (lo[k] >= hi[k]) throw Error(Errc::RhoTooLarge, "piece consumed by fillets");
    if (p.kind == PieceKind::Segment) {
      out.push_back(BoundaryPiece::segment(p.eval(lo[k]), p.eval(hi[k])));
    } else {
      BoundaryPiece q = p;
      q.t0 = lo[k];
      q.t1 = hi[k];
      out.push_back(q);
    }
  }
  return BoundaryCurve::build(std::move(out), curve.tolerances());
}

}  // namespace mirror
