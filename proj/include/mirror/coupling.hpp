// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"
#include "mirror/lyapunov.hpp"
#include "mirror/rng.hpp"
#include "mirror/stats.hpp"

namespace mirror {

struct SimConfig {
  double dt = 1e-4;
  double t_max = 1.0;
  // Nonpositive selects 3 sqrt(dt).
  double eps_couple = 0.0;
  std::uint64_t seed = 1;
  // 0 disables path recording.
  int record_stride = 0;
  bool stop_on_exit = false;
  bool diagnostics = true;

  double coupling_radius() const;
};

struct ReflectStep {
  Vec2 x;
  double dl = 0.0;
  std::optional<Vec2> n;  // push direction, set only when the step was projected
};

// Euler step followed by nearest-point projection onto the closed domain.
ReflectStep step_reflected(const BoundaryCurve& curve, Vec2 x, Vec2 dW);

struct CouplingState {
  double t = 0.0;
  Vec2 X;
  Vec2 Y;
  Vec2 m;       // (Y - X) / V
  Vec2 anchor;  // a point of the mirror
  double V = 0.0;
  double theta = 0.0;
  std::optional<UPoint> U;
  std::optional<Chord> chord;  // set with U
  double absL = 0.0;
  double absM = 0.0;
  bool coupled = false;
  // Running -2 sum m.dW and the discrete convexity correction; together
  // they bound V from above.
  double wbar = 0.0;
  double vcorr = 0.0;
  double V0 = 0.0;
};

// Without special points the chart position U is not tracked.
CouplingState make_state(const BoundaryCurve& curve, const SpecialPoints* sp, Vec2 x, Vec2 y);

// Running sums comparing one-step increments with the drift formulas.
struct DriftSums {
  long steps = 0;
  long push_steps = 0;
  long interior_dl = 0;  // interior steps that reported local time (must stay 0)
  double res_u = 0.0;
  double abs_du = 0.0;
  double res_theta = 0.0;
  double abs_dtheta = 0.0;
  long bound_checks = 0;
  long bound_violations = 0;
  double max_bound_violation = 0.0;
  long reflection_checks = 0;
  double max_reflection_error = 0.0;
  double max_bisector_error = 0.0;

  void merge(const DriftSums& o);
  double u_residual() const { return abs_du > 0 ? res_u / abs_du : 0.0; }
  double theta_residual() const { return abs_dtheta > 0 ? res_theta / abs_dtheta : 0.0; }
};

CouplingState step_coupling(const BoundaryCurve& curve, const SpecialPoints* sp,
                            const CouplingState& s, Vec2 dW, double dt, double eps_couple,
                            DriftSums* sums = nullptr);

struct PathRecord {
  std::vector<CouplingState> samples;
  std::optional<double> zeta;
  std::optional<double> exit_time;  // first time U leaves the set or becomes undefined
  bool u_undefined_exit = false;
  bool order_violated = false;  // e1.(Y - X) <= 0 before coupling
  CouplingState final;
  DriftSums drift;
};

PathRecord simulate(const BoundaryCurve& curve, const LyapunovSet* lset, Vec2 x, Vec2 y,
                    const SimConfig& cfg, std::uint64_t stream = 0);

// Plain reflected Brownian motion; returns the position at t_max.
Vec2 simulate_rbm(const BoundaryCurve& curve, Vec2 x, const SimConfig& cfg, std::uint64_t stream);

struct StartPair {
  Vec2 x;
  Vec2 y;
};

// Deterministic starting pairs whose mirrors map into the interior of the set.
std::vector<StartPair> starts_in_T(const BoundaryCurve& curve, const LyapunovSet& lset, int count,
                                   std::uint64_t seed);
// Pairs whose chart position lies outside the set, so outside T.
std::vector<StartPair> starts_outside_T(const BoundaryCurve& curve, const LyapunovSet& lset,
                                        int count, std::uint64_t seed);

struct LadderLevel {
  double dt = 0.0;
  long n_paths = 0;
  long n_exited = 0;
  long n_undefined = 0;
  long n_coupled = 0;
  long n_order_violated = 0;
  double exit_fraction = 0.0;
  double exit_se = 0.0;
  double mean_zeta = 0.0;
  DriftSums drift;
};

struct InvarianceReport {
  std::vector<LadderLevel> levels;
  bool nonincreasing = false;        // within binomial error
  bool strictly_decreasing = false;  // with 95% separation
};

InvarianceReport invariance_mc(const BoundaryCurve& curve, const LyapunovSet& lset,
                               const std::vector<StartPair>& starts, const std::vector<double>& dts,
                               double t_max, int paths_per_start, std::uint64_t seed);
InvarianceReport invariance_mc_serial(const BoundaryCurve& curve, const LyapunovSet& lset,
                                      const std::vector<StartPair>& starts,
                                      const std::vector<double>& dts, double t_max,
                                      int paths_per_start, std::uint64_t seed);

struct DriftReport {
  std::vector<double> dts;
  std::vector<double> u_residual;
  std::vector<double> theta_residual;
  double u_order = 0.0;
  double theta_order = 0.0;
};
DriftReport drift_diagnostic(const InvarianceReport& rep);

struct MarginalReport {
  int n_paths = 0;
  // Per coordinate: coupling X and Y marginals against the reference law.
  KsResult X[2];
  KsResult Y[2];
  double min_p() const;
};

// Reference is an independent reflected Brownian motion from x unless a
// coordinate CDF is supplied (used for both coordinates).
MarginalReport marginal_law_test(const BoundaryCurve& curve, Vec2 x, Vec2 y, const SimConfig& cfg,
                                 int n_paths,
                                 const std::function<double(double)>* coordinate_cdf = nullptr);

struct SeparationEstimate {
  double c1 = 0.0;
  double p1 = 0.0;
  long min_survivors = 0;
  std::vector<double> c1_per_start;
};

SeparationEstimate estimate_separation(const BoundaryCurve& curve, const LyapunovSet& lset,
                                       const std::vector<StartPair>& starts, const SimConfig& cfg,
                                       int n_paths);

nlohmann::json invariance_json(const InvarianceReport& rep);

}  // namespace mirror
