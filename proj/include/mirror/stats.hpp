// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace mirror {

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// Survival function of the Kolmogorov distribution.
double kolmogorov_q(double lambda);
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Linear interpolation between order statistics, q in [0, 1].
double quantile(std::vector<double> x, double q);
// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
double binomial_se(double p, long n);

}  // namespace mirror
