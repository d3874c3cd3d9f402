#pragma once

#include <functional>
#include <span>

#include "ksd/types.hpp"

namespace ksd {

/// W1(Q, P) = integral |F_Q(x) - F(x)| dx for a one-dimensional weighted
/// sample Q and a target CDF F.
///
/// Integrates exactly piece by piece: between consecutive sample points the
/// empirical CDF is a constant c, the segment is split where F crosses c,
/// and each piece is integrated with composite 20-point Gauss-Legendre on
/// panels no wider than 0.25. Outside the
/// sample range the tails are integrated out to where F (1 - F) < 1e-12.
double univariate_wasserstein(const Sample& sample, const std::function<double(double)>& cdf);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of log(value) on log(n).
DecayFit decay_slope(std::span<const double> ns, std::span<const double> values);

}  // namespace ksd
