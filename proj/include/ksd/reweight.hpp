#pragma once

#include "ksd/kernels.hpp"
#include "ksd/stein.hpp"
#include "ksd/targets.hpp"
#include "ksd/types.hpp"

namespace ksd {

struct ReweightOptions {
  int max_iters = 5000;
  /// Stop once an accepted step lowers the objective by less than tol * objective.
  double tol = 1e-10;
  GramOptions gram;
};

struct ReweightResult {
  Vector weights;
  /// q^T K0 q at the returned weights.
  double objective = 0.0;
  /// q^T K0 q at uniform weights, for reference.
  double uniform_objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes q^T K0 q over the probability simplex.
///
/// Exponentiated gradient from uniform weights:
///   q <- q * exp(-eta * 2 K0 q), renormalized.
/// The first trial step is eta0 = 1 / (2 max_i K0_ii); later iterations
/// start from twice the last accepted step. Rejected steps halve eta, so the
/// objective never increases across accepted iterations.
ReweightResult bbis_weights(const Target& target, const RadialKernel& kernel,
                            const PointMatrix& points, const ReweightOptions& options = {});

/// Same solver on a precomputed symmetric PSD matrix.
ReweightResult minimize_simplex_quadratic(const Eigen::MatrixXd& gram,
                                          const ReweightOptions& options = {});

/// (1/d) |true_mean - sum_i w_i x_i|^2.
double mean_mse(const Vector& weights, const PointMatrix& points, const Vector& true_mean);

}  // namespace ksd
