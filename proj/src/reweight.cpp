#include "ksd/reweight.hpp"

#include <algorithm>
#include <cmath>

#include "ksd/errors.hpp"

namespace ksd {

namespace {

double quadratic(const Eigen::MatrixXd& gram, const Vector& q) { return q.dot(gram * q); }

// q * exp(-eta * gradient), normalized in log space to avoid overflow.
Vector multiplicative_step(const Vector& log_q, const Vector& gradient, double eta) {
  Vector logits = log_q - eta * gradient;
  logits.array() -= logits.maxCoeff();
  Vector q = logits.array().exp();
  return q / q.sum();
}

}  // namespace

ReweightResult minimize_simplex_quadratic(const Eigen::MatrixXd& gram,
                                          const ReweightOptions& options) {
  const Eigen::Index n = gram.rows();
  if (n < 1 || gram.cols() != n) throw ArgumentError("reweighting needs a square nonempty matrix");
  if (options.max_iters < 0) throw ArgumentError("max_iters must be >= 0");
  if (!gram.allFinite()) throw NumericalError("Stein Gram matrix has non-finite entries");

  ReweightResult result;
  Vector q = Vector::Constant(n, 1.0 / static_cast<double>(n));
  double objective = quadratic(gram, q);
  result.uniform_objective = objective;
  if (!std::isfinite(objective)) throw NumericalError("non-finite reweighting objective");
  if (n == 1) {
    result.weights = q;
    result.objective = objective;
    result.converged = true;
    return result;
  }

  const double max_diagonal = gram.diagonal().maxCoeff();
  const double eta0 = max_diagonal > 0.0 ? 1.0 / (2.0 * max_diagonal) : 1.0;
  double eta = eta0;
  constexpr double kMinStep = 1e-300;

  int iter = 0;
  for (; iter < options.max_iters; ++iter) {
    const Vector gradient = 2.0 * (gram * q);
    const Vector log_q = q.array().log();
    bool accepted = false;
    Vector candidate;
    double candidate_objective = objective;
    while (eta > kMinStep) {
      candidate = multiplicative_step(log_q, gradient, eta);
      candidate_objective = quadratic(gram, candidate);
      if (!std::isfinite(candidate_objective)) {
        throw NumericalError("non-finite reweighting objective");
      }
      if (candidate_objective <= objective) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      // No decreasing step exists at machine precision: stationary.
      result.converged = true;
      break;
    }
    const double decrease = objective - candidate_objective;
    q = candidate;
    objective = candidate_objective;
    eta *= 2.0;
    if (decrease <= options.tol * std::abs(objective)) {
      result.converged = true;
      ++iter;
      break;
    }
  }
  result.weights = q;
  result.objective = objective;
  result.iterations = iter;
  return result;
}

ReweightResult bbis_weights(const Target& target, const RadialKernel& kernel,
                            const PointMatrix& points, const ReweightOptions& options) {
  if (points.rows() < 1) throw ArgumentError("reweighting needs at least one point");
  return minimize_simplex_quadratic(stein_kernel_matrix(target, kernel, points, options.gram),
                                    options);
}

double mean_mse(const Vector& weights, const PointMatrix& points, const Vector& true_mean) {
  if (weights.size() != points.rows()) throw ArgumentError("weight count does not match points");
  if (true_mean.size() != points.cols()) throw ArgumentError("mean dimension does not match points");
  const Vector estimate = points.transpose() * weights;
  return (true_mean - estimate).squaredNorm() / static_cast<double>(points.cols());
}

}  // namespace ksd
