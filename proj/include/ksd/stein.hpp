#pragma once

#include <cstddef>
#include <string>

#include "ksd/kernels.hpp"
#include "ksd/targets.hpp"
#include "ksd/types.hpp"

namespace ksd {

enum class Norm { kL1, kL2, kLInf };

std::string to_string(Norm norm);
/// Accepts "l1", "l2", "linf" (case-insensitive).
Norm parse_norm(const std::string& text);

/// Applies the chosen norm to a coordinate vector.
double apply_norm(const Vector& w, Norm norm);

/// k0^j(x, y) = b_j(x) b_j(y) k + b_j(x) d_{y_j} k + b_j(y) d_{x_j} k + d_{x_j} d_{y_j} k.
double stein_kernel_coord(const Target& target, const RadialKernel& kernel, int j, const Vector& x,
                          const Vector& y);

/// k0(x, y) = sum_j k0^j(x, y), sharing the profile evaluation across coordinates.
double stein_kernel_sum(const Target& target, const RadialKernel& kernel, const Vector& x,
                        const Vector& y);

struct GramOptions {
  /// Upper bound on the bytes a materialized n x n Gram matrix may occupy.
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

struct SteinGram {
  /// Entries k0(x_i, x_i') summed over coordinates; symmetric.
  Eigen::MatrixXd matrix;
  /// q^T K0^j q for each coordinate j.
  Vector per_coord_quadratic;
};

/// The n x n matrix of k0(x_i, x_i'), upper triangle computed and mirrored.
/// Throws ResourceError when n^2 doubles exceed the memory budget.
Eigen::MatrixXd stein_kernel_matrix(const Target& target, const RadialKernel& kernel,
                                    const PointMatrix& points, const GramOptions& options = {});

/// Materializes the summed Stein kernel matrix. Throws ResourceError when
/// n^2 doubles exceed the memory budget.
SteinGram stein_gram(const Target& target, const RadialKernel& kernel, const Sample& sample,
                     const GramOptions& options = {});

/// q^T K0^j q for every coordinate, streamed row by row without storing the
/// matrix. Each row's partial sums are formed independently and reduced with
/// a fixed pairwise tree, so the result is bitwise identical for any thread
/// count.
Vector stein_quadratic_forms(const Target& target, const RadialKernel& kernel,
                             const Sample& sample);

struct KsdReport {
  Vector w;
  Norm norm = Norm::kL2;
  double value = 0.0;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  std::string kernel_json;
  std::string target_json;
  double seconds = 0.0;
};

/// Quadratic forms above this negative threshold are roundoff and clamp to 0.
inline constexpr double kNegativeQuadraticTolerance = 1e-10;

/// Closed-form kernel Stein discrepancy ||w|| with w_j = sqrt(q^T K0^j q).
/// Throws NumericalError if some q^T K0^j q < -1e-10.
KsdReport ksd(const Target& target, const RadialKernel& kernel, const Sample& sample,
              Norm norm = Norm::kL2);

/// Maximizing Stein function g and its image h = T_P g for a fixed sample,
/// normalized by the L2 discrepancy. Computes the discrepancy once.
class SteinWitness {
 public:
  /// Throws DegenerateInputError if the discrepancy is zero.
  SteinWitness(const Target& target, const RadialKernel& kernel, const Sample& sample);

  [[nodiscard]] double discrepancy() const { return discrepancy_; }

  /// g_j(y) = sum_i q_i (b_j(x_i) k(x_i, y) + d_{x_j} k(x_i, y)) / KSD.
  [[nodiscard]] double stein_function(int j, const Vector& y) const;

  /// h(y) = sum_i q_i k0(x_i, y) / KSD.
  [[nodiscard]] double test_function(const Vector& y) const;

 private:
  Target target_;
  RadialKernel kernel_;
  PointMatrix points_;
  PointMatrix scores_;
  Vector weights_;
  double discrepancy_;
};

double optimal_stein_function(const Target& target, const RadialKernel& kernel,
                              const Sample& sample, int j, const Vector& y);

double discriminating_test(const Target& target, const RadialKernel& kernel, const Sample& sample,
                           const Vector& y);

}  // namespace ksd
