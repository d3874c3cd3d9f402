#pragma once

#include "ksd/kernels.hpp"

namespace ksd::detail {

inline double squared_distance(const double* x, const double* y, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    const double u = x[j] - y[j];
    s += u * u;
  }
  return s;
}

/// Coordinate Stein kernel from a shared profile. RadialKernel's derivative
/// methods use the same expressions. The two mixed terms are added first so
/// that swapping x and y only swaps the operands of that addition, which
/// keeps k0^j(x, y) == k0^j(y, x) bit for bit.
inline double stein_term(const Profile& p, double u, double bx, double by) {
  const double grad_x = 2.0 * u * p.d1;
  const double grad_y = -grad_x;
  const double cross = -2.0 * p.d1 - 4.0 * u * u * p.d2;
  return bx * by * p.f + (bx * grad_y + by * grad_x) + cross;
}

/// Writes k0^j(x, y) for every coordinate into out.
inline void stein_terms(const RadialKernel& kernel, const double* x, const double* y,
                        const double* bx, const double* by, int d, double* out) {
  const Profile p = kernel.profile(squared_distance(x, y, d));
  for (int j = 0; j < d; ++j) out[j] = stein_term(p, x[j] - y[j], bx[j], by[j]);
}

inline double stein_sum(const RadialKernel& kernel, const double* x, const double* y,
                        const double* bx, const double* by, int d) {
  const Profile p = kernel.profile(squared_distance(x, y, d));
  double acc = 0.0;
  for (int j = 0; j < d; ++j) acc += stein_term(p, x[j] - y[j], bx[j], by[j]);
  return acc;
}

}  // namespace ksd::detail
