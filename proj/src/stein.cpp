#include "ksd/stein.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include "ksd/errors.hpp"
#include "ksd/summation.hpp"
#include "stein_terms.hpp"

namespace ksd {

namespace {

void check_pair(const Target& target, const Vector& x, const Vector& y) {
  if (x.size() != target.dim() || y.size() != target.dim()) {
    throw ArgumentError("Stein kernel arguments must have the target dimension " +
                        std::to_string(target.dim()));
  }
}

void check_sample(const Target& target, const Sample& sample) {
  if (sample.dim() != target.dim()) {
    throw ArgumentError("sample dimension " + std::to_string(sample.dim()) +
                        " does not match target dimension " + std::to_string(target.dim()));
  }
}

}  // namespace

std::string to_string(Norm norm) {
  switch (norm) {
    case Norm::kL1:
      return "l1";
    case Norm::kL2:
      return "l2";
    case Norm::kLInf:
      return "linf";
  }
  return "l2";
}

Norm parse_norm(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "l1") return Norm::kL1;
  if (lower == "l2") return Norm::kL2;
  if (lower == "linf" || lower == "l-inf" || lower == "inf") return Norm::kLInf;
  throw ArgumentError("unknown norm '" + text + "' (expected l1, l2 or linf)");
}

double apply_norm(const Vector& w, Norm norm) {
  switch (norm) {
    case Norm::kL1:
      return w.lpNorm<1>();
    case Norm::kL2:
      return w.norm();
    case Norm::kLInf:
      return w.lpNorm<Eigen::Infinity>();
  }
  return w.norm();
}

double stein_kernel_coord(const Target& target, const RadialKernel& kernel, int j, const Vector& x,
                          const Vector& y) {
  check_pair(target, x, y);
  if (j < 0 || j >= target.dim()) throw ArgumentError("coordinate index out of range");
  const Vector bx = target.score(x);
  const Vector by = target.score(y);
  const Profile p = kernel.profile(detail::squared_distance(x.data(), y.data(), target.dim()));
  return detail::stein_term(p, x[j] - y[j], bx[j], by[j]);
}

double stein_kernel_sum(const Target& target, const RadialKernel& kernel, const Vector& x,
                        const Vector& y) {
  check_pair(target, x, y);
  const Vector bx = target.score(x);
  const Vector by = target.score(y);
  return detail::stein_sum(kernel, x.data(), y.data(), bx.data(), by.data(), target.dim());
}

Vector stein_quadratic_forms(const Target& target, const RadialKernel& kernel,
                             const Sample& sample) {
  check_sample(target, sample);
  const PointMatrix& x = sample.points();
  const PointMatrix scores = target.scores(x);
  const Vector& q = sample.weights();
  const Eigen::Index n = sample.size();
  const int d = static_cast<int>(sample.dim());

  // row_totals(i, j) = q_i * (q_i k0^j(x_i, x_i) + 2 sum_{i' > i} q_i' k0^j(x_i, x_i')).
  // Rows are independent, so the parallel schedule cannot change any value.
  PointMatrix row_totals(n, d);
#pragma omp parallel
  {
    // Coordinate-major scratch: terms[j * n + m] holds coordinate j of pair m.
    std::vector<double> terms(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    std::vector<double> pair(static_cast<std::size_t>(d));
#pragma omp for schedule(dynamic, 8)
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index count = n - i - 1;
      for (Eigen::Index m = 0; m < count; ++m) {
        const Eigen::Index k = i + 1 + m;
        detail::stein_terms(kernel, x.row(i).data(), x.row(k).data(), scores.row(i).data(),
                            scores.row(k).data(), d, pair.data());
        for (int j = 0; j < d; ++j) {
          terms[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(m)] = q[k] * pair[static_cast<std::size_t>(j)];
        }
      }
      detail::stein_terms(kernel, x.row(i).data(), x.row(i).data(), scores.row(i).data(),
                          scores.row(i).data(), d, pair.data());
      for (int j = 0; j < d; ++j) {
        const std::span<const double> row(
            terms.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(n),
            static_cast<std::size_t>(count));
        const double off_diagonal = pairwise_sum(row);
        row_totals(i, j) = q[i] * (q[i] * pair[static_cast<std::size_t>(j)] + 2.0 * off_diagonal);
      }
    }
  }

  Vector forms(d);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = row_totals(i, j);
    forms[j] = pairwise_sum(column);
  }
  return forms;
}

Eigen::MatrixXd stein_kernel_matrix(const Target& target, const RadialKernel& kernel,
                                    const PointMatrix& x, const GramOptions& options) {
  if (x.cols() != target.dim()) {
    throw ArgumentError("point dimension " + std::to_string(x.cols()) +
                        " does not match target dimension " + std::to_string(target.dim()));
  }
  const Eigen::Index n = x.rows();
  const double bytes = static_cast<double>(n) * static_cast<double>(n) * sizeof(double);
  if (bytes > static_cast<double>(options.memory_budget_bytes)) {
    std::ostringstream msg;
    msg << "Stein Gram matrix for n=" << n << " needs " << bytes << " bytes; the memory budget is "
        << options.memory_budget_bytes << " bytes";
    throw ResourceError(msg.str());
  }
  const PointMatrix scores = target.scores(x);
  const int d = static_cast<int>(x.cols());
  Eigen::MatrixXd matrix(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i; k < n; ++k) {
      matrix(i, k) = detail::stein_sum(kernel, x.row(i).data(), x.row(k).data(),
                                       scores.row(i).data(), scores.row(k).data(), d);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) matrix(k, i) = matrix(i, k);
  }
  return matrix;
}

SteinGram stein_gram(const Target& target, const RadialKernel& kernel, const Sample& sample,
                     const GramOptions& options) {
  check_sample(target, sample);
  SteinGram gram;
  gram.matrix = stein_kernel_matrix(target, kernel, sample.points(), options);
  gram.per_coord_quadratic = stein_quadratic_forms(target, kernel, sample);
  return gram;
}

KsdReport ksd(const Target& target, const RadialKernel& kernel, const Sample& sample, Norm norm) {
  const auto start = std::chrono::steady_clock::now();
  const Vector forms = stein_quadratic_forms(target, kernel, sample);
  KsdReport report;
  report.w.resize(forms.size());
  for (Eigen::Index j = 0; j < forms.size(); ++j) {
    if (!std::isfinite(forms[j])) {
      throw NumericalError("non-finite Stein quadratic form in coordinate " + std::to_string(j));
    }
    if (forms[j] < -kNegativeQuadraticTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "Stein quadratic form for coordinate " << j << " is " << forms[j]
          << " < 0; the kernel/target pairing is not positive semidefinite";
      throw NumericalError(msg.str());
    }
    report.w[j] = std::sqrt(std::max(forms[j], 0.0));
  }
  report.norm = norm;
  report.value = apply_norm(report.w, norm);
  report.n = sample.size();
  report.d = sample.dim();
  report.kernel_json = kernel.spec_json();
  report.target_json = target.spec_json();
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SteinWitness::SteinWitness(const Target& target, const RadialKernel& kernel, const Sample& sample)
    : target_(target),
      kernel_(kernel),
      points_(sample.points()),
      scores_(target.scores(sample.points())),
      weights_(sample.weights()),
      discrepancy_(ksd(target, kernel, sample, Norm::kL2).value) {
  if (!(discrepancy_ > 0.0)) {
    throw DegenerateInputError("kernel Stein discrepancy is zero; Stein functions are undefined");
  }
}

double SteinWitness::stein_function(int j, const Vector& y) const {
  if (y.size() != points_.cols()) throw ArgumentError("evaluation point has the wrong dimension");
  if (j < 0 || j >= y.size()) throw ArgumentError("coordinate index out of range");
  const int d = static_cast<int>(points_.cols());
  std::vector<double> terms(static_cast<std::size_t>(points_.rows()));
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    const Profile p =
        kernel_.profile(detail::squared_distance(points_.row(i).data(), y.data(), d));
    const double grad_x = 2.0 * (points_(i, j) - y[j]) * p.d1;
    terms[static_cast<std::size_t>(i)] = weights_[i] * (scores_(i, j) * p.f + grad_x);
  }
  return pairwise_sum(terms) / discrepancy_;
}

double SteinWitness::test_function(const Vector& y) const {
  if (y.size() != points_.cols()) throw ArgumentError("evaluation point has the wrong dimension");
  const int d = static_cast<int>(points_.cols());
  const Vector by = target_.score(y);
  std::vector<double> terms(static_cast<std::size_t>(points_.rows()));
  for (Eigen::Index i = 0; i < points_.rows(); ++i) {
    terms[static_cast<std::size_t>(i)] =
        weights_[i] *
        detail::stein_sum(kernel_, points_.row(i).data(), y.data(), scores_.row(i).data(),
                          by.data(), d);
  }
  return pairwise_sum(terms) / discrepancy_;
}

double optimal_stein_function(const Target& target, const RadialKernel& kernel,
                              const Sample& sample, int j, const Vector& y) {
  return SteinWitness(target, kernel, sample).stein_function(j, y);
}

double discriminating_test(const Target& target, const RadialKernel& kernel, const Sample& sample,
                           const Vector& y) {
  return SteinWitness(target, kernel, sample).test_function(y);
}

}  // namespace ksd
