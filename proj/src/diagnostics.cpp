#include "ksd/diagnostics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "ksd/errors.hpp"

namespace ksd {

namespace {

constexpr double kTailMass = 1e-12;

// Widest panel handed to one 20-point Gauss-Legendre rule. The shipped CDFs
// vary on unit scale, so the rule is exact to roundoff on each panel.
constexpr double kMaxPanel = 0.25;

template <typename F>
double integrate(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  const auto panels = static_cast<long>(std::ceil((b - a) / kMaxPanel));
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (long p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double hi = p + 1 == panels ? b : lo + width;
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
  }
  return total;
}

// Point in [a, b] where cdf crosses level; assumes cdf(a) <= level <= cdf(b).
double crossing(const std::function<double(double)>& cdf, double level, double a, double b) {
  for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++iter) {
    const double mid = 0.5 * (a + b);
    if (cdf(mid) < level) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double tail_weight(double p) { return p * (1.0 - p); }

}  // namespace

double univariate_wasserstein(const Sample& sample, const std::function<double(double)>& cdf) {
  if (sample.dim() != 1) {
    throw ArgumentError("univariate Wasserstein needs a one-dimensional sample, got dimension " +
                        std::to_string(sample.dim()));
  }
  if (!cdf) throw ArgumentError("missing target CDF");

  const Eigen::Index n = sample.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return sample.points()(a, 0) < sample.points()(b, 0);
  });
  // Distinct breakpoints with the empirical CDF value just right of each.
  std::vector<double> knots;
  std::vector<double> levels;
  double cumulative = 0.0;
  for (Eigen::Index idx : order) {
    const double x = sample.points()(idx, 0);
    cumulative += sample.weights()[idx];
    if (!knots.empty() && knots.back() == x) {
      levels.back() = cumulative;
    } else {
      knots.push_back(x);
      levels.push_back(cumulative);
    }
  }
  levels.back() = 1.0;

  double total = 0.0;

  // Left tail: integral of F below the first knot.
  double lo = knots.front();
  for (double step = 1.0; cdf(lo) > 0.5 || tail_weight(cdf(lo)) >= kTailMass; step *= 2.0) {
    lo = knots.front() - step;
  }
  total += integrate([&](double t) { return cdf(t); }, lo, knots.front());

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    const double b = knots[k + 1];
    const double c = levels[k];
    auto gap = [&](double t) { return std::abs(c - cdf(t)); };
    const double fa = cdf(a);
    const double fb = cdf(b);
    if (fa < c && c < fb) {
      const double mid = crossing(cdf, c, a, b);
      total += integrate(gap, a, mid) + integrate(gap, mid, b);
    } else {
      total += integrate(gap, a, b);
    }
  }

  // Right tail: integral of 1 - F above the last knot.
  double hi = knots.back();
  for (double step = 1.0; cdf(hi) < 0.5 || tail_weight(cdf(hi)) >= kTailMass; step *= 2.0) {
    hi = knots.back() + step;
  }
  total += integrate([&](double t) { return 1.0 - cdf(t); }, knots.back(), hi);
  return total;
}

DecayFit decay_slope(std::span<const double> ns, std::span<const double> values) {
  if (ns.size() != values.size()) throw ArgumentError("decay fit needs equal-length inputs");
  if (ns.size() < 3) throw ArgumentError("decay fit needs at least three points");
  const std::size_t m = ns.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(ns[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(ns[i]) ||
        !std::isfinite(values[i])) {
      throw ArgumentError("decay fit needs positive finite inputs");
    }
    lx[i] = std::log(ns[i]);
    ly[i] = std::log(values[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("decay fit needs at least two distinct n values");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    residual += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - residual / syy, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace ksd
