#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rhaly::quadrature {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int points);

/// The shared 20-point rule used by the adaptive integrator.
const GaussLegendreRule& default_rule();

template <typename F>
double gauss_legendre_fixed(F&& f, double a, double b,
                            const GaussLegendreRule& rule = default_rule()) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

namespace detail {

template <typename F>
double adaptive_step(F& f, double a, double b, double whole, double rel_tol,
                     double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_legendre_fixed(f, a, m);
  const double right = gauss_legendre_fixed(f, m, b);
  const double refined = left + right;
  if (!std::isfinite(refined)) {
    return refined;  // overflow; bisecting cannot help
  }
  // Differences below kFloor live in the subnormal range, where no relative
  // tolerance can be met.
  constexpr double kFloor =
      std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  if (depth <= 0 || std::abs(refined - whole) <=
                        std::max({abs_tol, rel_tol * std::abs(refined), kFloor})) {
    return refined;
  }
  return adaptive_step(f, a, m, left, rel_tol, 0.5 * abs_tol, depth - 1) +
         adaptive_step(f, m, b, right, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

/// Adaptive bisection Gauss-Legendre on [a, b]. Accepts a panel when its
/// 20-point estimate agrees with the sum over its two halves.
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-14,
                 double abs_tol = 0.0, int max_depth = 48) {
  const double whole = gauss_legendre_fixed(f, a, b);
  return detail::adaptive_step(f, a, b, whole, rel_tol, abs_tol, max_depth);
}

}  // namespace rhaly::quadrature
