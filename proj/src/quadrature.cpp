#include "rhaly/quadrature.hpp"

#include <numbers>

#include "rhaly/error.hpp"

namespace rhaly::quadrature {

GaussLegendreRule gauss_legendre(int points) {
  if (points < 1) {
    throw InvalidArgument("gauss_legendre: need at least one point");
  }
  const auto n = static_cast<std::size_t>(points);
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  // Newton iteration on P_n from the Chebyshev-like initial guesses; the
  // rule is symmetric so only half the roots are computed.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    derivative = points * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GaussLegendreRule& default_rule() {
  static const GaussLegendreRule rule = gauss_legendre(20);
  return rule;
}

}  // namespace rhaly::quadrature
