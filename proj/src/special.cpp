#include "rhaly/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "rhaly/error.hpp"

namespace rhaly::special {
namespace {

constexpr double kLanczosG = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128.
constexpr std::array<double, 15> kLanczosCoeffs = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,
    .15808870322491248884e-3,   -.21026444172410488319e-3,
    .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,
    .36899182659531622704e-5};

// A(z) = c_0 + sum_k c_k / (z - 1 + k), so that
// Gamma(z) = sqrt(2 pi) (z + g - 1/2)^(z - 1/2) e^-(z + g - 1/2) A(z).
double lanczos_series(double z) {
  double sum = 0.0;
  for (std::size_t k = kLanczosCoeffs.size() - 1; k >= 1; --k) {
    sum += kLanczosCoeffs[k] / (z - 1.0 + static_cast<double>(k));
  }
  return sum + kLanczosCoeffs[0];
}

// A(z + a) - A(z) as a sum of small differences.
double lanczos_series_delta(double z, double a) {
  double sum = 0.0;
  for (std::size_t k = kLanczosCoeffs.size() - 1; k >= 1; --k) {
    const double d0 = z - 1.0 + static_cast<double>(k);
    sum += -a * kLanczosCoeffs[k] / ((d0 + a) * d0);
  }
  return sum;
}

constexpr double kHalfLog2Pi = 0.91893853320467274178;

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidArgument("log_gamma: argument must be positive and finite");
  }
  if (x < 0.5) {
    // Gamma(x) = Gamma(x + 1) / x keeps the series in its accurate range.
    return log_gamma(x + 1.0) - std::log(x);
  }
  const double t = x + kLanczosG - 0.5;
  return (x - 0.5) * std::log(t) - t + kHalfLog2Pi +
         std::log(lanczos_series(x));
}

double log_gamma_ratio(double x, double a) {
  if (!(x > 0.0) || !(x + a > 0.0)) {
    throw InvalidArgument("log_gamma_ratio: arguments out of domain");
  }
  if (a == 0.0) {
    return 0.0;
  }
  if (x < 8.0 || x + a < 8.0) {
    return log_gamma(x + a) - log_gamma(x);
  }
  const double h = kLanczosG - 0.5;
  const double base = lanczos_series(x);
  return (x - 0.5) * std::log1p(a / (x + h)) + a * std::log(x + a + h) - a +
         std::log1p(lanczos_series_delta(x, a) / base);
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidArgument("log_beta: arguments must be positive");
  }
  // log B(a, b) = log Gamma(b) - [log Gamma(a + b) - log Gamma(a)], with the
  // bracket taken about the larger argument.
  if (a < b) {
    std::swap(a, b);
  }
  return log_gamma(b) - log_gamma_ratio(a, b);
}

double beta_moment(unsigned long long n, double gamma) {
  if (!(gamma > -1.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("beta_moment: gamma must be > -1");
  }
  const double np1 = static_cast<double>(n) + 1.0;
  if (gamma >= 0.0 && gamma <= 64.0 && gamma == std::floor(gamma)) {
    const auto m = static_cast<int>(gamma);
    double value = 1.0 / np1;
    for (int k = 1; k <= m; ++k) {
      value *= static_cast<double>(k) / (np1 + static_cast<double>(k));
    }
    return value;
  }
  return std::exp(log_gamma(gamma + 1.0) - log_gamma_ratio(np1, gamma + 1.0));
}

}  // namespace rhaly::special
