#pragma once

namespace rhaly::special {

/// log Gamma(x) for x > 0 (Lanczos, g = 607/128, 15 terms).
double log_gamma(double x);

/// log Gamma(x + a) - log Gamma(x) for x > 0, x + a > 0, evaluated without
/// the cancellation a naive difference suffers for large x.
double log_gamma_ratio(double x, double a);

/// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// B(n + 1, gamma + 1) = int_0^1 t^n (1 - t)^gamma dt for integer n >= 0 and
/// gamma > -1. Non-negative integer gamma uses the finite product
/// gamma! / ((n+1)(n+2)...(n+gamma+1)).
double beta_moment(unsigned long long n, double gamma);

}  // namespace rhaly::special
