#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rhaly/coeffspace.hpp"

namespace testing {

using rhaly::Complex;

inline std::vector<Complex> random_complex(std::mt19937_64& rng, std::size_t n,
                                           double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<Complex> v(n);
  for (auto& x : v) {
    x = {g(rng), g(rng)};
  }
  return v;
}

inline double l2(const std::vector<Complex>& v) {
  long double s = 0.0L;
  for (const auto& x : v) {
    s += std::norm(x);
  }
  return std::sqrt(static_cast<double>(s));
}

inline Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * std::conj(b[i]);
  }
  return s;
}

inline double max_rel_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double scale = std::max(l2(a), 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

/// Section entries written straight from the defining formula, with no
/// shared code path: m_{n,k} = eta_n (w_beta(n) / w_alpha(k))^(1/2), k <= n.
inline std::vector<std::vector<Complex>> dense_section(const std::vector<Complex>& eta,
                                                       double alpha, double beta,
                                                       std::size_t n_max) {
  auto w = [](std::size_t n, double a) {
    return n == 0 ? 1.0 : std::pow(static_cast<double>(n), 1.0 - a);
  };
  std::vector<std::vector<Complex>> m(n_max + 1, std::vector<Complex>(n_max + 1, 0.0));
  for (std::size_t r = 0; r <= n_max; ++r) {
    for (std::size_t c = 0; c <= r; ++c) {
      m[r][c] = eta[r] * std::sqrt(w(r, beta) / w(c, alpha));
    }
  }
  return m;
}

inline std::vector<Complex> dense_mul(const std::vector<std::vector<Complex>>& m,
                                      const std::vector<Complex>& x, bool adjoint = false) {
  const std::size_t n = m.size();
  std::vector<Complex> y(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (adjoint) {
        y[c] += std::conj(m[r][c]) * x[r];
      } else {
        y[r] += m[r][c] * x[c];
      }
    }
  }
  return y;
}

/// sigma_max of a dense matrix via plain power iteration on M^* M, run to a
/// fixed large iteration count.
inline double dense_power_sigma(const std::vector<std::vector<Complex>>& m, int iters = 20000) {
  std::vector<Complex> v(m.size(), 1.0);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    auto w = dense_mul(m, dense_mul(m, v), true);
    double nw = l2(w);
    if (nw == 0.0) {
      return 0.0;
    }
    double nv = l2(v);
    lambda = nw / nv;
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = w[i] / nw;
    }
  }
  return std::sqrt(lambda);
}

}  // namespace testing
