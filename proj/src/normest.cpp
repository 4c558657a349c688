#include "rhaly/normest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rhaly/compensated.hpp"
#include "rhaly/error.hpp"

namespace rhaly {
namespace {

double norm2(std::span<const Complex> v) {
  CompensatedSum<double> sum;
  for (const auto& x : v) {
    sum += std::norm(x);
  }
  return std::sqrt(sum.value());
}

}  // namespace

NormEstimate section_norm(const SectionMatrix& m,
                          const PowerIterationOptions& options) {
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw InvalidArgument("section_norm: need tol > 0 and max_iter >= 1");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<Complex> v(m.dim());
  for (auto& x : v) {
    x = dist(rng);
  }
  const double v0 = norm2(v);
  for (auto& x : v) {
    x /= v0;
  }

  NormEstimate est;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    std::vector<Complex> w = m.apply_adjoint(m.apply(v));
    CompensatedSum<double> dot;
    for (std::size_t i = 0; i < v.size(); ++i) {
      dot += (std::conj(v[i]) * w[i]).real();
    }
    const double rho = dot.value();
    const double w_norm = norm2(w);
    if (!std::isfinite(rho) || !std::isfinite(w_norm)) {
      throw NumericalError("section_norm: non-finite iterate");
    }
    est.iterations = iter;
    if (w_norm == 0.0 || rho <= 0.0) {
      // v lies in the kernel of M; with a positive start vector this only
      // happens for the zero section.
      est.value = 0.0;
      est.residual = 0.0;
      est.converged = w_norm == 0.0;
      return est;
    }
    std::vector<Complex> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      r[i] = w[i] - rho * v[i];
    }
    est.value = std::sqrt(rho);
    est.residual = norm2(r) / rho;
    if (est.residual <= options.tol) {
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = w[i] / w_norm;
    }
  }
  est.converged = false;
  return est;
}

double dense_svd_norm(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows > SectionMatrix::kDenseCap + 1 || cols > SectionMatrix::kDenseCap + 1) {
    throw InvalidArgument("dense_svd_norm: matrix exceeds the size cap");
  }
  if (rows == 0 || cols == 0) {
    return 0.0;
  }
  // Column-major split storage keeps the column sweeps contiguous.
  std::vector<double> re(rows * cols);
  std::vector<double> im(rows * cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      re[j * rows + i] = m(i, j).real();
      im[j * rows + i] = m(i, j).imag();
    }
  }

  constexpr double kOffTol = 1e-15;
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      double* pr = &re[p * rows];
      double* pi = &im[p * rows];
      for (std::size_t q = p + 1; q < cols; ++q) {
        double* qr = &re[q * rows];
        double* qi = &im[q * rows];
        double a = 0.0;
        double b = 0.0;
        double gr = 0.0;
        double gi = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          a += pr[i] * pr[i] + pi[i] * pi[i];
          b += qr[i] * qr[i] + qi[i] * qi[i];
          // conj(a_p) * a_q
          gr += pr[i] * qr[i] + pi[i] * qi[i];
          gi += pr[i] * qi[i] - pi[i] * qr[i];
        }
        const double g = std::hypot(gr, gi);
        if (g == 0.0 || g <= kOffTol * std::sqrt(a * b)) {
          continue;
        }
        rotated = true;
        // Rotate (a_p, e^{-i phi} a_q) by a real Jacobi angle that zeroes
        // their inner product; phi = arg(conj(a_p) a_q).
        const double zeta = (b - a) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const double er = gr / g;
        const double ei = -gi / g;
        for (std::size_t i = 0; i < rows; ++i) {
          const double br = er * qr[i] - ei * qi[i];
          const double bi = er * qi[i] + ei * qr[i];
          const double xr = pr[i];
          const double xi = pi[i];
          pr[i] = c * xr - s * br;
          pi[i] = c * xi - s * bi;
          qr[i] = s * xr + c * br;
          qi[i] = s * xi + c * bi;
        }
      }
    }
    if (!rotated) {
      break;
    }
  }

  double best = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      sum += re[j * rows + i] * re[j * rows + i] + im[j * rows + i] * im[j * rows + i];
    }
    best = std::max(best, std::sqrt(sum));
  }
  return best;
}

NormEstimate residual_norm(const EtaSeq& eta, SpaceParams alpha,
                           SpaceParams beta, std::size_t n_cut,
                           std::size_t n_big,
                           const PowerIterationOptions& options) {
  if (n_cut > n_big) {
    throw InvalidArgument("residual_norm: need N_cut <= N_big (got " +
                          std::to_string(n_cut) + " > " +
                          std::to_string(n_big) + ")");
  }
  if (n_big >= eta.size()) {
    throw InvalidArgument("residual_norm: N_big must be below length(eta)");
  }
  if (n_cut == n_big) {
    return NormEstimate{0.0, 0, 0.0, true};
  }
  const SectionMatrix m(eta, alpha, beta, n_big, n_cut + 1);
  return section_norm(m, options);
}

}  // namespace rhaly
