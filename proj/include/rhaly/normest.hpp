#pragma once

#include <cstddef>
#include <cstdint>

#include "rhaly/cesaro_op.hpp"

namespace rhaly {

struct NormEstimate {
  double value = 0.0;      ///< estimated largest singular value
  int iterations = 0;
  double residual = 0.0;   ///< ||M*M v - rho v|| / rho at the last iterate
  bool converged = false;
};

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  std::uint64_t seed = 42;
};

/*!
  Largest singular value of a section by power iteration on M^* M.

  The start vector has pseudo-random positive entries drawn from `seed`, so
  the result is reproducible. The value is sqrt of a Rayleigh quotient and
  therefore never exceeds the true sigma_max. Iteration stops once the
  relative eigen-residual drops to `tol`; otherwise `converged` is false.
  Throws NumericalError if an iterate becomes non-finite.
*/
NormEstimate section_norm(const SectionMatrix& m,
                          const PowerIterationOptions& options = {});

/// Largest singular value by one-sided (Hestenes) Jacobi. Reference oracle;
/// both dimensions are capped at SectionMatrix::kDenseCap + 1.
double dense_svd_norm(const DenseMatrix& m);

/// Norm of the section of C_(eta) - C_{n_cut} of order n_big + 1: only rows
/// n > n_cut are kept. Zero when n_cut == n_big.
NormEstimate residual_norm(const EtaSeq& eta, SpaceParams alpha,
                           SpaceParams beta, std::size_t n_cut,
                           std::size_t n_big,
                           const PowerIterationOptions& options = {});

}  // namespace rhaly
