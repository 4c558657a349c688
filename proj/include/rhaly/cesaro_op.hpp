#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rhaly/coeffspace.hpp"
#include "rhaly/etagen.hpp"

namespace rhaly {

/// b_n = eta_n (a_0 + ... + a_n) for n <= eta.max_index(). Runs in O(N) with
/// a compensated prefix sum. Requires eta.size() >= f.size().
CoeffSeq apply(const EtaSeq& eta, const CoeffSeq& f);

/// F_(eta), the image of the constant function 1.
CoeffSeq f_eta(const EtaSeq& eta);

/// Row-major dense complex matrix, used for materialized sections and the
/// SVD oracle.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::vector<Complex> multiply(std::span<const Complex> x) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

/*!
  The (N+1)x(N+1) leading block of C_(eta): D^2_alpha -> D^2_beta after the
  diagonal substitution x_k = sqrt(weight(k, alpha)) a_k, so that it acts on
  plain l^2:

    m_{n,k} = eta_n sqrt(weight(n, beta) / weight(k, alpha)),  k <= n,

  and 0 above the diagonal. Rows below `first_row` are zeroed; this is how the
  residual C_(eta) - C_N of the finite-rank truncation is represented.

  The matrix is never stored; products cost O(N).
*/
class SectionMatrix {
 public:
  static constexpr std::size_t kDenseCap = 512;

  SectionMatrix(const EtaSeq& eta, SpaceParams alpha, SpaceParams beta,
                std::size_t n, std::size_t first_row = 0);

  /// Order N + 1.
  std::size_t dim() const { return eta_.size(); }
  std::size_t n() const { return eta_.size() - 1; }
  std::size_t first_row() const { return first_row_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  Complex entry(std::size_t row, std::size_t col) const;

  /// y = M x.
  std::vector<Complex> apply(std::span<const Complex> x) const;
  /// x = M^* y.
  std::vector<Complex> apply_adjoint(std::span<const Complex> y) const;

  /// Dense copy; throws InvalidArgument when N > cap.
  DenseMatrix to_dense(std::size_t cap = kDenseCap) const;

 private:
  std::vector<Complex> eta_;
  std::vector<double> sqrt_weight_alpha_;
  std::vector<double> sqrt_weight_beta_;
  double alpha_;
  double beta_;
  std::size_t first_row_;
};

/// Section of order N + 1; requires N < eta.size().
SectionMatrix section(const EtaSeq& eta, SpaceParams alpha, SpaceParams beta,
                      std::size_t n);

}  // namespace rhaly
