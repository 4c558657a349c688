#include "rhaly/cesaro_op.hpp"

#include <cmath>
#include <string>

#include "rhaly/compensated.hpp"
#include "rhaly/error.hpp"

namespace rhaly {

CoeffSeq apply(const EtaSeq& eta, const CoeffSeq& f) {
  if (eta.size() < f.size()) {
    throw InvalidArgument("apply: eta is shorter than f");
  }
  std::vector<Complex> out(eta.size());
  CompensatedSum<Complex> prefix;
  for (std::size_t n = 0; n < eta.size(); ++n) {
    if (n < f.size()) {
      prefix += f[n];
    }
    out[n] = eta[n] * prefix.value();
  }
  return CoeffSeq(std::move(out));
}

CoeffSeq f_eta(const EtaSeq& eta) {
  return CoeffSeq({eta.values().begin(), eta.values().end()});
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

std::vector<Complex> DenseMatrix::multiply(std::span<const Complex> x) const {
  if (x.size() != cols_) {
    throw InvalidArgument("DenseMatrix::multiply: length mismatch");
  }
  std::vector<Complex> y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    CompensatedSum<Complex> acc;
    for (std::size_t j = 0; j < cols_; ++j) {
      acc += (*this)(i, j) * x[j];
    }
    y[i] = acc.value();
  }
  return y;
}

SectionMatrix::SectionMatrix(const EtaSeq& eta, SpaceParams alpha,
                             SpaceParams beta, std::size_t n,
                             std::size_t first_row)
    : alpha_(alpha.alpha), beta_(beta.alpha), first_row_(first_row) {
  if (n >= eta.size()) {
    throw InvalidArgument("section: N = " + std::to_string(n) +
                          " must be below length(eta) = " +
                          std::to_string(eta.size()));
  }
  eta_.assign(eta.values().begin(),
              eta.values().begin() + static_cast<long>(n + 1));
  sqrt_weight_alpha_.resize(n + 1);
  sqrt_weight_beta_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    sqrt_weight_alpha_[k] = std::sqrt(weight(k, alpha_));
    sqrt_weight_beta_[k] = std::sqrt(weight(k, beta_));
  }
}

Complex SectionMatrix::entry(std::size_t row, std::size_t col) const {
  if (row >= dim() || col >= dim()) {
    throw InvalidArgument("SectionMatrix::entry: index out of range");
  }
  if (col > row || row < first_row_) {
    return 0.0;
  }
  return eta_[row] * (sqrt_weight_beta_[row] / sqrt_weight_alpha_[col]);
}

std::vector<Complex> SectionMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != dim()) {
    throw InvalidArgument("apply_section: expected length " +
                          std::to_string(dim()) + ", got " +
                          std::to_string(x.size()));
  }
  std::vector<Complex> y(dim());
  CompensatedSum<Complex> prefix;
  for (std::size_t k = 0; k < dim(); ++k) {
    prefix += x[k] / sqrt_weight_alpha_[k];
    if (k >= first_row_) {
      y[k] = sqrt_weight_beta_[k] * eta_[k] * prefix.value();
    }
  }
  return y;
}

std::vector<Complex> SectionMatrix::apply_adjoint(
    std::span<const Complex> y) const {
  if (y.size() != dim()) {
    throw InvalidArgument("apply_adjoint: expected length " +
                          std::to_string(dim()) + ", got " +
                          std::to_string(y.size()));
  }
  std::vector<Complex> x(dim());
  CompensatedSum<Complex> suffix;
  for (std::size_t k = dim(); k-- > 0;) {
    if (k >= first_row_) {
      suffix += sqrt_weight_beta_[k] * std::conj(eta_[k]) * y[k];
    }
    x[k] = suffix.value() / sqrt_weight_alpha_[k];
  }
  return x;
}

DenseMatrix SectionMatrix::to_dense(std::size_t cap) const {
  if (n() > cap) {
    throw InvalidArgument("SectionMatrix::to_dense: N = " + std::to_string(n()) +
                          " exceeds the dense cap " + std::to_string(cap));
  }
  DenseMatrix m(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      m(i, j) = entry(i, j);
    }
  }
  return m;
}

SectionMatrix section(const EtaSeq& eta, SpaceParams alpha, SpaceParams beta,
                      std::size_t n) {
  return SectionMatrix(eta, alpha, beta, n);
}

}  // namespace rhaly
