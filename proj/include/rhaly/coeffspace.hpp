#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rhaly {

using Complex = std::complex<double>;

/// Exponent alpha of the weighted Dirichlet space D^2_alpha. Any finite real
/// is admissible: alpha = -1 is S^2, alpha = 0 the Dirichlet space, and
/// alpha = gamma + 2 the Bergman space A^2_gamma.
struct SpaceParams {
  SpaceParams(double alpha_value);  // NOLINT(google-explicit-constructor)
  double alpha;
};

/// Truncated Taylor coefficients a_0..a_N of an analytic function.
class CoeffSeq {
 public:
  /// Throws InvalidArgument when empty or when any entry is non-finite.
  explicit CoeffSeq(std::vector<Complex> coeffs);
  static CoeffSeq zeros(std::size_t length);

  std::size_t size() const { return coeffs_.size(); }
  /// Highest stored index N.
  std::size_t degree() const { return coeffs_.size() - 1; }
  const Complex& operator[](std::size_t n) const { return coeffs_[n]; }
  std::span<const Complex> coeffs() const { return coeffs_; }

 private:
  std::vector<Complex> coeffs_;
};

/// 1 for n = 0, n^(1 - alpha) otherwise.
double weight(std::size_t n, double alpha);

/// sum_{n <= N} weight(n, alpha) |a_n|^2, truncated at the stored length.
double norm_sq(const CoeffSeq& f, SpaceParams space);

/// u_N(z) = z^N as a coefficient vector of length N + 1.
CoeffSeq monomial(std::size_t degree);

}  // namespace rhaly
