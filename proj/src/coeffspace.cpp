#include "rhaly/coeffspace.hpp"

#include <cmath>

#include "rhaly/compensated.hpp"
#include "rhaly/error.hpp"

namespace rhaly {

SpaceParams::SpaceParams(double alpha_value) : alpha(alpha_value) {
  if (!std::isfinite(alpha_value)) {
    throw InvalidArgument("SpaceParams: alpha must be finite");
  }
}

CoeffSeq::CoeffSeq(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw InvalidArgument("CoeffSeq: length must be at least 1");
  }
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidArgument("CoeffSeq: entries must be finite");
    }
  }
}

CoeffSeq CoeffSeq::zeros(std::size_t length) {
  return CoeffSeq(std::vector<Complex>(length));
}

double weight(std::size_t n, double alpha) {
  // The a_0 term carries weight 1; 0^(1 - alpha) is never formed.
  if (n == 0) {
    return 1.0;
  }
  return std::pow(static_cast<double>(n), 1.0 - alpha);
}

double norm_sq(const CoeffSeq& f, SpaceParams space) {
  CompensatedSum<double> sum;
  for (std::size_t n = 0; n < f.size(); ++n) {
    sum += weight(n, space.alpha) * std::norm(f[n]);
  }
  return sum.value();
}

CoeffSeq monomial(std::size_t degree) {
  std::vector<Complex> coeffs(degree + 1);
  coeffs[degree] = 1.0;
  return CoeffSeq(std::move(coeffs));
}

}  // namespace rhaly
