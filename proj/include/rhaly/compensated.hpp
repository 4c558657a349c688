#pragma once

#include <cmath>
#include <complex>

namespace rhaly {

/*!
  Neumaier's variant of Kahan summation.

  Unlike plain Kahan it stays accurate when an addend is larger in magnitude
  than the running sum, which happens at the head of reversed tail sums.
*/
template <typename Real>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real initial) : sum_(initial) {}

  void add(Real value) {
    const Real t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Real value) {
    add(value);
    return *this;
  }

  Real value() const { return sum_ + compensation_; }

 private:
  Real sum_ = Real{0};
  Real compensation_ = Real{0};
};

/// Componentwise compensated sum for complex values.
template <typename Real>
class CompensatedSum<std::complex<Real>> {
 public:
  CompensatedSum& operator+=(std::complex<Real> value) {
    re_.add(value.real());
    im_.add(value.imag());
    return *this;
  }

  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

}  // namespace rhaly
