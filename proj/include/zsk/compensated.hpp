#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "zsk/error.hpp"

namespace zsk {

/*
  Neumaier's variant of Kahan summation. The running compensation captures the
  low-order bits lost by each addition regardless of which operand is larger,
  so 1e16 + 1 - 1e16 reads back as 1.

  Terms must be finite; a NaN or infinity would poison the compensation and is
  rejected instead.
*/
class CompensatedAccumulator {
 public:
  constexpr CompensatedAccumulator() = default;

  void add(double term) {
    if (!std::isfinite(term)) {
      throw domain_error("compensated sum: non-finite term");
    }
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
    ++count_;
  }

  CompensatedAccumulator& operator+=(double term) {
    add(term);
    return *this;
  }

  /// Folds another accumulator in: its sum, then its compensation.
  void merge(const CompensatedAccumulator& other) {
    add(other.sum_);
    add(other.compensation_);
    count_ += other.count_ - 2;
  }

  [[nodiscard]] double value() const { return sum_ + compensation_; }
  [[nodiscard]] double sum() const { return sum_; }
  [[nodiscard]] double compensation() const { return compensation_; }
  [[nodiscard]] std::int64_t count() const { return count_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  std::int64_t count_ = 0;
};

/// Functional form of CompensatedAccumulator::add.
[[nodiscard]] inline CompensatedAccumulator comp_add(CompensatedAccumulator acc, double term) {
  acc.add(term);
  return acc;
}

/*
  Double-word ("two-float") accumulator. The running total is kept as an
  unevaluated pair hi + lo with |lo| <= ulp(hi)/2, updated with error-free
  TwoSum transformations. Roughly twice the precision of a double; used where
  a compensated double is not quite enough (lattice identities checked to
  1e-12 absolute).
*/
class DoubleWordAccumulator {
 public:
  void add(double term) {
    if (!std::isfinite(term)) {
      throw domain_error("double-word sum: non-finite term");
    }
    double err = 0.0;
    const double s = two_sum(hi_, term, err);
    const double lo = lo_ + err;
    hi_ = fast_two_sum(s, lo, lo_);
    ++count_;
  }

  DoubleWordAccumulator& operator+=(double term) {
    add(term);
    return *this;
  }

  [[nodiscard]] double value() const { return hi_ + lo_; }
  [[nodiscard]] double high() const { return hi_; }
  [[nodiscard]] double low() const { return lo_; }
  [[nodiscard]] std::int64_t count() const { return count_; }

 private:
  static double two_sum(double a, double b, double& err) {
    const double s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
    return s;
  }
  static double fast_two_sum(double a, double b, double& err) {
    const double s = a + b;
    err = b - (s - a);
    return s;
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
  std::int64_t count_ = 0;
};

/// Componentwise compensated accumulation of complex terms.
class ComplexCompensatedAccumulator {
 public:
  void add(std::complex<double> term) {
    re_.add(term.real());
    im_.add(term.imag());
  }
  ComplexCompensatedAccumulator& operator+=(std::complex<double> term) {
    add(term);
    return *this;
  }
  void merge(const ComplexCompensatedAccumulator& other) {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }
  [[nodiscard]] std::complex<double> value() const { return {re_.value(), im_.value()}; }
  [[nodiscard]] std::int64_t count() const { return re_.count(); }

 private:
  CompensatedAccumulator re_;
  CompensatedAccumulator im_;
};

template <typename Value>
struct accumulator_for;

template <>
struct accumulator_for<double> {
  using type = CompensatedAccumulator;
};

template <>
struct accumulator_for<std::complex<double>> {
  using type = ComplexCompensatedAccumulator;
};

template <typename Value>
using accumulator_for_t = typename accumulator_for<Value>::type;

}  // namespace zsk
