#include "zsk/special.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "zsk/compensated.hpp"
#include "zsk/error.hpp"

namespace zsk {

namespace {

using cplx = std::complex<double>;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

// Lanczos series A_g(x) and t = x + g + 1/2 for Gamma(x + 1).
double lanczos_series(double x, double& t) {
  double a = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) {
    a += kLanczosCoeff[i] / (x + static_cast<double>(i));
  }
  t = x + kLanczosG + 0.5;
  return a;
}

}  // namespace

cplx zeta_ref(cplx s, const ToleranceConfig& tol) {
  tol.validate();
  if (!(s.real() > 0.0) || !std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    throw domain_error("zeta_ref: requires finite s with Re(s) > 0");
  }
  const cplx factor = 1.0 - std::pow(cplx(2.0, 0.0), 1.0 - s);
  if (std::abs(factor) < 1e-14) {
    throw domain_error("zeta_ref: 1 - 2^(1-s) vanishes at this s");
  }

  // diag[r] holds the r-times averaged partial sum ending at the newest
  // partial sum; the estimate is read two thirds of the way along.
  std::vector<cplx> diag;
  cplx partial = 0.0;
  cplx previous = 0.0;
  double scale = 0.0;
  int settled = 0;
  for (std::int64_t n = 0; n < tol.max_terms; ++n) {
    const cplx term = std::exp(-s * std::log(static_cast<double>(n + 1)));
    partial += (n % 2 == 0) ? term : -term;
    scale = std::max(scale, std::abs(partial));

    cplx carry = partial;
    for (auto& d : diag) {
      const cplx averaged = 0.5 * (d + carry);
      d = carry;
      carry = averaged;
    }
    diag.push_back(carry);

    const std::size_t r = static_cast<std::size_t>((2 * n) / 3);
    const cplx estimate = diag[r];
    if (n >= 4) {
      const double change = std::abs(estimate - previous);
      const double floor = 32.0 * std::numeric_limits<double>::epsilon() * scale;
      settled = (tol.met(change, std::abs(estimate)) || change <= floor) ? settled + 1 : 0;
      if (settled >= 3) return estimate / factor;
    }
    previous = estimate;
  }
  throw convergence_error("zeta_ref: no convergence within max_terms");
}

double zeta_ref(double s, const ToleranceConfig& tol) {
  return zeta_ref(cplx(s, 0.0), tol).real();
}

double gamma_ref(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("gamma_ref: requires finite x > 0");
  if (x < 0.5) return gamma_ref(x + 1.0) / x;
  double t = 0.0;
  const double a = lanczos_series(x - 1.0, t);
  const double log_part = (x - 0.5) * std::log(t) - t;
  return std::sqrt(2.0 * std::numbers::pi) * std::exp(log_part) * a;
}

double log_gamma_ref(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("log_gamma_ref: requires finite x > 0");
  if (x < 0.5) return log_gamma_ref(x + 1.0) - std::log(x);
  double t = 0.0;
  const double a = lanczos_series(x - 1.0, t);
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x - 0.5) * std::log(t) - t + std::log(a);
}

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return static_cast<double>(sign) * std::exp(log_magnitude);
}

SignedLog zeta_real_signed(double s) {
  if (!std::isfinite(s)) throw domain_error("zeta_real_signed: non-finite argument");
  if (s == 1.0) throw domain_error("zeta_real_signed: pole at s = 1");
  if (s > 0.0) {
    const double v = zeta_ref(s);
    return {v > 0.0 ? 1 : (v < 0.0 ? -1 : 0), v == 0.0 ? 0.0 : std::log(std::fabs(v))};
  }
  if (s == 0.0) return {-1, std::log(0.5)};

  // sin(pi s / 2) with the argument reduced mod 4 first; exact zeros at the
  // negative even integers.
  const double r = std::fmod(-s, 4.0);
  if (r == 0.0 || r == 2.0) return {0, 0.0};
  const double sine = -std::sin(std::numbers::pi * r / 2.0);
  const double one_minus_s = 1.0 - s;
  const double log_mag = s * std::log(2.0) + (s - 1.0) * std::log(std::numbers::pi) +
                         std::log(std::fabs(sine)) + log_gamma_ref(one_minus_s) +
                         std::log(zeta_ref(one_minus_s));
  return {sine > 0.0 ? 1 : -1, log_mag};
}

double theta_ab(double a, double b, double w, const ToleranceConfig& tol) {
  tol.validate();
  if (!(a > 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw domain_error("theta_ab: requires a > 0 and b >= 0");
  }
  if (!(w > 0.0) || !std::isfinite(w)) throw domain_error("theta_ab: requires w > 0");

  // Terms rise up to n* = (b/(a w))^(1/a) and decay monotonically after it.
  const double peak = b > 0.0 ? std::pow(b / (a * w), 1.0 / a) : 0.0;
  CompensatedAccumulator acc;
  const double n0_term = b == 0.0 ? 1.0 : 0.0;
  for (std::int64_t n = 1; n <= tol.max_terms; ++n) {
    const double x = static_cast<double>(n);
    const double term = std::exp(b * std::log(x) - w * std::pow(x, a));
    acc.add(term);
    if (x > peak && term <= 1e-3 * std::numeric_limits<double>::epsilon() * acc.value()) {
      return 2.0 * acc.value() + n0_term;
    }
  }
  throw convergence_error("theta_ab: no convergence within max_terms");
}

}  // namespace zsk
