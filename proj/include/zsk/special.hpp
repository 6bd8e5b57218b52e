#pragma once

#include <complex>

#include "zsk/tolerance.hpp"

namespace zsk {

/*
  Riemann zeta for Re(s) > 0, s != 1, from the alternating (eta) series
      eta(s) = sum_{n>=1} (-1)^{n-1} n^{-s},   zeta(s) = eta(s) / (1 - 2^{1-s}),
  accelerated with the Euler transformation (repeated averaging of partial
  sums). Throws domain_error on Re(s) <= 0 or on a zero of 1 - 2^{1-s}, and
  convergence_error when tol.max_terms partial sums are not enough.
*/
[[nodiscard]] std::complex<double> zeta_ref(std::complex<double> s, const ToleranceConfig& tol = {});

/// Real-argument convenience overload of zeta_ref.
[[nodiscard]] double zeta_ref(double s, const ToleranceConfig& tol = {});

/*
  Gamma function for x > 0, Lanczos approximation with g = 7, n = 9
  (coefficients as published by Godfrey / Numerical Recipes 3rd ed.). For
  x < 0.5 the recurrence Gamma(x) = Gamma(x+1)/x is used. Relative error is
  a few 1e-15 for x in (0, 171).
*/
[[nodiscard]] double gamma_ref(double x);

/// log Gamma(x) for x > 0, same approximation as gamma_ref; finite for large x.
[[nodiscard]] double log_gamma_ref(double x);

/*
  Real zeta on the whole real line except s = 1: zeta_ref for s > 0, the
  functional equation
      zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
  for s < 0, and zeta(0) = -1/2. Returned as sign * exp(log_magnitude) so that
  large negative s does not overflow; sign is 0 at the trivial zeros.
*/
struct SignedLog {
  int sign = 0;
  double log_magnitude = 0.0;

  [[nodiscard]] double value() const;
};

[[nodiscard]] SignedLog zeta_real_signed(double s);

/*
  theta_{a,b}(w) = sum_{n in Z} |n|^b exp(-w |n|^a) for a > 0, b >= 0, w > 0.
  The n = 0 term is 1 when b = 0 (so theta_{2,0} is the Jacobi theta value)
  and 0 when b > 0.
*/
[[nodiscard]] double theta_ab(double a, double b, double w, const ToleranceConfig& tol = {});

}  // namespace zsk
