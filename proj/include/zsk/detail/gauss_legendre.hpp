#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace zsk::detail {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1] (Newton on P_n).
template <int n>
struct GaussLegendre {
  std::array<double, n> x{};
  std::array<double, n> w{};

  GaussLegendre() {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
  }
};

inline const GaussLegendre<16>& gauss_legendre16() {
  static const GaussLegendre<16> rule;
  return rule;
}

}  // namespace zsk::detail
