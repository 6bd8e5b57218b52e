#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "zsk/periodic.hpp"
#include "zsk/quadrature.hpp"

namespace zsk {

using cplx = std::complex<double>;
using ComplexMap = std::function<cplx(cplx)>;
using BoundaryResult = BasicQuadratureResult<cplx>;

/// exp(2 pi i t) for t in [0, 1); modulus 1 up to rounding of cos and sin.
[[nodiscard]] cplx unit_point(double t);

/// A function on the unit circle, optionally with a modulus of continuity in the angle variable t (z = e^{2 pi i t}).
class CircleFunction {
 public:
  explicit CircleFunction(ComplexMap eval, std::optional<ModulusOfContinuity> modulus = {});

  [[nodiscard]] cplx operator()(cplx z) const;
  [[nodiscard]] cplx at_angle(double t) const { return (*this)(unit_point(t)); }
  [[nodiscard]] const std::optional<ModulusOfContinuity>& modulus() const { return modulus_; }

 private:
  ComplexMap eval_;
  std::optional<ModulusOfContinuity> modulus_;
};

/*
  A function holomorphic in the unit disk and continuous up to the boundary.
  Construction spot-checks the Cauchy-Riemann equations by central
  differences at pseudo-random interior points and rejects failures.
*/
class DiskFunction {
 public:
  explicit DiskFunction(ComplexMap eval, std::optional<ModulusOfContinuity> modulus = {});

  [[nodiscard]] cplx operator()(cplx z) const;
  [[nodiscard]] CircleFunction boundary() const { return CircleFunction(eval_, modulus_); }

 private:
  ComplexMap eval_;
  std::optional<ModulusOfContinuity> modulus_;
};

/// Zeros b_j (|b_j| < 1), unit rotation a, and nonzero node power L.
struct BlaschkeSpec {
  std::vector<cplx> zeros;
  cplx rotation{1.0, 0.0};
  int L = 1;

  void validate() const;
  /// a * prod_j b_j, the point at which the series evaluates f.
  [[nodiscard]] cplx target_point() const;
  /// prod_j (z + b_j) / (1 + conj(b_j) z).
  [[nodiscard]] cplx product(cplx z) const;
};

enum class PoleSide { inside, outside };

/// Mean of F over the unit circle from the series at the nodes m^{2 pi i / ln M}.
[[nodiscard]] BoundaryResult circle_mean(const CircleFunction& F, int M, std::int64_t groups,
                                         const QuadratureOptions& opts = {});

/// f(0) from the series at the nodes a m^{2 pi i L / ln M}.
[[nodiscard]] BoundaryResult holo_at_zero(const DiskFunction& f, cplx a, int L, int M, std::int64_t groups,
                                          const QuadratureOptions& opts = {});

/*
  Series with the kernel |z - c|^{-2J} (inside) or |z - 1/c|^{-2J} (outside)
  at the boundary nodes. The raw sum equals ln M times weighted_kernel_target.
  Requires 0 < |c| <= 0.9.
*/
[[nodiscard]] BoundaryResult holo_weighted_kernel(const DiskFunction& f, cplx c, int J, int M, std::int64_t groups,
                                                  PoleSide side, const QuadratureOptions& opts = {});

/*
  The value the weighted-kernel series divides out to:
    inside:  (1/(J-1)!) d^{J-1}/dz^{J-1} [z^{J-1} f(z) (1 - conj(c) z)^{-J}] at z = c
    outside: |c|^{2J} (1/(J-1)!) d^{J-1}/dz^{J-1} [z^{J-1} f(z) (1 - c z)^{-J}] at z = conj(c)
  The derivative is a Cauchy integral on a small circle around the point,
  evaluated by the trapezoid rule.
*/
[[nodiscard]] cplx weighted_kernel_target(const DiskFunction& f, cplx c, int J, PoleSide side);

/// f(g(0)) from the series of mu(z) f(g(z)) at the nodes m^{+-2 pi i / ln M}; mu(0) must be 1.
[[nodiscard]] BoundaryResult holo_general(const DiskFunction& f, const DiskFunction& g, const DiskFunction& mu, int M,
                                          std::int64_t groups, int sign = +1, const QuadratureOptions& opts = {});

/// f(a prod b_j) from the series of f(a B(z)) at the nodes a m^{2 pi i L / ln M}, B the Blaschke product.
[[nodiscard]] BoundaryResult holo_at_point_blaschke(const DiskFunction& f, const BlaschkeSpec& spec, int M,
                                                    std::int64_t groups, const QuadratureOptions& opts = {});

}  // namespace zsk
