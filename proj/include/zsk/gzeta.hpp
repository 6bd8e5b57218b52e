#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zsk/execution.hpp"
#include "zsk/periodic.hpp"
#include "zsk/quadrature.hpp"

namespace zsk {

using LatticePoint = std::span<const std::int64_t>;

/*
  A summand Psi(n_1..n_d; s) over the positive lattice with
  Psi(M n; s) = M^{-s} Psi(n; s). The homogeneity is spot-checked before any
  series is computed.
*/
struct HomogeneousSummand {
  int dim = 1;
  std::function<std::complex<double>(LatticePoint, std::complex<double>)> eval;
  std::string name;
};

/// Throws domain_error unless Psi(M n; s) = M^{-s} Psi(n; s) at seeded random points for M = 2, 3.
void check_homogeneity(const HomogeneousSummand& Z, std::complex<double> s);

/// Psi(n; s) = n^{-s}, d = 1.
[[nodiscard]] HomogeneousSummand power_summand();

/*
  Psi(n; s) = [sum_{j<d} j n_j n_{j+1} / (sum_j n_j)^2] * prod_i (sum_j B_ij n_j)^{-upsilon_i s}
  with all B_ij > 0 and sum_i upsilon_i = 1; d >= 2.
*/
[[nodiscard]] HomogeneousSummand zeta_hat2(int d, std::vector<std::vector<double>> B, std::vector<double> upsilon);

/*
  xi homogeneous of degree 0 and psi of degree 1 (psi > 0); the summand is
  xi(n) psi(n)^{-s}. A declared residue, when present, is the value of the
  invariance ratio at s = d and is used as c_P by gzeta_quadrature.
*/
struct XiPsiPair {
  int dim = 1;
  std::function<double(LatticePoint)> xi;
  std::function<double(LatticePoint)> psi;
  std::optional<double> residue;
  std::string name;

  /// Spot-checks xi(l n) = xi(n), psi(l n) = l psi(n), psi > 0 for l = 2, 3.
  void check() const;
  [[nodiscard]] HomogeneousSummand summand() const;
};

/// xi = 1, psi = n (d = 1), residue 1: the Riemann zeta case.
[[nodiscard]] XiPsiPair unit_pair();
/// xi = n_1/(n_1+n_2), psi = n_1 + n_2 (d = 2).
[[nodiscard]] XiPsiPair ratio_pair();

struct GzetaOptions {
  Execution exec{};
  /// Upper limit on box^d * M^d summand evaluations.
  double work_limit = 4e9;
};

struct GzetaSeriesResult {
  std::complex<double> value;
  /// Same series over the half box; refinement = |value - half_box_value|.
  std::complex<double> half_box_value;
  double refinement = 0.0;
  std::int64_t box = 0;
};

/*
  sum_{n in [1, box]^d} ( sum_{k in [0, M-1]^d} Psi(Mn - k; s) - M^d Psi(Mn; s) ),
  which tends to (1 - M^{d-s}) zeta_hat(s) for Re s > d - 1.
*/
[[nodiscard]] GzetaSeriesResult gzeta_difference_series(const HomogeneousSummand& Z, int M, std::complex<double> s,
                                                        std::int64_t box, const GzetaOptions& opts = {});

struct InvarianceRow {
  int M = 2;
  double ratio = 0.0;
};

struct InvarianceReport {
  std::vector<InvarianceRow> rows;
  double spread = 0.0;
  bool all_positive = false;
};

/// Difference series at s = d divided by ln M, for each M.
[[nodiscard]] InvarianceReport gzeta_invariance_check(const HomogeneousSummand& Z, const std::vector<int>& Ms,
                                                      std::int64_t box, const GzetaOptions& opts = {});

/*
  Log-node quadrature over the lattice: nodes {log_M psi(m)}, weights
  xi(m) psi(m)^{-d}, grouped like the difference series, and
  value = series / (c_P ln M). c_P is the declared residue, or else the f = 1
  series at the same box divided by ln M. Throws domain_error when
  |c_P| < c_floor. With d = 1, xi = 1, psi = n this performs exactly the
  floating-point operations of integral_logM.
*/
[[nodiscard]] QuadratureResult gzeta_quadrature(const XiPsiPair& P, int M, const PeriodicFunction& f,
                                                std::int64_t box, const GzetaOptions& opts = {},
                                                double c_floor = 1e-12);

}  // namespace zsk
