#pragma once

#include <cstdint>
#include <vector>

#include "zsk/execution.hpp"
#include "zsk/special.hpp"
#include "zsk/tolerance.hpp"

namespace zsk {

/// Parameters of Phi_{a,b,M,J}; b > -J a - 1.
struct PhiParams {
  double a = 1.0;
  double b = 0.0;
  int M = 2;
  int J = 0;

  void validate() const;
};

/// coeff * t^tpow * (ln t)^logpow * exp(-rate t). rate = 0 gives a pure power-log term.
struct ExpLogTerm {
  double coeff = 0.0;
  int tpow = 0;
  int logpow = 0;
  double rate = 0.0;

  [[nodiscard]] double operator()(double t) const;
};

using ExpLogSum = std::vector<ExpLogTerm>;

/// Merges like terms (same tpow, logpow, rate within one ulp), drops zeros, sorts by key.
[[nodiscard]] ExpLogSum explog_normalize(ExpLogSum terms);
/// Exact d/dt, termwise: p C t^{p-1}(ln t)^q + q C t^{p-1}(ln t)^{q-1} - rate C t^p (ln t)^q.
[[nodiscard]] ExpLogSum explog_differentiate(const ExpLogSum& terms);
/// Multiplies by (ln t / a)^l.
[[nodiscard]] ExpLogSum explog_times_log(const ExpLogSum& terms, int l, double a);
/// Multiplies by t^p.
[[nodiscard]] ExpLogSum explog_times_power(const ExpLogSum& terms, int p);
[[nodiscard]] double explog_evaluate(const ExpLogSum& terms, double t);

/// (N^{1-s} - M^{1-s})^L zeta(s) in sign/log form, the Dirichlet series of the lattice kernels.
/// N = 1 is allowed; at s = 1 the removable singularity is filled in.
[[nodiscard]] SignedLog dirichlet_d_signed(int M, int N, int L, double s);
[[nodiscard]] double dirichlet_d(int M, int N, int L, double s);

/*
  The kernel series behind Phi and Psi,
    S_beta(t) = sum_l c_l sum_{n>=1} [ sum_{k=1}^{M-1} g(s_l (Mn-k)) - (M-1) g(s_l M n) ]
              - sum_l c_l sum_{n>=1} [ sum_{k=1}^{N-1} g(s_l (Nn-k)) - (N-1) g(s_l N n) ],
    g(y) = y^beta exp(-t y^a),  c_l = C(L-1,l) (-M)^l N^{L-1-l},  s_l = M^l N^{L-1-l},
  with the N families absent when N = 1. W_r(t) is S at beta = b + a r.

  For moderate t the double sum is taken directly. For small t (where the
  direct sum needs ~t^{-1/a} terms) the Mellin expansion
    W_r(t) = sum_i (-1)^i D(-a(i+r) - b) t^i / i!,  D = dirichlet_d(M, N, L, .)
  is used; it omits only exponentially small terms below the switch point,
  and is accepted only once its terms have dropped below 1e-18 of the sum.
*/
class DoubleExpSeries {
 public:
  DoubleExpSeries(double a, double b, int M, int N, int L, int max_shift);

  /// W_r(t), 0 <= r <= max_shift, t > 0.
  [[nodiscard]] double operator()(int r, double t) const;
  [[nodiscard]] double direct(int r, double t) const;
  /// Mellin expansion; returns false when it has not converged at this t.
  [[nodiscard]] bool small_t(int r, double t, double& value) const;
  /// t * (largest lattice unit)^a below which the expansion is tried.
  [[nodiscard]] double switch_point() const { return switch_point_; }
  [[nodiscard]] double unit_scale() const { return unit_scale_; }

  std::int64_t max_groups = 10000000;

 private:
  struct Family {
    double coef;
    double scale;
    int P;
  };

  double a_;
  double b_;
  int max_shift_;
  std::vector<Family> families_;
  double unit_scale_ = 0.0;
  double switch_point_ = 0.0;
  // coefficients_[r][i] = (-1)^i D(-a(i+r)-b) / i! as sign and log magnitude.
  std::vector<std::vector<SignedLog>> coefficients_;
};

/// Phi_{a,b,M,J}(w) for w > 0 from the termwise-differentiated double sum.
[[nodiscard]] double phi(const PhiParams& p, double w);

/*
  Psi parameters: j has R >= 1 entries summing to J, l has R-1 or R entries
  summing to L-1, and the chain is
    (-1)^J d^{j_1} (ln t/a)^{l_1} d^{j_2} (ln t/a)^{l_2} ... applied to S_b.
  N = 1 drops the N families.
*/
struct PsiParams {
  double a = 1.0;
  double b = 0.0;
  int M = 3;
  int N = 2;
  int L = 1;
  std::vector<int> j{0};
  std::vector<int> l{0};

  void validate() const;
  [[nodiscard]] int J() const;
};

/// The chain of PsiParams applied to exp(-t), with the (-1)^J sign included.
[[nodiscard]] ExpLogSum psi_chain_template(const PsiParams& p);

class PsiFunction {
 public:
  explicit PsiFunction(const PsiParams& p);

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] const ExpLogSum& chain() const { return chain_; }
  [[nodiscard]] const PsiParams& params() const { return params_; }

 private:
  PsiParams params_;
  ExpLogSum chain_;
  DoubleExpSeries series_;
};

[[nodiscard]] double psi(const PsiParams& p, double t);

struct LatticeRange {
  int n_min = -120;
  int n_max = 60;

  void validate() const;
};

struct LatticeSumResult {
  double value = 0.0;
  double target = 0.0;
  double abs_err = 0.0;
  LatticeRange range;
  double z = 0.0;
  std::vector<double> terms;  // n_min .. n_max
};

/// sum_n M^{(Ja+1+b)(n+z)} Phi_{a,b,M,J}(M^{a(n+z)}); target Gamma((1+b)/a + J)/a.
[[nodiscard]] LatticeSumResult lattice_sum_single(const PhiParams& p, double z, const LatticeRange& range = {},
                                                  const Execution& exec = {});

/// sum_n c^{(aJ+1+b)(n+z)} [Phi_{a,b,M,J} - Phi_{a,b,N,J}](c^{a(n+z)}), c = M/N > 1; same target.
[[nodiscard]] LatticeSumResult lattice_sum_pair(double a, double b, int M, int N, int J, double z,
                                                const LatticeRange& range = {}, const Execution& exec = {});

/*
  sum_n c^{(aJ+1+b)(n+z)} Psi(c^{a(n+z)}) / (ln c)^{L-1}, c = M/N;
  target (L-1)! Gamma((1+b)/a + J)/a.
*/
[[nodiscard]] LatticeSumResult psi_lattice_sum(const PsiParams& p, double z, const LatticeRange& range = {},
                                               const Execution& exec = {});

struct ClosedFormRow {
  int id = 0;
  double value = 0.0;
  double target = 1.0;
  double abs_err = 0.0;
};

/*
  Four lattice series equal to 1 for every real z (u = c^{n+z}):
    1: u/(e^u+1), c = 2
    2: u^2 e^u/(e^u+1)^2, c = 2
    3: u (e^u+2)/(e^{2u}+e^u+1), c = 3
    4: u (2e^u+1)/(e^{3u}+2e^{2u}+2e^u+1), c = 3/2
*/
[[nodiscard]] std::vector<ClosedFormRow> closed_form_suite(double z, const LatticeRange& range = {});

}  // namespace zsk
