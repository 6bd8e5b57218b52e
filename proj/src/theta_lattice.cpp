#include "zsk/theta_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "zsk/compensated.hpp"
#include "zsk/error.hpp"

namespace zsk {

namespace {

constexpr int kExpansionTerms = 40;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool same_rate(double x, double y) {
  return x == y || std::nextafter(x, y) == y;
}

SignedLog signed_log_of(double v) {
  if (v == 0.0) return {0, 0.0};
  return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
}

}  // namespace

void PhiParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw domain_error("Phi: a must be > 0");
  if (!std::isfinite(b) || !(b > -J * a - 1.0)) throw domain_error("Phi: requires b > -J a - 1");
  if (M < 2) throw domain_error("Phi: M must be >= 2");
  if (J < 0) throw domain_error("Phi: J must be >= 0");
}

double ExpLogTerm::operator()(double t) const {
  if (!(t > 0.0)) throw domain_error("ExpLogTerm: t must be > 0");
  if (coeff == 0.0) return 0.0;
  return coeff * std::pow(t, tpow) * std::pow(std::log(t), logpow) * std::exp(-rate * t);
}

ExpLogSum explog_normalize(ExpLogSum terms) {
  for (const ExpLogTerm& term : terms) {
    if (term.logpow < 0 || !(term.rate >= 0.0)) throw domain_error("ExpLogTerm: logpow >= 0 and rate >= 0 required");
  }
  std::sort(terms.begin(), terms.end(), [](const ExpLogTerm& x, const ExpLogTerm& y) {
    return std::tie(x.rate, x.tpow, x.logpow) < std::tie(y.rate, y.tpow, y.logpow);
  });
  ExpLogSum out;
  for (const ExpLogTerm& term : terms) {
    if (!out.empty() && out.back().tpow == term.tpow && out.back().logpow == term.logpow &&
        same_rate(out.back().rate, term.rate)) {
      out.back().coeff += term.coeff;
    } else {
      out.push_back(term);
    }
  }
  std::erase_if(out, [](const ExpLogTerm& term) { return term.coeff == 0.0; });
  return out;
}

ExpLogSum explog_differentiate(const ExpLogSum& terms) {
  ExpLogSum out;
  for (const ExpLogTerm& term : terms) {
    if (term.tpow != 0) out.push_back({term.tpow * term.coeff, term.tpow - 1, term.logpow, term.rate});
    if (term.logpow != 0) out.push_back({term.logpow * term.coeff, term.tpow - 1, term.logpow - 1, term.rate});
    if (term.rate != 0.0) out.push_back({-term.rate * term.coeff, term.tpow, term.logpow, term.rate});
  }
  return explog_normalize(std::move(out));
}

ExpLogSum explog_times_log(const ExpLogSum& terms, int l, double a) {
  if (l < 0) throw domain_error("ExpLogTerm: log power must be >= 0");
  if (!(a > 0.0)) throw domain_error("ExpLogTerm: a must be > 0");
  ExpLogSum out = terms;
  const double scale = std::pow(a, -l);
  for (ExpLogTerm& term : out) {
    term.coeff *= scale;
    term.logpow += l;
  }
  return explog_normalize(std::move(out));
}

ExpLogSum explog_times_power(const ExpLogSum& terms, int p) {
  ExpLogSum out = terms;
  for (ExpLogTerm& term : out) term.tpow += p;
  return explog_normalize(std::move(out));
}

double explog_evaluate(const ExpLogSum& terms, double t) {
  CompensatedAccumulator acc;
  for (const ExpLogTerm& term : terms) acc.add(term(t));
  return acc.value();
}

SignedLog dirichlet_d_signed(int M, int N, int L, double s) {
  if (M < 1 || N < 1 || M == N) throw domain_error("dirichlet_d: requires M, N >= 1 and M != N");
  if (L < 1) throw domain_error("dirichlet_d: L must be >= 1");
  if (s == 1.0) {
    if (L > 1) return {0, 0.0};
    return signed_log_of(std::log(static_cast<double>(M) / N));
  }
  // N^{1-s} - M^{1-s} = M^{1-s} expm1((1-s) ln(N/M)).
  const double e = 1.0 - s;
  const double ratio = std::expm1(e * std::log(static_cast<double>(N) / M));
  if (ratio == 0.0) return {0, 0.0};
  const SignedLog z = zeta_real_signed(s);
  if (z.sign == 0) return {0, 0.0};
  int sign = z.sign;
  if (ratio < 0.0 && L % 2 == 1) sign = -sign;
  return {sign, L * (e * std::log(static_cast<double>(M)) + std::log(std::fabs(ratio))) + z.log_magnitude};
}

double dirichlet_d(int M, int N, int L, double s) { return dirichlet_d_signed(M, N, L, s).value(); }

DoubleExpSeries::DoubleExpSeries(double a, double b, int M, int N, int L, int max_shift)
    : a_(a), b_(b), max_shift_(max_shift) {
  if (!(a > 0.0) || !std::isfinite(a)) throw domain_error("kernel series: a must be > 0");
  if (!std::isfinite(b)) throw domain_error("kernel series: b must be finite");
  if (M < 2 || N < 1 || M == N) throw domain_error("kernel series: requires M >= 2, N >= 1, M != N");
  if (L < 1) throw domain_error("kernel series: L must be >= 1");
  if (max_shift < 0) throw domain_error("kernel series: max_shift must be >= 0");

  for (int l = 0; l < L; ++l) {
    const double coef = binomial(L - 1, l) * std::pow(-static_cast<double>(M), l) * std::pow(N, L - 1 - l);
    const double scale = std::pow(static_cast<double>(M), l) * std::pow(static_cast<double>(N), L - 1 - l);
    families_.push_back({coef, scale, M});
    if (N > 1) families_.push_back({-coef, scale, N});
  }
  for (const Family& f : families_) unit_scale_ = std::max(unit_scale_, f.scale * f.P);

  // Beyond this point the neglected exponentially small terms of the expansion
  // are no longer negligible (a > 2) or the direct sum is cheap anyway.
  switch_point_ = a < 1.0 ? 1.0 : (a <= 2.0 ? 0.1 : std::pow(0.1, a - 1.0));

  coefficients_.resize(static_cast<std::size_t>(max_shift) + 1);
  for (int r = 0; r <= max_shift; ++r) {
    auto& row = coefficients_[static_cast<std::size_t>(r)];
    for (int i = 0; i < kExpansionTerms; ++i) {
      SignedLog d = dirichlet_d_signed(M, N, L, -a * (i + r) - b);
      if (i % 2 == 1) d.sign = -d.sign;
      d.log_magnitude -= std::lgamma(i + 1.0);
      row.push_back(d);
    }
  }
}

double DoubleExpSeries::direct(int r, double t) const {
  if (r < 0 || r > max_shift_) throw domain_error("kernel series: shift out of range");
  if (!(t > 0.0) || !std::isfinite(t)) throw domain_error("kernel series: t must be > 0");
  const double beta = b_ + a_ * r;
  const double peak = beta > 0.0 ? std::pow(beta / (a_ * t), 1.0 / a_) : 0.0;
  auto log_g = [&](double y) { return beta * std::log(y) - t * std::pow(y, a_); };

  CompensatedAccumulator acc;
  for (const Family& f : families_) {
    for (std::int64_t n = 1;; ++n) {
      if (n > max_groups) throw convergence_error("kernel series: group limit reached");
      const double top = f.scale * static_cast<double>(f.P * n);
      CompensatedAccumulator group;
      for (int k = 1; k < f.P; ++k) group.add(std::exp(log_g(f.scale * static_cast<double>(f.P * n - k))));
      group.add(-(f.P - 1) * std::exp(log_g(top)));
      acc.add(f.coef * group.value());

      const double low = f.scale * static_cast<double>(f.P * n - f.P + 1);
      const double bound = std::fabs(f.coef) * f.P *
                           std::exp(std::max(beta * std::log(low), beta * std::log(top)) - t * std::pow(low, a_));
      if (low > peak && (bound <= 1e-19 * std::fabs(acc.value()) || bound < std::numeric_limits<double>::min())) {
        break;
      }
    }
  }
  return acc.value();
}

bool DoubleExpSeries::small_t(int r, double t, double& value) const {
  if (r < 0 || r > max_shift_) throw domain_error("kernel series: shift out of range");
  if (!(t > 0.0)) throw domain_error("kernel series: t must be > 0");
  if (t * std::pow(unit_scale_, a_) > switch_point_) return false;
  const auto& row = coefficients_[static_cast<std::size_t>(r)];
  const double lt = std::log(t);
  std::vector<double> terms;
  terms.reserve(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    terms.push_back(row[i].sign == 0 ? 0.0 : row[i].sign * std::exp(row[i].log_magnitude + i * lt));
  }
  CompensatedAccumulator acc;
  double largest = 0.0;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    acc.add(terms[i]);
    largest = std::max(largest, std::fabs(terms[i]));
    const double limit = 1e-18 * std::fabs(acc.value());
    if (std::fabs(terms[i]) <= limit && std::fabs(terms[i + 1]) <= limit) {
      if (largest > 1e2 * std::fabs(acc.value())) return false;
      value = acc.value();
      return true;
    }
  }
  return false;
}

double DoubleExpSeries::operator()(int r, double t) const {
  double v = 0.0;
  if (small_t(r, t, v)) return v;
  return direct(r, t);
}

double phi(const PhiParams& p, double w) {
  p.validate();
  if (!(w > 0.0) || !std::isfinite(w)) throw domain_error("phi: w must be > 0");
  const DoubleExpSeries series(p.a, p.b, p.M, 1, 1, p.J);
  return series(p.J, w);
}

void PsiParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw domain_error("Psi: a must be > 0");
  if (M < 2 || N < 1 || M == N) throw domain_error("Psi: requires M >= 2, N >= 1, M != N");
  if (L < 1) throw domain_error("Psi: L must be >= 1");
  if (j.empty()) throw domain_error("Psi: j must have at least one entry");
  if (l.size() != j.size() && l.size() + 1 != j.size()) throw domain_error("Psi: l must have R or R-1 entries");
  if (std::any_of(j.begin(), j.end(), [](int v) { return v < 0; }) ||
      std::any_of(l.begin(), l.end(), [](int v) { return v < 0; })) {
    throw domain_error("Psi: j and l entries must be >= 0");
  }
  if (std::accumulate(l.begin(), l.end(), 0) != L - 1) throw domain_error("Psi: l entries must sum to L-1");
  if (!std::isfinite(b) || !(b > -J() * a - 1.0)) throw domain_error("Psi: requires b > -J a - 1");
}

int PsiParams::J() const { return std::accumulate(j.begin(), j.end(), 0); }

ExpLogSum psi_chain_template(const PsiParams& p) {
  p.validate();
  // Innermost operation first: the chain reads d^{j_1} (ln/a)^{l_1} d^{j_2} ...
  ExpLogSum terms{{p.J() % 2 == 0 ? 1.0 : -1.0, 0, 0, 1.0}};
  const std::size_t R = p.j.size();
  for (std::size_t idx = R; idx-- > 0;) {
    if (idx < p.l.size()) terms = explog_times_log(terms, p.l[idx], p.a);
    for (int d = 0; d < p.j[idx]; ++d) terms = explog_differentiate(terms);
  }
  return terms;
}

PsiFunction::PsiFunction(const PsiParams& p)
    : params_(p), chain_(psi_chain_template(p)), series_(p.a, p.b, p.M, p.N, p.L, p.J()) {}

double PsiFunction::operator()(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw domain_error("psi: t must be > 0");
  // A template term c t^p (ln t)^q e^{-t} stands for c lambda^{J+p} t^p (ln t)^q e^{-lambda t}
  // summed over the series, i.e. c t^p (ln t)^q W_{J+p}(t).
  const int J = params_.J();
  std::vector<double> W(static_cast<std::size_t>(J) + 1, std::numeric_limits<double>::quiet_NaN());
  CompensatedAccumulator acc;
  for (const ExpLogTerm& term : chain_) {
    const int r = J + term.tpow;
    if (r < 0 || r > J) throw evaluation_error("psi: unexpected chain term");
    double& w = W[static_cast<std::size_t>(r)];
    if (std::isnan(w)) w = series_(r, t);
    if (w == 0.0) continue;
    acc.add(term.coeff * std::pow(t, term.tpow) * std::pow(std::log(t), term.logpow) * w);
  }
  return acc.value();
}

double psi(const PsiParams& p, double t) { return PsiFunction(p)(t); }

void LatticeRange::validate() const {
  if (n_min > 0 || n_max < 0) throw domain_error("lattice range: requires n_min <= 0 <= n_max");
}

namespace {

template <typename Kernel>
LatticeSumResult lattice_sum(double log_c, double a, double exponent, double z, double target,
                             const LatticeRange& range, const Execution& exec, Kernel&& kernel) {
  range.validate();
  if (!std::isfinite(z)) throw domain_error("lattice sum: z must be finite");
  exec.validate();
  const std::int64_t count = static_cast<std::int64_t>(range.n_max) - range.n_min + 1;
  LatticeSumResult r;
  r.terms = parallel_map<double>(
      count,
      [&](std::int64_t i) {
        const double x = static_cast<double>(range.n_min + i) + z;
        const double f = kernel(std::exp(a * x * log_c));
        return f == 0.0 ? 0.0 : std::exp(exponent * x * log_c) * f;
      },
      exec.threads);
  CompensatedAccumulator acc;
  for (double term : r.terms) acc.add(term);
  r.value = acc.value();
  r.target = target;
  r.abs_err = std::fabs(r.value - r.target);
  r.range = range;
  r.z = z;
  return r;
}

}  // namespace

LatticeSumResult lattice_sum_single(const PhiParams& p, double z, const LatticeRange& range, const Execution& exec) {
  p.validate();
  const DoubleExpSeries series(p.a, p.b, p.M, 1, 1, p.J);
  const double exponent = p.J * p.a + 1.0 + p.b;
  const double target = gamma_ref((1.0 + p.b) / p.a + p.J) / p.a;
  return lattice_sum(std::log(static_cast<double>(p.M)), p.a, exponent, z, target, range, exec,
                     [&](double t) { return series(p.J, t); });
}

LatticeSumResult lattice_sum_pair(double a, double b, int M, int N, int J, double z, const LatticeRange& range,
                                  const Execution& exec) {
  const PhiParams p{a, b, M, J};
  p.validate();
  if (!(N >= 1 && M > N)) throw domain_error("lattice_sum_pair: requires M > N >= 1");
  const DoubleExpSeries series(a, b, M, N, 1, J);
  const double exponent = J * a + 1.0 + b;
  const double target = gamma_ref((1.0 + b) / a + J) / a;
  return lattice_sum(std::log(static_cast<double>(M) / N), a, exponent, z, target, range, exec,
                     [&](double t) { return series(J, t); });
}

LatticeSumResult psi_lattice_sum(const PsiParams& p, double z, const LatticeRange& range, const Execution& exec) {
  const PsiFunction f(p);
  const int J = p.J();
  const double log_c = std::log(static_cast<double>(p.M) / p.N);
  const double exponent = J * p.a + 1.0 + p.b;
  const double target = std::tgamma(static_cast<double>(p.L)) * gamma_ref((1.0 + p.b) / p.a + J) / p.a;
  LatticeSumResult r = lattice_sum(log_c, p.a, exponent, z, target, range, exec, [&](double t) { return f(t); });
  const double norm = std::pow(log_c, p.L - 1);
  for (double& term : r.terms) term /= norm;
  CompensatedAccumulator acc;
  for (double term : r.terms) acc.add(term);
  r.value = acc.value();
  r.abs_err = std::fabs(r.value - r.target);
  return r;
}

std::vector<ClosedFormRow> closed_form_suite(double z, const LatticeRange& range) {
  range.validate();
  if (!std::isfinite(z)) throw domain_error("closed_form_suite: z must be finite");
  // Each summand is written in e^{-u} so that large u underflows to 0 cleanly.
  struct Identity {
    double base;
    double (*term)(double);
  };
  const Identity identities[] = {
      {2.0, [](double u) { const double q = std::exp(-u); return u * q / (1.0 + q); }},
      {2.0, [](double u) { const double q = std::exp(-u); return u * u * q / ((1.0 + q) * (1.0 + q)); }},
      {3.0, [](double u) { const double q = std::exp(-u); return u * (q + 2.0 * q * q) / (1.0 + q + q * q); }},
      {1.5, [](double u) {
         const double q = std::exp(-u);
         return u * (2.0 * q * q + q * q * q) / (1.0 + 2.0 * q + 2.0 * q * q + q * q * q);
       }},
  };
  std::vector<ClosedFormRow> rows;
  int id = 1;
  for (const Identity& identity : identities) {
    CompensatedAccumulator acc;
    for (int n = range.n_min; n <= range.n_max; ++n) {
      acc.add(identity.term(std::pow(identity.base, n + z)));
    }
    rows.push_back({id++, acc.value(), 1.0, std::fabs(acc.value() - 1.0)});
  }
  return rows;
}

}  // namespace zsk
