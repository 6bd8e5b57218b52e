#include "zsk/gzeta.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "zsk/detail/log_series.hpp"
#include "zsk/error.hpp"

namespace zsk {

namespace {

using cplx = std::complex<double>;
using Point = std::vector<std::int64_t>;

Point random_point(std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<std::int64_t> coord(1, 40);
  Point n(static_cast<std::size_t>(d));
  for (auto& v : n) v = coord(rng);
  return n;
}

Point scaled(const Point& n, std::int64_t lambda) {
  Point out = n;
  for (auto& v : out) v *= lambda;
  return out;
}

bool close(cplx x, cplx ref) {
  return std::isfinite(x.real()) && std::isfinite(x.imag()) && std::abs(x - ref) <= 1e-9 * (std::abs(ref) + 1e-300);
}

void require_dim(int d) {
  if (d < 1 || d > 8) throw domain_error("generalized zeta: dimension must be in [1, 8]");
}

/// Advances n over [1, box]^size in lexicographic order; false once exhausted.
bool next_point(std::span<std::int64_t> n, std::int64_t box) {
  for (std::size_t i = n.size(); i-- > 0;) {
    if (n[i] < box) {
      ++n[i];
      return true;
    }
    n[i] = 1;
  }
  return false;
}

/*
  sum_{k in [0, M-1]^d} g(Mn - k) - M^d g(Mn), written as
  t0 = g(Mn); s = t0; s += g(Mn - k) for k != 0 in lexicographic order; s -= M^d t0.
*/
template <typename Value, typename G>
Value lattice_group(const Point& n, int M, double Md, G& g, Point& scratch, std::vector<int>& k) {
  const std::size_t d = n.size();
  for (std::size_t i = 0; i < d; ++i) scratch[i] = M * n[i];
  const Value t0 = g(LatticePoint(scratch));
  Value s = t0;
  std::fill(k.begin(), k.end(), 0);
  for (;;) {
    std::size_t i = d;
    while (i-- > 0) {
      if (k[i] + 1 < M) {
        ++k[i];
        break;
      }
      k[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
    for (std::size_t c = 0; c < d; ++c) scratch[c] = M * n[c] - k[c];
    s += g(LatticePoint(scratch));
  }
  s -= Md * t0;
  return s;
}

/// Slab sum over n_1 = slab, all other coordinates in [1, box]. For d = 1 the group itself.
template <typename Value, typename G>
Value slab_term(int d, std::int64_t slab, std::int64_t box, int M, double Md, G& g) {
  Point n(static_cast<std::size_t>(d), 1);
  Point scratch(static_cast<std::size_t>(d));
  std::vector<int> k(static_cast<std::size_t>(d));
  n[0] = slab;
  if (d == 1) return lattice_group<Value>(n, M, Md, g, scratch, k);
  accumulator_for_t<Value> acc;
  do {
    acc.add(lattice_group<Value>(n, M, Md, g, scratch, k));
  } while (next_point(std::span<std::int64_t>(n).subspan(1), box));
  return acc.value();
}

void check_work(int d, int M, std::int64_t box, const GzetaOptions& opts) {
  if (M < 2) throw domain_error("generalized zeta: M must be >= 2");
  if (box < 1) throw domain_error("generalized zeta: box must be >= 1");
  opts.exec.validate();
  const double work = std::pow(static_cast<double>(box) * M, d);
  if (work > opts.work_limit) throw domain_error("generalized zeta: box^d M^d exceeds the work limit");
  if (static_cast<double>(box) * M >= 9007199254740992.0) throw domain_error("generalized zeta: index too large");
}

cplx series_at_box(const HomogeneousSummand& Z, int M, cplx s, std::int64_t box, const Execution& exec) {
  const double Md = std::pow(static_cast<double>(M), Z.dim);
  auto g = [&](LatticePoint m) { return Z.eval(m, s); };
  auto term = [&](std::int64_t slab) { return slab_term<cplx>(Z.dim, slab, box, M, Md, g); };
  return chunked_sum<cplx>(1, box, term, exec).value();
}

}  // namespace

void check_homogeneity(const HomogeneousSummand& Z, cplx s) {
  require_dim(Z.dim);
  if (!Z.eval) throw domain_error("generalized zeta: summand has no evaluator");
  std::mt19937_64 rng(0x4011);
  for (int M : {2, 3}) {
    const cplx factor = std::exp(-s * std::log(static_cast<double>(M)));
    for (int trial = 0; trial < 16; ++trial) {
      const Point n = random_point(rng, Z.dim);
      const cplx base = Z.eval(n, s);
      if (!close(Z.eval(scaled(n, M), s), factor * base)) {
        throw domain_error("generalized zeta: summand '" + Z.name + "' is not homogeneous of degree -s");
      }
    }
  }
}

HomogeneousSummand power_summand() {
  return {1, [](LatticePoint n, cplx s) { return std::exp(-s * std::log(static_cast<double>(n[0]))); }, "n^-s"};
}

HomogeneousSummand zeta_hat2(int d, std::vector<std::vector<double>> B, std::vector<double> upsilon) {
  if (d < 2) throw domain_error("zeta_hat2: d must be >= 2");
  require_dim(d);
  if (B.empty() || B.size() != upsilon.size()) throw domain_error("zeta_hat2: B and upsilon must have I >= 1 rows");
  double total = 0.0;
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (B[i].size() != static_cast<std::size_t>(d)) throw domain_error("zeta_hat2: every B row needs d entries");
    for (double b : B[i]) {
      if (!(b > 0.0) || !std::isfinite(b)) throw domain_error("zeta_hat2: B entries must be positive");
    }
    if (!std::isfinite(upsilon[i])) throw domain_error("zeta_hat2: upsilon must be finite");
    total += upsilon[i];
  }
  if (std::fabs(total - 1.0) > 1e-12) throw domain_error("zeta_hat2: upsilon must sum to 1");

  auto eval = [d, B = std::move(B), upsilon = std::move(upsilon)](LatticePoint n, cplx s) {
    double numerator = 0.0, sum = 0.0;
    for (int j = 0; j < d; ++j) sum += static_cast<double>(n[j]);
    for (int j = 0; j + 1 < d; ++j) numerator += (j + 1) * static_cast<double>(n[j]) * static_cast<double>(n[j + 1]);
    double log_product = 0.0;
    for (std::size_t i = 0; i < B.size(); ++i) {
      double row = 0.0;
      for (int j = 0; j < d; ++j) row += B[i][j] * static_cast<double>(n[j]);
      log_product += upsilon[i] * std::log(row);
    }
    return numerator / (sum * sum) * std::exp(-s * log_product);
  };
  return {d, std::move(eval), "zeta_hat2"};
}

void XiPsiPair::check() const {
  require_dim(dim);
  if (!xi || !psi) throw domain_error("xi/psi pair: missing function");
  std::mt19937_64 rng(0x4012);
  for (std::int64_t lambda : {2, 3}) {
    for (int trial = 0; trial < 16; ++trial) {
      const Point n = random_point(rng, dim);
      const double p = psi(n);
      if (!(p > 0.0) || !std::isfinite(p)) throw domain_error("xi/psi pair: psi must be positive");
      if (!close(xi(scaled(n, lambda)), xi(n))) throw domain_error("xi/psi pair: xi is not homogeneous of degree 0");
      if (!close(psi(scaled(n, lambda)), static_cast<double>(lambda) * p)) {
        throw domain_error("xi/psi pair: psi is not homogeneous of degree 1");
      }
    }
  }
}

HomogeneousSummand XiPsiPair::summand() const {
  return {dim, [xi = xi, psi = psi](LatticePoint n, cplx s) { return xi(n) * std::exp(-s * std::log(psi(n))); },
          name};
}

XiPsiPair unit_pair() {
  return {1, [](LatticePoint) { return 1.0; }, [](LatticePoint n) { return static_cast<double>(n[0]); }, 1.0,
          "unit"};
}

XiPsiPair ratio_pair() {
  return {2,
          [](LatticePoint n) { return static_cast<double>(n[0]) / static_cast<double>(n[0] + n[1]); },
          [](LatticePoint n) { return static_cast<double>(n[0] + n[1]); },
          std::nullopt,
          "n1/(n1+n2), n1+n2"};
}

GzetaSeriesResult gzeta_difference_series(const HomogeneousSummand& Z, int M, cplx s, std::int64_t box,
                                          const GzetaOptions& opts) {
  check_work(Z.dim, M, box, opts);
  if (!(s.real() > Z.dim - 1)) throw domain_error("generalized zeta: requires Re(s) > d - 1");
  check_homogeneity(Z, s);
  GzetaSeriesResult r;
  r.box = box;
  r.value = series_at_box(Z, M, s, box, opts.exec);
  r.half_box_value = box >= 2 ? series_at_box(Z, M, s, box / 2, opts.exec) : r.value;
  r.refinement = std::abs(r.value - r.half_box_value);
  return r;
}

InvarianceReport gzeta_invariance_check(const HomogeneousSummand& Z, const std::vector<int>& Ms, std::int64_t box,
                                        const GzetaOptions& opts) {
  if (Ms.empty()) throw domain_error("invariance check: no M values");
  InvarianceReport report;
  report.all_positive = true;
  double lo = 0.0, hi = 0.0;
  for (int M : Ms) {
    check_work(Z.dim, M, box, opts);
    const cplx s(Z.dim, 0.0);
    check_homogeneity(Z, s);
    const double ratio = series_at_box(Z, M, s, box, opts.exec).real() / std::log(static_cast<double>(M));
    report.rows.push_back({M, ratio});
    if (report.rows.size() == 1) lo = hi = ratio;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    report.all_positive = report.all_positive && ratio > 0.0;
  }
  report.spread = hi - lo;
  return report;
}

QuadratureResult gzeta_quadrature(const XiPsiPair& P, int M, const PeriodicFunction& f, std::int64_t box,
                                  const GzetaOptions& opts, double c_floor) {
  P.check();
  check_work(P.dim, M, box, opts);
  const int d = P.dim;
  const double Md = std::pow(static_cast<double>(M), d);
  const long double log_base = std::log(static_cast<long double>(M));

  auto weight = [&](LatticePoint m) {
    const double p = P.psi(m);
    double pd = p;
    for (int i = 1; i < d; ++i) pd *= p;
    return P.xi(m) / pd;
  };
  auto node = [&](LatticePoint m) { return detail::log_node(std::log(static_cast<long double>(P.psi(m))), log_base); };
  auto series = [&](auto&& eval) {
    auto g = [&](LatticePoint m) { return eval(node(m)) * weight(m); };
    auto term = [&](std::int64_t slab) { return slab_term<double>(d, slab, box, M, Md, g); };
    return detail::split_group_sum<double>(box, term, opts.exec);
  };

  double c_P = 0.0;
  if (P.residue) {
    c_P = *P.residue;
  } else {
    c_P = series([](double) { return 1.0; }).total.value() / std::log(static_cast<double>(M));
  }
  if (!(std::fabs(c_P) >= c_floor)) throw domain_error("gzeta_quadrature: c_P below floor");

  const auto s = series([&f](double x) { return f.at_reduced(x); });
  QuadratureResult r;
  r.normalizer = c_P * std::log(static_cast<double>(M));
  r.raw_series_sum = s.total.value();
  r.value = r.raw_series_sum / r.normalizer;
  r.groups_used = box;
  r.tail_estimate = detail::aposteriori_tail(s, box) / std::fabs(r.normalizer);
  r.tail_is_bound = false;
  return r;
}

}  // namespace zsk
