#include "zsk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <ostream>
#include <utility>
#include <variant>

#include "zsk/csv.hpp"
#include "zsk/detail/gauss_legendre.hpp"
#include "zsk/detail/log_series.hpp"

namespace zsk {

namespace {

using detail::NodeFamily;
using detail::NodeWeight;

// Families, normalizer and (for lattice / continued-fraction schemes) the
// normalizing function evaluated at a node.
struct BuiltScheme {
  std::vector<NodeFamily> families;
  double normalizer = 1.0;
  RealMap g_at_node;
};

void require_base(int M) {
  if (M < 2) throw domain_error("scheme: M must be >= 2");
}

BuiltScheme build(const PlainScheme& s) {
  require_base(s.M);
  return {{detail::plain_family(s.M)}, std::log(static_cast<double>(s.M)), {}};
}

BuiltScheme build(const TransformedScheme& s) {
  require_base(s.M);
  if (!s.phi || !s.dphi) throw domain_error("transformed scheme: phi and phi' are required");
  if (std::fabs(s.phi(1.0) - s.phi(0.0) - 1.0) > 1e-10) {
    throw domain_error("transformed scheme: phi(1) - phi(0) must equal 1");
  }
  const long double log_base = std::log(static_cast<long double>(s.M));
  RealMap phi = s.phi;
  RealMap dphi = s.dphi;
  NodeFamily fam{s.M, 1.0, [log_base, phi, dphi](std::int64_t m) {
                   const double x = detail::log_node(m, log_base);
                   return NodeWeight{unit_fraction(phi(x)), dphi(x) / static_cast<double>(m)};
                 }};
  return {{std::move(fam)}, std::log(static_cast<double>(s.M)), {}};
}

BuiltScheme build(const LatticeScheme& s) {
  require_base(s.M);
  if (s.L < 1) throw domain_error("lattice scheme: L must be >= 1");
  if (!s.chi || !s.phi || !s.dphi || !s.g) throw domain_error("lattice scheme: chi, phi, phi' and g are required");
  if (std::fabs(s.phi(0.0)) > 1e-12 || std::fabs(s.phi(static_cast<double>(s.L)) - 1.0) > 1e-10) {
    throw domain_error("lattice scheme: phi(0) = 0 and phi(L) = 1 are required");
  }
  for (int j = 0; j < 16; ++j) {
    const double x = s.L * (j + 0.5) / 16.0;
    if (std::fabs(s.chi(s.phi(x)) - x) > 1e-9 * std::max(1.0, x)) {
      throw domain_error("lattice scheme: chi is not the inverse of phi");
    }
  }
  const LatticeScheme sc = s;
  auto G = [sc](double y) {
    double total = 0.0;
    for (int l = 0; l < sc.L; ++l) total += sc.g(sc.phi(l + y)) * sc.dphi(l + y);
    return total;
  };
  const long double log_base = std::log(static_cast<long double>(s.M));
  NodeFamily fam{s.M, 1.0, [sc, G, log_base](std::int64_t m) {
                   const double x = detail::log_node(m, log_base);
                   const double node = unit_fraction(sc.chi(x));
                   const double gv = G(node);
                   if (!(std::fabs(gv) >= sc.g_floor)) {
                     throw domain_error("lattice scheme: normalizer below floor at a node");
                   }
                   return NodeWeight{node, sc.g(x) / (static_cast<double>(m) * gv)};
                 }};
  return {{std::move(fam)}, std::log(static_cast<double>(s.M)), G};
}

BuiltScheme build(const ContinuedFractionScheme& s) {
  require_base(s.M);
  if (s.L < 1) throw domain_error("continued-fraction scheme: L must be >= 1");
  if (!s.g) throw domain_error("continued-fraction scheme: g is required");
  const auto G = std::make_shared<ContinuedFractionNormalizer>(s.L, s.g, s.inner_tol);
  const long double log_base = std::log(static_cast<long double>(s.M));
  const ContinuedFractionScheme sc = s;
  NodeFamily fam{s.M, 1.0, [sc, G, log_base](std::int64_t m) {
                   const double x = detail::log_node(m, log_base);
                   const double node = x == 0.0 ? 0.0 : unit_fraction(sc.L / x);
                   const double gv = (*G)(node);
                   if (!(std::fabs(gv) >= sc.g_floor)) {
                     throw domain_error("continued-fraction scheme: normalizer below floor at a node");
                   }
                   return NodeWeight{node, sc.g(x) / (static_cast<double>(m) * gv)};
                 }};
  return {{std::move(fam)}, s.L * std::log(static_cast<double>(s.M)), [G](double y) { return (*G)(y); }};
}

BuiltScheme build(const RationalBaseScheme& s) {
  if (s.M < 2 || s.N < 2) throw domain_error("rational-base scheme: M and N must be >= 2");
  if (s.M == s.N) throw domain_error("rational-base scheme: M must differ from N");
  const long double log_base = std::log(static_cast<long double>(s.M)) - std::log(static_cast<long double>(s.N));
  auto at = [log_base](std::int64_t m) {
    return NodeWeight{detail::log_node(m, log_base), 1.0 / static_cast<double>(m)};
  };
  return {{NodeFamily{s.M, 1.0, at}, NodeFamily{s.N, -1.0, at}},
          std::log(static_cast<double>(s.M) / static_cast<double>(s.N)),
          {}};
}

BuiltScheme build(const DerivativeFormScheme& s) {
  if (s.M < 2 || s.N < 1) throw domain_error("derivative-form scheme: requires M >= 2 and N >= 1");
  if (s.M == s.N) throw domain_error("derivative-form scheme: M must differ from N");
  if (s.L < 2 || s.L > 6) throw domain_error("derivative-form scheme: L must be in [2, 6]");
  const long double log_base = std::log(static_cast<long double>(s.M)) - std::log(static_cast<long double>(s.N));
  const int power = s.L - 1;
  BuiltScheme out;
  double binom = 1.0;
  for (int l = 0; l <= power; ++l) {
    if (l > 0) binom = binom * (power - l + 1) / l;
    const double scale = std::pow(static_cast<double>(s.M), l) * std::pow(static_cast<double>(s.N), power - l);
    const double coeff = binom * std::pow(-static_cast<double>(s.M), l) * std::pow(static_cast<double>(s.N), power - l);
    const long double log_scale = std::log(static_cast<long double>(scale));
    auto at = [log_base, log_scale, scale, power](std::int64_t m) {
      const long double lw = log_scale + std::log(static_cast<long double>(m));
      const double w = scale * static_cast<double>(m);
      return NodeWeight{detail::log_node(lw, log_base), std::pow(-static_cast<double>(lw), power) / w};
    };
    out.families.push_back(NodeFamily{s.M, coeff, at});
    if (s.N >= 2) out.families.push_back(NodeFamily{s.N, -coeff, at});
  }
  double factorial = 1.0;
  for (int i = 2; i <= power; ++i) factorial *= i;
  out.normalizer = factorial * std::pow(std::log(static_cast<double>(s.M) / static_cast<double>(s.N)), s.L);
  return out;
}

BuiltScheme build_any(const NodeScheme& scheme) {
  return std::visit([](const auto& s) { return build(s); }, scheme);
}

QuadratureResult run(const PeriodicFunction& f, const BuiltScheme& built, std::int64_t groups,
                     const QuadratureOptions& opts) {
  auto eval = [&f](double x) { return f.at_reduced(x); };
  return detail::run_series<double>(built.families, eval, built.normalizer, groups, opts);
}

void attach_bound(QuadratureResult& r, double raw_bound) {
  r.tail_estimate = raw_bound / std::fabs(r.normalizer);
  r.tail_is_bound = true;
}

}  // namespace

std::string scheme_name(const NodeScheme& scheme) {
  struct Namer {
    std::string operator()(const PlainScheme&) const { return "plain"; }
    std::string operator()(const TransformedScheme&) const { return "transformed"; }
    std::string operator()(const LatticeScheme&) const { return "lattice"; }
    std::string operator()(const ContinuedFractionScheme&) const { return "cf"; }
    std::string operator()(const RationalBaseScheme&) const { return "rational"; }
    std::string operator()(const DerivativeFormScheme&) const { return "derivative"; }
  };
  return std::visit(Namer{}, scheme);
}

double scheme_normalizer(const NodeScheme& scheme) { return build_any(scheme).normalizer; }

QuadratureResult integral_logM(const PeriodicFunction& f, int M, std::int64_t groups, const QuadratureOptions& opts) {
  QuadratureResult r = run(f, build(PlainScheme{M}), groups, opts);
  if (f.modulus()) attach_bound(r, tail_bound(f, M, groups));
  return r;
}

QuadratureResult integral_transformed(const PeriodicFunction& f, const RealMap& phi, const RealMap& dphi, int M,
                                      std::int64_t groups, const QuadratureOptions& opts) {
  return run(f, build(TransformedScheme{M, phi, dphi}), groups, opts);
}

QuadratureResult integral_lattice_nodes(const PeriodicFunction& f, const LatticeScheme& scheme, std::int64_t groups,
                                        const QuadratureOptions& opts) {
  return run(f, build(scheme), groups, opts);
}

QuadratureResult integral_cf_nodes(const PeriodicFunction& f, const ContinuedFractionScheme& scheme,
                                   std::int64_t groups, const QuadratureOptions& opts) {
  return run(f, build(scheme), groups, opts);
}

QuadratureResult integral_rational_base(const PeriodicFunction& f, int M, int N, std::int64_t groups,
                                        const QuadratureOptions& opts) {
  QuadratureResult r = run(f, build(RationalBaseScheme{M, N}), groups, opts);
  if (f.modulus()) attach_bound(r, tail_bound_rational(f, M, N, groups));
  return r;
}

QuadratureResult integral_derivative_form(const PeriodicFunction& f, int M, int N, int L, std::int64_t groups,
                                          const QuadratureOptions& opts) {
  return run(f, build(DerivativeFormScheme{M, N, L}), groups, opts);
}

QuadratureResult integrate(const PeriodicFunction& f, const NodeScheme& scheme, std::int64_t groups,
                           const QuadratureOptions& opts) {
  if (const auto* p = std::get_if<PlainScheme>(&scheme)) return integral_logM(f, p->M, groups, opts);
  if (const auto* r = std::get_if<RationalBaseScheme>(&scheme)) {
    return integral_rational_base(f, r->M, r->N, groups, opts);
  }
  return run(f, build_any(scheme), groups, opts);
}

LatticeScheme LatticeScheme::dyadic_rationals(int M) {
  require_base(M);
  const double log_m = std::log(static_cast<double>(M));
  LatticeScheme s;
  s.M = M;
  s.L = M - 1;
  s.chi = [log_m](double x) { return std::expm1(x * log_m); };
  s.phi = [log_m](double y) { return std::log1p(y) / log_m; };
  s.dphi = [log_m](double y) { return 1.0 / ((1.0 + y) * log_m); };
  s.g = [](double) { return 1.0; };
  return s;
}

LatticeScheme LatticeScheme::identity(int M) {
  require_base(M);
  LatticeScheme s;
  s.M = M;
  s.L = 1;
  s.chi = [](double x) { return x; };
  s.phi = [](double y) { return y; };
  s.dphi = [](double) { return 1.0; };
  s.g = [](double) { return 1.0; };
  return s;
}

ContinuedFractionNormalizer::ContinuedFractionNormalizer(int L, RealMap g, double tol) : L_(L), g_(std::move(g)) {
  if (L < 1) throw domain_error("continued-fraction normalizer: L must be >= 1");
  if (!(tol > 0.0)) throw domain_error("continued-fraction normalizer: tolerance must be > 0");
  std::int64_t K = L + 16;
  for (; K <= (std::int64_t{1} << 22); K *= 2) {
    bool ok = true;
    for (double y : {0.0, 0.5, 0.999}) {
      const double a = evaluate(y, K);
      const double b = evaluate(y, 2 * K);
      if (std::fabs(a - b) > tol * std::max(1.0, std::fabs(b))) ok = false;
    }
    if (ok) {
      cutoff_ = K;
      return;
    }
  }
  throw convergence_error("continued-fraction normalizer: inner series did not reach tolerance");
}

double ContinuedFractionNormalizer::operator()(double y) const { return evaluate(y, cutoff_); }

double ContinuedFractionNormalizer::evaluate(double y, std::int64_t K) const {
  const double L = static_cast<double>(L_);
  auto h = [&](double u) {
    const double v = u + y;
    return g_(L / v) / (v * v);
  };
  // Direct part, smallest terms first.
  double direct = 0.0;
  for (std::int64_t n = K - 1; n >= L_; --n) direct += h(static_cast<double>(n));

  // sum_{j>=0} h(K+j) by the Gregory end correction of int_K^inf h.
  std::array<double, 6> d{};
  for (int j = 0; j < 6; ++j) d[j] = h(static_cast<double>(K + j));
  const double h0 = d[0];
  for (int order = 1; order < 6; ++order) {
    for (int j = 5; j >= order; --j) d[j] = d[j] - d[j - 1];
  }
  // d[i] now holds the i-th forward difference at K.
  const double vmax = L / (static_cast<double>(K) + y);
  const auto& gl = detail::gauss_legendre16();
  const double integral =
      (gl.integrate(g_, 0.0, 0.5 * vmax) + gl.integrate(g_, 0.5 * vmax, vmax)) / L;
  const double tail = integral + h0 / 2.0 - d[1] / 12.0 + d[2] / 24.0 - 19.0 * d[3] / 720.0 + 3.0 * d[4] / 160.0 -
                      863.0 * d[5] / 60480.0;
  return direct + tail;
}

std::vector<NodeRecord> node_stream(const NodeScheme& scheme, std::int64_t count) {
  if (count < 0) throw domain_error("node_stream: count must be >= 0");
  const BuiltScheme built = build_any(scheme);
  std::vector<NodeRecord> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t n = 1; static_cast<std::int64_t>(out.size()) < count; ++n) {
    for (std::size_t fi = 0; fi < built.families.size(); ++fi) {
      const NodeFamily& fam = built.families[fi];
      for (std::int64_t k = fam.base - 1; k >= 0; --k) {
        if (static_cast<std::int64_t>(out.size()) >= count) break;
        const NodeWeight nw = fam.at(fam.base * n - k);
        NodeRecord rec;
        rec.group = n;
        rec.k = static_cast<int>(k);
        rec.family = static_cast<int>(fi);
        rec.node = nw.node;
        rec.weight = fam.coefficient * (k == 0 ? -static_cast<double>(fam.base - 1) * nw.weight : nw.weight);
        if (built.g_at_node) rec.g_value = built.g_at_node(nw.node);
        out.push_back(rec);
      }
    }
  }
  return out;
}

void write_nodes_csv(std::ostream& out, const NodeScheme& scheme, const std::vector<NodeRecord>& records) {
  const bool families = std::holds_alternative<RationalBaseScheme>(scheme) ||
                        std::holds_alternative<DerivativeFormScheme>(scheme);
  const bool g_column = std::holds_alternative<LatticeScheme>(scheme) ||
                        std::holds_alternative<ContinuedFractionScheme>(scheme);
  std::vector<std::string> header = {"group", "k", "node", "weight"};
  if (families) header.emplace_back("family");
  if (g_column) header.emplace_back("G");
  write_csv_row(out, header);
  for (const auto& r : records) {
    std::vector<std::string> row = {std::to_string(r.group), std::to_string(r.k), format_number(r.node),
                                    format_number(r.weight)};
    if (families) row.push_back(std::to_string(r.family));
    if (g_column) row.push_back(format_number(r.g_value));
    write_csv_row(out, row);
  }
}

}  // namespace zsk
