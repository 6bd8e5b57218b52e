#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "zsk/execution.hpp"
#include "zsk/periodic.hpp"

namespace zsk {

/*
  Outcome of a log-node series. value = raw_series_sum / normalizer estimates
  the integral over one period. tail_estimate is on the scale of value; it is
  a rigorous bound when tail_is_bound is set (declared modulus, plain or
  rational-base scheme) and otherwise an a-posteriori heuristic.
*/
template <typename Value>
struct BasicQuadratureResult {
  Value value{};
  Value raw_series_sum{};
  double normalizer = 1.0;
  std::int64_t groups_used = 0;
  double tail_estimate = 0.0;
  bool tail_is_bound = false;
};

using QuadratureResult = BasicQuadratureResult<double>;

struct QuadratureOptions {
  Execution exec{};
  std::int64_t max_groups = 2'000'000'000;
};

using RealMap = std::function<double(double)>;

struct PlainScheme {
  int M = 2;
};

/// Substitution x -> phi(x) with phi(1) - phi(0) = 1.
struct TransformedScheme {
  int M = 2;
  RealMap phi;
  RealMap dphi;
};

/*
  Nodes {chi({log_M m})} with weights g({log_M m}) / (m G({chi(...)})) where
  G(y) = sum_{l<L} g(phi(l+y)) phi'(l+y); requires chi(phi(x)) = x,
  phi(0) = 0 and phi(L) = 1.
*/
struct LatticeScheme {
  int M = 2;
  int L = 1;
  RealMap chi;
  RealMap phi;
  RealMap dphi;
  RealMap g;
  double g_floor = 1e-12;

  /// chi(x) = M^x - 1, phi(y) = log_M(1+y), g = 1, L = M - 1: nodes are the rationals {p/M^q}.
  static LatticeScheme dyadic_rationals(int M);
  /// chi = phi = identity, L = 1, g = 1: the plain scheme written as a lattice scheme.
  static LatticeScheme identity(int M);
};

/// Nodes L/{log_M m} (taken mod 1, with L/0 read as 0), weights g({log_M m}) / (m G(node)).
struct ContinuedFractionScheme {
  int M = 2;
  int L = 1;
  RealMap g = [](double) { return 1.0; };
  double inner_tol = 1e-13;
  double g_floor = 1e-12;
};

/// Logarithms to the rational base M/N; two group families with opposite signs.
struct RationalBaseScheme {
  int M = 3;
  int N = 2;
};

/// Binomial-weighted families with weights (-ln w)^(L-1)/w; N = 1 drops the N families.
struct DerivativeFormScheme {
  int M = 3;
  int N = 2;
  int L = 2;
};

using NodeScheme = std::variant<PlainScheme, TransformedScheme, LatticeScheme, ContinuedFractionScheme,
                                RationalBaseScheme, DerivativeFormScheme>;

[[nodiscard]] std::string scheme_name(const NodeScheme& scheme);

/// Raw-series constant for the scheme: the value is raw / normalizer.
[[nodiscard]] double scheme_normalizer(const NodeScheme& scheme);

[[nodiscard]] QuadratureResult integral_logM(const PeriodicFunction& f, int M, std::int64_t groups,
                                             const QuadratureOptions& opts = {});

[[nodiscard]] QuadratureResult integral_transformed(const PeriodicFunction& f, const RealMap& phi,
                                                    const RealMap& dphi, int M, std::int64_t groups,
                                                    const QuadratureOptions& opts = {});

[[nodiscard]] QuadratureResult integral_lattice_nodes(const PeriodicFunction& f, const LatticeScheme& scheme,
                                                      std::int64_t groups, const QuadratureOptions& opts = {});

[[nodiscard]] QuadratureResult integral_cf_nodes(const PeriodicFunction& f, const ContinuedFractionScheme& scheme,
                                                 std::int64_t groups, const QuadratureOptions& opts = {});

[[nodiscard]] QuadratureResult integral_rational_base(const PeriodicFunction& f, int M, int N,
                                                      std::int64_t groups, const QuadratureOptions& opts = {});

[[nodiscard]] QuadratureResult integral_derivative_form(const PeriodicFunction& f, int M, int N, int L,
                                                        std::int64_t groups, const QuadratureOptions& opts = {});

/// Dispatches on the scheme variant.
[[nodiscard]] QuadratureResult integrate(const PeriodicFunction& f, const NodeScheme& scheme,
                                         std::int64_t groups, const QuadratureOptions& opts = {});

/*
  Upper bound for the omitted raw series beyond from_group for the plain
  scheme with base M:
      sum_{n>N} sum_k [ C rho(gap) / (Mn-k) + k max|f| / (Mn (Mn-k)) ],
  gap = log_M(Mn) - log_M(Mn-k), every n-sum replaced by an integral.
  Undeclared C and max|f| are estimated by sampling. Requires a modulus.
*/
[[nodiscard]] double tail_bound(const PeriodicFunction& f, int M, std::int64_t from_group);

/// Same bound for the rational-base scheme (both families, logarithms to base M/N).
[[nodiscard]] double tail_bound_rational(const PeriodicFunction& f, int M, int N, std::int64_t from_group);

/*
  Normalizing function of the continued-fraction scheme,
      G(y) = sum_{n>=L} g(L/(n+y)) / (n+y)^2,
  summed directly up to a cutoff K and closed with an end-corrected integral.
  K is chosen at construction so that doubling it changes G by at most tol.
*/
class ContinuedFractionNormalizer {
 public:
  ContinuedFractionNormalizer(int L, RealMap g, double tol);
  [[nodiscard]] double operator()(double y) const;
  [[nodiscard]] std::int64_t cutoff() const { return cutoff_; }

 private:
  [[nodiscard]] double evaluate(double y, std::int64_t K) const;

  int L_;
  RealMap g_;
  std::int64_t cutoff_ = 0;
};

struct NodeRecord {
  std::int64_t group = 0;
  int k = 0;
  int family = 0;
  double node = 0.0;
  double weight = 0.0;
  /// Normalizer value G at the node for lattice and continued-fraction schemes, else 0.
  double g_value = 0.0;
};

/*
  The first `count` (node, weight) pairs of the scheme in index order: group
  n = 1, 2, ...; inside a group, family by family, k = P-1 down to 0 (that is,
  ascending index P n - k). The k = 0 entry carries the net weight of the
  paired subtraction, -(P-1) times the node weight. Family coefficients are
  folded into the weights.
*/
[[nodiscard]] std::vector<NodeRecord> node_stream(const NodeScheme& scheme, std::int64_t count);

/// RFC-4180 CSV with header group,k,node,weight (+family, +G where relevant), %.17g numbers.
void write_nodes_csv(std::ostream& out, const NodeScheme& scheme, const std::vector<NodeRecord>& records);

}  // namespace zsk
