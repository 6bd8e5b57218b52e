#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "zsk/error.hpp"
#include "zsk/execution.hpp"
#include "zsk/quadrature.hpp"

namespace zsk::detail {

struct NodeWeight {
  double node = 0.0;
  double weight = 0.0;
};

/*
  One family of a log-node series. Group n contributes
      coefficient * ( sum_{k=0}^{P-1} w(Pn-k) f(x(Pn-k)) - P w(Pn) f(x(Pn)) ),
  i.e. the k = 1..P-1 terms each paired with the k = 0 term.
*/
struct NodeFamily {
  std::int64_t base = 2;
  double coefficient = 1.0;
  std::function<NodeWeight(std::int64_t)> at;
};

/// Fractional part of ln(m) / log_base, computed in long double.
inline double log_node(long double log_m, long double log_base) {
  long double x = log_m / log_base;
  x -= std::floor(x);
  double r = static_cast<double>(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

inline double log_node(std::int64_t m, long double log_base) {
  return log_node(std::log(static_cast<long double>(m)), log_base);
}

template <typename Value, typename Eval>
Value family_group(const NodeFamily& fam, Eval& f, std::int64_t n) {
  const std::int64_t top = fam.base * n;
  const NodeWeight nw0 = fam.at(top);
  const Value t0 = f(nw0.node) * nw0.weight;
  Value s = t0;
  for (std::int64_t k = 1; k < fam.base; ++k) {
    const NodeWeight nw = fam.at(top - k);
    s += f(nw.node) * nw.weight;
  }
  s -= static_cast<double>(fam.base) * t0;
  return s;
}

template <typename Value, typename Eval>
Value group_term(const std::vector<NodeFamily>& families, Eval& f, std::int64_t n) {
  if (families.size() == 1) {
    return families.front().coefficient * family_group<Value>(families.front(), f, n);
  }
  Value total{};
  for (const auto& fam : families) total += fam.coefficient * family_group<Value>(fam, f, n);
  return total;
}

template <typename Value>
struct SplitSum {
  accumulator_for_t<Value> total;
  Value upper{};
  std::int64_t split = 0;
};

/// Sums term(n) over [1, N] as two chunked halves [1, N/2] and [N/2+1, N], merged in that order.
template <typename Value, typename Term>
SplitSum<Value> split_group_sum(std::int64_t groups, Term&& term, const Execution& exec) {
  SplitSum<Value> out;
  out.split = groups / 2;
  out.total = chunked_sum<Value>(1, out.split, term, exec);
  const auto upper = chunked_sum<Value>(out.split + 1, groups, term, exec);
  out.total.merge(upper);
  out.upper = upper.value();
  return out;
}

/// Heuristic tail beyond N for terms decaying like 1/n^2: |S(N/2, N]| * (N/2) / (N - N/2).
template <typename Value>
double aposteriori_tail(const SplitSum<Value>& s, std::int64_t groups) {
  if (groups - s.split <= 0) return 0.0;
  return std::abs(s.upper) * static_cast<double>(s.split) / static_cast<double>(groups - s.split);
}

inline void check_groups(std::int64_t groups, std::int64_t max_base, const QuadratureOptions& opts) {
  opts.exec.validate();
  if (groups < 1) throw domain_error("quadrature: groups must be >= 1");
  if (groups > opts.max_groups) throw domain_error("quadrature: groups exceeds the configured maximum");
  if (max_base > 0 && groups > (std::int64_t{1} << 53) / max_base) {
    throw domain_error("quadrature: node index exceeds exact double range");
  }
}

/// Runs the grouped series for any families and evaluation rule node -> Value.
template <typename Value, typename Eval>
BasicQuadratureResult<Value> run_series(const std::vector<NodeFamily>& families, Eval f, double normalizer,
                                        std::int64_t groups, const QuadratureOptions& opts) {
  std::int64_t max_base = 1;
  for (const auto& fam : families) max_base = std::max(max_base, fam.base);
  check_groups(groups, max_base, opts);
  auto term = [&](std::int64_t n) { return group_term<Value>(families, f, n); };
  const SplitSum<Value> s = split_group_sum<Value>(groups, term, opts.exec);
  BasicQuadratureResult<Value> r;
  r.raw_series_sum = s.total.value();
  r.normalizer = normalizer;
  r.value = r.raw_series_sum / normalizer;
  r.groups_used = groups;
  r.tail_estimate = aposteriori_tail(s, groups) / std::fabs(normalizer);
  r.tail_is_bound = false;
  return r;
}

/// Node family of the plain scheme: node {log_M m}, weight 1/m.
inline NodeFamily plain_family(int M) {
  const long double log_base = std::log(static_cast<long double>(M));
  return {M, 1.0, [log_base](std::int64_t m) {
            return NodeWeight{log_node(m, log_base), 1.0 / static_cast<double>(m)};
          }};
}

}  // namespace zsk::detail
