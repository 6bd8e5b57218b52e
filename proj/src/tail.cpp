#include <cmath>
#include <numbers>

#include "zsk/detail/gauss_legendre.hpp"
#include "zsk/quadrature.hpp"

namespace zsk {

namespace {

struct SampledConstants {
  double C = 0.0;
  double max_abs = 0.0;
};

SampledConstants constants_for(const PeriodicFunction& f) {
  if (!f.modulus()) throw domain_error("tail_bound: the function declares no modulus of continuity");
  const ModulusOfContinuity& mod = *f.modulus();
  SampledConstants out;
  out.C = mod.constant() ? *mod.constant() : f.sampled_modulus_constant(mod);
  out.max_abs = f.sampled_max_abs();
  return out;
}

// (1/P) int_{lambda0}^inf rho(e^-lambda) d lambda for a custom modulus,
// over segments of doubling width.
double custom_rho_integral(const ModulusOfContinuity& mod, double lambda0) {
  const auto& gl = detail::gauss_legendre16();
  auto integrand = [&](double lambda) {
    const double delta = std::exp(-lambda);
    return delta > 0.0 ? mod.rho(delta) : 0.0;
  };
  double total = 0.0;
  double a = lambda0;
  double width = std::max(1.0, std::fabs(lambda0));
  for (int seg = 0; seg < 1000; ++seg) {
    const double piece = gl.integrate(integrand, a, a + width);
    total += piece;
    if (piece <= 1e-10 * total && seg > 4) return total;
    a += width;
    width *= 2.0;
  }
  throw convergence_error("tail_bound: integral of the custom modulus did not converge");
}

/*
  Bound for one family with base P and logarithm base e^log_base, summed over
  n > N and k = 1..P-1. The node gap is at most k / (|log_base| (Pn - k)),
  and each n-sum of a decreasing function is replaced by its integral from N.
*/
double family_tail(const ModulusOfContinuity& mod, const SampledConstants& c, int P, double log_base,
                   std::int64_t N) {
  const double lb = std::fabs(log_base);
  const double PN = static_cast<double>(P) * static_cast<double>(N);
  double total = 0.0;
  for (int k = 1; k < P; ++k) {
    const double start = PN - k;  // Pt - k at t = N
    // k max|f| / (Pn (Pn - k)) = max|f| (1/(Pn-k) - 1/(Pn)).
    total += c.max_abs / P * std::log(PN / start);
    if (c.C == 0.0) continue;
    // u = ln(Pt - k): the rho-part is (C/P) int rho(exp(-(u - c0))) du, c0 = ln(k/lb).
    const double lambda0 = std::log(start) - std::log(k / lb);
    double rho_part = 0.0;
    switch (mod.kind()) {
      case ModulusOfContinuity::Kind::lipschitz: {
        const double a = mod.parameter();
        rho_part = std::pow(k / lb, a) * std::pow(start, -a) / a;
        break;
      }
      case ModulusOfContinuity::Kind::loglog: {
        const double b = mod.parameter();
        const double e = std::numbers::e;
        // rho(e^-lambda) = 1/e for lambda <= e, 1/(lambda (ln lambda)^b) beyond.
        if (lambda0 >= e) {
          rho_part = std::pow(std::log(lambda0), 1.0 - b) / (b - 1.0);
        } else {
          rho_part = (e - lambda0) / e + 1.0 / (b - 1.0);
        }
        break;
      }
      case ModulusOfContinuity::Kind::custom:
        rho_part = custom_rho_integral(mod, lambda0);
        break;
    }
    total += c.C / P * rho_part;
  }
  return total;
}

void check_from(std::int64_t from_group) {
  if (from_group < 1) throw domain_error("tail_bound: from_group must be >= 1");
}

}  // namespace

double tail_bound(const PeriodicFunction& f, int M, std::int64_t from_group) {
  if (M < 2) throw domain_error("tail_bound: M must be >= 2");
  check_from(from_group);
  const SampledConstants c = constants_for(f);
  return family_tail(*f.modulus(), c, M, std::log(static_cast<double>(M)), from_group);
}

double tail_bound_rational(const PeriodicFunction& f, int M, int N, std::int64_t from_group) {
  if (M < 2 || N < 2 || M == N) throw domain_error("tail_bound: requires M, N >= 2 and M != N");
  check_from(from_group);
  const SampledConstants c = constants_for(f);
  const double lb = std::log(static_cast<double>(M) / static_cast<double>(N));
  return family_tail(*f.modulus(), c, M, lb, from_group) + family_tail(*f.modulus(), c, N, lb, from_group);
}

}  // namespace zsk
