#include "zsk/boundary.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "zsk/detail/log_series.hpp"

namespace zsk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Node t = {L log_M m}, weight 1/m; the boundary point is e^{2 pi i t}.
detail::NodeFamily boundary_family(int M, int L) {
  if (M < 2) throw domain_error("boundary series: M must be >= 2");
  if (L == 0) throw domain_error("boundary series: L must be nonzero");
  const long double log_base = std::log(static_cast<long double>(M));
  const long double power = static_cast<long double>(L);
  return {M, 1.0, [log_base, power](std::int64_t m) {
            const long double lm = power * std::log(static_cast<long double>(m));
            return detail::NodeWeight{detail::log_node(lm, log_base), 1.0 / static_cast<double>(m)};
          }};
}

template <typename Eval>
BoundaryResult boundary_series(int M, int L, Eval eval, std::int64_t groups, const QuadratureOptions& opts) {
  const std::vector<detail::NodeFamily> families{boundary_family(M, L)};
  return detail::run_series<cplx>(families, eval, std::log(static_cast<double>(M)), groups, opts);
}

cplx ipow(cplx z, int n) {
  cplx result = 1.0;
  const cplx base = n < 0 ? 1.0 / z : z;
  for (int i = 0; i < std::abs(n); ++i) result *= base;
  return result;
}

cplx checked(cplx v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw evaluation_error(what);
  return v;
}

}  // namespace

cplx unit_point(double t) { return std::polar(1.0, two_pi * t); }

CircleFunction::CircleFunction(ComplexMap eval, std::optional<ModulusOfContinuity> modulus)
    : eval_(std::move(eval)), modulus_(std::move(modulus)) {
  if (!eval_) throw domain_error("circle function: empty callable");
}

cplx CircleFunction::operator()(cplx z) const {
  return checked(eval_(z), "circle function: non-finite value");
}

DiskFunction::DiskFunction(ComplexMap eval, std::optional<ModulusOfContinuity> modulus)
    : eval_(std::move(eval)), modulus_(std::move(modulus)) {
  if (!eval_) throw domain_error("disk function: empty callable");
  std::mt19937_64 rng(0xd15c);
  std::uniform_real_distribution<double> radius(0.0, 0.85);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  const double h = 1e-5;
  for (int i = 0; i < 16; ++i) {
    const cplx z = std::polar(radius(rng), angle(rng));
    const cplx dx = ((*this)(z + h) - (*this)(z - h)) / (2.0 * h);
    const cplx dy = ((*this)(z + cplx(0.0, h)) - (*this)(z - cplx(0.0, h))) / (2.0 * h);
    const double scale = 1.0 + std::abs(dx) + std::abs((*this)(z));
    if (std::abs(dy - cplx(0.0, 1.0) * dx) > 1e-6 * scale) {
      throw domain_error("disk function fails the Cauchy-Riemann check");
    }
  }
}

cplx DiskFunction::operator()(cplx z) const { return checked(eval_(z), "disk function: non-finite value"); }

void BlaschkeSpec::validate() const {
  for (const cplx& b : zeros) {
    if (!(std::abs(b) < 1.0)) throw domain_error("BlaschkeSpec: zeros must lie inside the unit disk");
  }
  if (std::fabs(std::abs(rotation) - 1.0) > 1e-12) throw domain_error("BlaschkeSpec: rotation must have modulus 1");
  if (L == 0) throw domain_error("BlaschkeSpec: L must be nonzero");
}

cplx BlaschkeSpec::target_point() const {
  cplx p = rotation;
  for (const cplx& b : zeros) p *= b;
  return p;
}

cplx BlaschkeSpec::product(cplx z) const {
  cplx p = 1.0;
  for (const cplx& b : zeros) p *= (z + b) / (1.0 + std::conj(b) * z);
  return p;
}

BoundaryResult circle_mean(const CircleFunction& F, int M, std::int64_t groups, const QuadratureOptions& opts) {
  BoundaryResult r = boundary_series(M, 1, [&F](double t) { return F.at_angle(t); }, groups, opts);
  if (F.modulus()) {
    const PeriodicFunction re([&F](double t) { return F.at_angle(t).real(); }, *F.modulus());
    const PeriodicFunction im([&F](double t) { return F.at_angle(t).imag(); }, *F.modulus());
    r.tail_estimate = (tail_bound(re, M, groups) + tail_bound(im, M, groups)) / r.normalizer;
    r.tail_is_bound = true;
  }
  return r;
}

BoundaryResult holo_at_zero(const DiskFunction& f, cplx a, int L, int M, std::int64_t groups,
                            const QuadratureOptions& opts) {
  if (std::fabs(std::abs(a) - 1.0) > 1e-12) throw domain_error("holo_at_zero: |a| must be 1");
  return boundary_series(M, L, [&f, a](double t) { return f(a * unit_point(t)); }, groups, opts);
}

BoundaryResult holo_weighted_kernel(const DiskFunction& f, cplx c, int J, int M, std::int64_t groups, PoleSide side,
                                    const QuadratureOptions& opts) {
  if (J < 1) throw domain_error("weighted kernel: J must be >= 1");
  const double rc = std::abs(c);
  if (!(rc > 0.0) || rc > 0.9) throw domain_error("weighted kernel: requires 0 < |c| <= 0.9");
  const cplx pole = side == PoleSide::inside ? c : 1.0 / c;
  auto eval = [&f, pole, J](double t) {
    const cplx z = unit_point(t);
    const double d2 = std::norm(z - pole);
    return f(z) / std::pow(d2, J);
  };
  return boundary_series(M, 1, eval, groups, opts);
}

cplx weighted_kernel_target(const DiskFunction& f, cplx c, int J, PoleSide side) {
  if (J < 1) throw domain_error("weighted kernel: J must be >= 1");
  const double rc = std::abs(c);
  if (!(rc > 0.0) || rc > 0.9) throw domain_error("weighted kernel: requires 0 < |c| <= 0.9");
  const cplx centre = side == PoleSide::inside ? c : std::conj(c);
  const cplx k = side == PoleSide::inside ? std::conj(c) : c;
  auto h = [&](cplx z) { return ipow(z, J - 1) * f(z) * ipow(1.0 - k * z, -J); };
  // Taylor coefficient of order J-1 at the centre: (1/N) sum h(centre + r w_j) w_j^{-(J-1)} / r^{J-1}.
  const double r = 0.5 * (1.0 - rc);
  const int N = 128;
  cplx sum = 0.0;
  for (int j = 0; j < N; ++j) {
    const cplx w = unit_point(static_cast<double>(j) / N);
    sum += h(centre + r * w) * ipow(w, -(J - 1));
  }
  cplx coeff = sum / static_cast<double>(N) / std::pow(r, J - 1);
  if (side == PoleSide::outside) coeff *= std::pow(rc, 2 * J);
  return coeff;
}

BoundaryResult holo_general(const DiskFunction& f, const DiskFunction& g, const DiskFunction& mu, int M,
                            std::int64_t groups, int sign, const QuadratureOptions& opts) {
  if (sign != 1 && sign != -1) throw domain_error("holo_general: sign must be +1 or -1");
  if (std::abs(mu(0.0) - 1.0) > 1e-12) throw domain_error("holo_general: mu(0) must equal 1");
  auto eval = [&](double t) {
    const cplx z = unit_point(t);
    return mu(z) * f(g(z));
  };
  return boundary_series(M, sign, eval, groups, opts);
}

BoundaryResult holo_at_point_blaschke(const DiskFunction& f, const BlaschkeSpec& spec, int M, std::int64_t groups,
                                      const QuadratureOptions& opts) {
  spec.validate();
  auto eval = [&f, &spec](double t) {
    const cplx z = spec.rotation * unit_point(t);
    return f(spec.rotation * spec.product(z));
  };
  return boundary_series(M, spec.L, eval, groups, opts);
}

}  // namespace zsk
