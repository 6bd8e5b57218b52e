#include "zsk/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "zsk/compensated.hpp"

namespace zsk {

namespace {

constexpr int kSampleGrid = 4096;

void check_constant(const std::optional<double>& constant) {
  if (constant && (!(*constant >= 0.0) || !std::isfinite(*constant))) {
    throw domain_error("modulus: constant must be finite and >= 0");
  }
}

}  // namespace

ModulusOfContinuity ModulusOfContinuity::lipschitz(double exponent, std::optional<double> constant) {
  if (!(exponent > 0.0 && exponent <= 1.0)) throw domain_error("lipschitz modulus: exponent must be in (0, 1]");
  check_constant(constant);
  ModulusOfContinuity m;
  m.kind_ = Kind::lipschitz;
  m.parameter_ = exponent;
  m.constant_ = constant;
  m.label_ = "lipschitz";
  return m;
}

ModulusOfContinuity ModulusOfContinuity::loglog(double b, std::optional<double> constant) {
  if (!(b > 1.0) || !std::isfinite(b)) throw domain_error("loglog modulus: b must be > 1");
  check_constant(constant);
  ModulusOfContinuity m;
  m.kind_ = Kind::loglog;
  m.parameter_ = b;
  m.constant_ = constant;
  m.label_ = "loglog";
  return m;
}

ModulusOfContinuity ModulusOfContinuity::custom(std::function<double(double)> rho,
                                                std::optional<double> constant, std::string label) {
  if (!rho) throw domain_error("custom modulus: empty function");
  check_constant(constant);
  // Positivity and monotonicity on a log-spaced grid.
  double previous = 0.0;
  for (int i = -300; i <= 0; ++i) {
    const double v = rho(std::pow(10.0, i * 0.05));
    if (!(v > 0.0) || !std::isfinite(v)) throw domain_error("custom modulus: rho must be positive");
    if (v < previous * (1.0 - 1e-12)) throw domain_error("custom modulus: rho must be nondecreasing");
    previous = v;
  }
  ModulusOfContinuity m;
  m.kind_ = Kind::custom;
  m.parameter_ = 0.0;
  m.constant_ = constant;
  m.custom_ = std::move(rho);
  m.label_ = std::move(label);
  return m;
}

double ModulusOfContinuity::rho(double delta) const {
  if (!(delta > 0.0)) throw domain_error("modulus: rho needs delta > 0");
  switch (kind_) {
    case Kind::lipschitz: return std::pow(delta, parameter_);
    case Kind::loglog: return std::exp(log_rho(std::log(delta)));
    case Kind::custom: return custom_(delta);
  }
  return 0.0;
}

double ModulusOfContinuity::log_rho(double log_delta) const {
  switch (kind_) {
    case Kind::lipschitz: return parameter_ * log_delta;
    case Kind::loglog: {
      if (log_delta >= -std::numbers::e) return -1.0;
      const double lambda = -log_delta;
      return -std::log(lambda) - parameter_ * std::log(std::log(lambda));
    }
    case Kind::custom: return std::log(custom_(std::exp(log_delta)));
  }
  return 0.0;
}

MembershipReport check_class_membership(const ModulusOfContinuity& modulus, int L, double c) {
  if (L < 0) throw domain_error("membership: L must be >= 0");
  if (!(c > 0.0)) throw domain_error("membership: c must be > 0");
  // Condensed term for n = 2^(2^j): 2^j * rho(c 4^(-2^j)) * (2^j ln 2)^L.
  const auto log_term = [&](int j) {
    const double k = std::ldexp(1.0, j);
    return j * std::numbers::ln2 + modulus.log_rho(std::log(c) - k * 2.0 * std::numbers::ln2) +
           L * std::log(k * std::numbers::ln2);
  };
  // A custom rho is only evaluated where delta is representable.
  const bool custom = modulus.kind() == ModulusOfContinuity::Kind::custom;
  const int j1 = custom ? 4 : 200;
  const int j2 = custom ? 8 : 1000;
  const double p = -(log_term(j2) - log_term(j1)) / std::log(static_cast<double>(j2) / j1);
  MembershipReport report;
  report.decay_exponent = std::isnan(p) ? 0.0 : p;
  report.converges = report.decay_exponent > 1.0;
  return report;
}

double unit_fraction(double x) {
  if (!std::isfinite(x)) throw evaluation_error("periodic argument is not finite");
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

PeriodicFunction::PeriodicFunction(Eval eval, Smoothness hint, int degree)
    : eval_(std::move(eval)), hint_(hint), degree_(degree) {
  if (!eval_) throw domain_error("periodic function: empty callable");
}

PeriodicFunction::PeriodicFunction(Eval eval, ModulusOfContinuity modulus, Smoothness hint, int degree)
    : eval_(std::move(eval)), modulus_(std::move(modulus)), hint_(hint), degree_(degree) {
  if (!eval_) throw domain_error("periodic function: empty callable");
  spot_check_modulus();
}

void PeriodicFunction::spot_check_modulus() const {
  if (!modulus_ || !modulus_->constant()) return;
  const double C = *modulus_->constant();
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> log_gap(std::log(1e-6), std::log(0.5));
  for (int i = 0; i < 64; ++i) {
    const double x = unit(rng);
    const double gap = std::exp(log_gap(rng));
    const double fx = (*this)(x);
    const double fy = (*this)(x + gap);
    const double allowed = C * modulus_->rho(gap) * (1.0 + 1e-9) + 1e-12 * (1.0 + std::fabs(fx));
    if (std::fabs(fx - fy) > allowed) {
      throw domain_error("periodic function violates its declared modulus of continuity");
    }
  }
}

double PeriodicFunction::sampled_max_abs() const {
  double m = 0.0;
  for (int i = 0; i < kSampleGrid; ++i) {
    m = std::max(m, std::fabs(at_reduced(static_cast<double>(i) / kSampleGrid)));
  }
  return m;
}

double PeriodicFunction::sampled_modulus_constant(const ModulusOfContinuity& modulus) const {
  std::vector<double> values(kSampleGrid);
  for (int i = 0; i < kSampleGrid; ++i) values[i] = at_reduced(static_cast<double>(i) / kSampleGrid);
  double C = 0.0;
  for (int spacing = 1; spacing < kSampleGrid; spacing *= 2) {
    const double r = modulus.rho(static_cast<double>(spacing) / kSampleGrid);
    for (int i = 0; i < kSampleGrid; ++i) {
      const double diff = std::fabs(values[i] - values[(i + spacing) % kSampleGrid]);
      C = std::max(C, diff / r);
    }
  }
  return C;
}

double periodic_trapezoid_integral(const PeriodicFunction& f, std::int64_t points) {
  if (points < 2) throw domain_error("trapezoid: points must be >= 2");
  CompensatedAccumulator acc;
  const double h = 1.0 / static_cast<double>(points);
  for (std::int64_t j = 0; j < points; ++j) acc.add(f.at_reduced(static_cast<double>(j) * h));
  return acc.value() * h;
}

}  // namespace zsk
