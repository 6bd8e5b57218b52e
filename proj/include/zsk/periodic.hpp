#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "zsk/error.hpp"

namespace zsk {

/*
  Modulus of continuity rho with a constant C, so that
      |f(x) - f(y)| <= C * rho(|x - y|).
  Three shapes are supported:
    lipschitz(a, C):  rho(d) = d^a,                       0 < a <= 1
    loglog(b, C):     rho(d) = 1 / (l * (ln l)^b), l = ln(1/d), for d < e^-e,
                      and the constant 1/e above that point; b > 1
    custom(rho, C):   any positive nondecreasing map
  C may be left undeclared; consumers then estimate it by sampling.
*/
class ModulusOfContinuity {
 public:
  enum class Kind { lipschitz, loglog, custom };

  static ModulusOfContinuity lipschitz(double exponent, std::optional<double> constant = {});
  static ModulusOfContinuity loglog(double b, std::optional<double> constant = {});
  static ModulusOfContinuity custom(std::function<double(double)> rho,
                                    std::optional<double> constant = {},
                                    std::string label = "custom");

  [[nodiscard]] Kind kind() const { return kind_; }
  /// Exponent a (lipschitz) or b (loglog); unused for custom.
  [[nodiscard]] double parameter() const { return parameter_; }
  [[nodiscard]] const std::optional<double>& constant() const { return constant_; }
  [[nodiscard]] const std::string& label() const { return label_; }

  [[nodiscard]] double rho(double delta) const;
  /// log rho(exp(log_delta)), usable far below the double range of delta.
  [[nodiscard]] double log_rho(double log_delta) const;

 private:
  ModulusOfContinuity() = default;

  Kind kind_ = Kind::lipschitz;
  double parameter_ = 1.0;
  std::optional<double> constant_;
  std::function<double(double)> custom_;
  std::string label_;
};

/*
  Result of the class-B_L membership test: the series
      sum_{n>=2} rho(c/n^2) (ln n)^L / n
  is condensed twice (n = 2^(2^j)) and the decay of the condensed terms is
  fitted to j^-p. The series converges when p > 1.
*/
struct MembershipReport {
  bool converges = false;
  double decay_exponent = 0.0;
};

[[nodiscard]] MembershipReport check_class_membership(const ModulusOfContinuity& modulus, int L,
                                                      double c = 1.0);

enum class Smoothness { trig_polynomial, smooth, rough };

/// Reduces x into [0, 1).
[[nodiscard]] double unit_fraction(double x);

/*
  A real function of period 1. Arguments are reduced mod 1 before the
  user callable sees them, and a non-finite result raises evaluation_error.
  When a modulus with a constant is declared, it is spot-checked on random
  pairs at construction.
*/
class PeriodicFunction {
 public:
  using Eval = std::function<double(double)>;

  explicit PeriodicFunction(Eval eval, Smoothness hint = Smoothness::smooth, int degree = 0);
  PeriodicFunction(Eval eval, ModulusOfContinuity modulus, Smoothness hint = Smoothness::rough,
                   int degree = 0);

  [[nodiscard]] double operator()(double x) const { return at_reduced(unit_fraction(x)); }

  /// Evaluation for an argument already in [0, 1).
  [[nodiscard]] double at_reduced(double x) const {
    const double v = eval_(x);
    if (!std::isfinite(v)) throw evaluation_error("periodic function: non-finite value");
    return v;
  }

  [[nodiscard]] const std::optional<ModulusOfContinuity>& modulus() const { return modulus_; }
  [[nodiscard]] Smoothness smoothness() const { return hint_; }
  [[nodiscard]] int degree() const { return degree_; }

  /// Largest |f| on a 4096-point grid.
  [[nodiscard]] double sampled_max_abs() const;
  /// Smallest C with |f(x)-f(y)| <= C rho(|x-y|) over grid pairs at dyadic spacings.
  [[nodiscard]] double sampled_modulus_constant(const ModulusOfContinuity& modulus) const;

 private:
  void spot_check_modulus() const;

  Eval eval_;
  std::optional<ModulusOfContinuity> modulus_;
  Smoothness hint_;
  int degree_;
};

/// (1/points) * sum_{j<points} f(j/points), compensated.
[[nodiscard]] double periodic_trapezoid_integral(const PeriodicFunction& f, std::int64_t points);

}  // namespace zsk
