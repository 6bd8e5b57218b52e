#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "zsk/compensated.hpp"
#include "zsk/execution.hpp"
#include "zsk/periodic.hpp"
#include "zsk/special.hpp"

using namespace zsk;
using cplx = std::complex<double>;

namespace {

// Exact value of a sum of multiples of 2^-30 held as a 128-bit integer.
double fixed_point_to_double(__int128 units) {
  return static_cast<double>(static_cast<long double>(units) * 0x1p-30L);
}

double ulp(double x) { return std::nextafter(std::fabs(x), INFINITY) - std::fabs(x); }

// Euler-Maclaurin zeta with N = 30 and eight Bernoulli corrections.
cplx zeta_euler_maclaurin(cplx s) {
  const int N = 30;
  cplx sum = 0.0;
  for (int n = 1; n < N; ++n) sum += std::pow(static_cast<double>(n), -s);
  const double Nd = N;
  sum += std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
  const double bernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  cplx rising = s;  // s (s+1) ... (s+2k-2)
  double factorial = 2.0;
  for (int k = 1; k <= 8; ++k) {
    sum += bernoulli[k - 1] / factorial * rising * std::pow(Nd, -s - (2.0 * k - 1.0));
    rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return sum;
}

double theta_brute(double w, int half_width) {
  double s = 0.0;
  for (int n = -half_width; n <= half_width; ++n) s += std::exp(-w * n * n);
  return s;
}

}  // namespace

TEST_CASE("compensated accumulator basics") {
  CompensatedAccumulator acc;
  acc.add(1.0);
  acc.add(-1.0);
  CHECK(acc.value() == 0.0);

  CompensatedAccumulator big;
  big += 1e16;
  big += 1.0;
  big += -1e16;
  CHECK(big.value() == 1.0);
  CHECK(big.count() == 3);

  const auto functional = comp_add(comp_add(CompensatedAccumulator{}, 2.0), 3.0);
  CHECK(functional.value() == 5.0);
  CHECK(functional.count() == 2);

  CHECK_THROWS_AS(acc.add(NAN), domain_error);
  CHECK_THROWS_AS(acc.add(INFINITY), domain_error);
}

TEST_CASE("a million additions of 0.1 match the exact rational sum") {
  // 0.1 as a double is 3602879701896397 / 2^55 exactly.
  const __int128 numerator = static_cast<__int128>(3602879701896397LL) * 1000000;
  const double exact = static_cast<double>(static_cast<long double>(numerator) * 0x1p-55L);
  CompensatedAccumulator acc;
  for (int i = 0; i < 1000000; ++i) acc.add(0.1);
  CHECK(std::fabs(acc.value() - 1e5) <= 1e-9);
  CHECK(std::fabs(acc.value() - exact) <= ulp(exact));
  CHECK(acc.count() == 1000000);
}

TEST_CASE("compensated sum stays within one ulp of the exact sum") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> mant(-(std::int64_t{1} << 52), std::int64_t{1} << 52);
  std::uniform_int_distribution<int> shift(0, 40);
  for (int trial = 0; trial < 200; ++trial) {
    CompensatedAccumulator acc;
    __int128 exact = 0;
    for (int i = 0; i < 1000; ++i) {
      // Terms k * 2^-30 with k of widely varying magnitude; all exactly representable.
      const std::int64_t k = mant(rng) >> shift(rng);
      exact += k;
      acc.add(static_cast<double>(k) * 0x1p-30);
    }
    const double truth = fixed_point_to_double(exact);
    CHECK(std::fabs(acc.value() - truth) <= ulp(truth));
  }
}

TEST_CASE("merge folds partial accumulators and counts") {
  CompensatedAccumulator a;
  CompensatedAccumulator b;
  for (int i = 0; i < 10; ++i) a.add(1e16);
  for (int i = 0; i < 7; ++i) b.add(1.0);
  a.merge(b);
  CHECK(a.count() == 17);
  CHECK(a.value() == 1e17 + 7.0);
}

TEST_CASE("double-word accumulator") {
  DoubleWordAccumulator acc;
  acc += 1.0;
  acc += 1e-20;
  acc += -1.0;
  CHECK(acc.value() == doctest::Approx(1e-20).epsilon(1e-12));
  CHECK(acc.count() == 3);
  CHECK_THROWS_AS(acc.add(NAN), domain_error);
}

TEST_CASE("chunked sum does not depend on the thread count") {
  auto term = [](std::int64_t n) { return 1.0 / (static_cast<double>(n) * static_cast<double>(n)); };
  const double one = chunked_sum<double>(1, 200000, term, Execution{1, 1000}).value();
  const double eight = chunked_sum<double>(1, 200000, term, Execution{8, 1000}).value();
  CHECK(one == eight);
  // Euler-Maclaurin tail of sum 1/n^2 beyond N.
  const double N = 200000.0;
  const double tail = 1.0 / N - 0.5 / (N * N) + 1.0 / (6.0 * N * N * N);
  CHECK(one == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - tail).epsilon(1e-15));
  CHECK_THROWS_AS((void)chunked_sum<double>(1, 10, term, Execution{0, 10}), domain_error);
  auto bad = [](std::int64_t n) -> double {
    if (n == 5000) throw evaluation_error("boom");
    return 1.0;
  };
  CHECK_THROWS_AS((void)chunked_sum<double>(1, 10000, bad, Execution{4, 100}), evaluation_error);
}

TEST_CASE("zeta_ref classical values") {
  const double pi = std::numbers::pi;
  CHECK(zeta_ref(2.0) == doctest::Approx(pi * pi / 6).epsilon(1e-14));
  CHECK(zeta_ref(4.0) == doctest::Approx(pi * pi * pi * pi / 90).epsilon(1e-14));
  CHECK(std::fabs(zeta_ref(3.0) - 1.2020569031595942) <= 1e-12);
  CHECK(std::fabs(zeta_ref(3.0) - boost::math::zeta(3.0)) <= 1e-14);
  for (double s : {0.3, 0.5, 0.9, 1.1, 1.5, 2.5, 7.0, 30.0}) {
    CHECK(zeta_ref(s) == doctest::Approx(boost::math::zeta(s)).epsilon(1e-13));
  }
}

TEST_CASE("zeta_ref at complex arguments against Euler-Maclaurin") {
  for (cplx s : {cplx(2, 3), cplx(0.5, 14.134725), cplx(1.5, -0.7), cplx(3, 10)}) {
    const cplx got = zeta_ref(s);
    const cplx want = zeta_euler_maclaurin(s);
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("zeta_ref rejects the excluded set and reports non-convergence") {
  CHECK_THROWS_AS((void)zeta_ref(cplx(1.0, 0.0)), domain_error);
  CHECK_THROWS_AS((void)zeta_ref(cplx(-1.0, 0.0)), domain_error);
  CHECK_THROWS_AS((void)zeta_ref(cplx(0.0, 5.0)), domain_error);
  CHECK_THROWS_AS((void)zeta_ref(cplx(1.0, 2.0 * std::numbers::pi / std::numbers::ln2)), domain_error);
  ToleranceConfig tight;
  tight.max_terms = 5;
  CHECK_THROWS_AS((void)zeta_ref(cplx(2.0, 0.0), tight), convergence_error);
  ToleranceConfig bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS((void)zeta_ref(2.0, bad), domain_error);
}

TEST_CASE("Euler M-relation: grouped series against zeta_ref") {
  for (int M : {2, 3, 5}) {
    for (cplx s : {cplx(1.5, 0.0), cplx(2.0, 3.0)}) {
      const std::int64_t groups = 100000;
      const std::int64_t half = groups / 2;
      ComplexCompensatedAccumulator lower;
      ComplexCompensatedAccumulator upper;
      for (std::int64_t n = 1; n <= groups; ++n) {
        const cplx top = std::pow(static_cast<double>(M * n), -s);
        cplx g = 0.0;
        for (int k = 1; k < M; ++k) g += std::pow(static_cast<double>(M * n - k), -s) - top;
        (n <= half ? lower : upper).add(g);
      }
      const cplx partial = lower.value() + upper.value();
      const double tail = std::abs(upper.value()) * static_cast<double>(half) / static_cast<double>(groups - half);
      const cplx target = (1.0 - std::pow(static_cast<double>(M), 1.0 - s)) * zeta_ref(s);
      CHECK(std::abs(partial - target) <= tail + 1e-12);
    }
  }
}

TEST_CASE("gamma_ref") {
  CHECK(gamma_ref(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_ref(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_ref(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)gamma_ref(0.0), domain_error);
  CHECK_THROWS_AS((void)gamma_ref(-1.5), domain_error);
  for (double x = 0.1; x <= 20.0; x += 0.1) {
    CHECK(gamma_ref(x + 1.0) == doctest::Approx(x * gamma_ref(x)).epsilon(1e-12));
    CHECK(gamma_ref(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK(log_gamma_ref(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13).scale(1.0));
  }
  CHECK(log_gamma_ref(500.0) == doctest::Approx(std::lgamma(500.0)).epsilon(1e-14));
}

TEST_CASE("real zeta through the functional equation") {
  CHECK(zeta_real_signed(0.0).value() == -0.5);
  CHECK(zeta_real_signed(-1.0).value() == doctest::Approx(-1.0 / 12).epsilon(1e-13));
  CHECK(zeta_real_signed(-3.0).value() == doctest::Approx(1.0 / 120).epsilon(1e-13));
  CHECK(zeta_real_signed(-2.0).sign == 0);
  CHECK(zeta_real_signed(-40.0).sign == 0);
  for (double s : {-0.5, -1.7, -2.5, -7.3, -15.5}) {
    CHECK(zeta_real_signed(s).value() == doctest::Approx(boost::math::zeta(s)).epsilon(1e-12));
  }
  // Far out the magnitude is only representable as a logarithm.
  const SignedLog far = zeta_real_signed(-301.0);
  CHECK(far.sign != 0);
  CHECK(far.log_magnitude > 700.0);
  CHECK_THROWS_AS((void)zeta_real_signed(1.0), domain_error);
}

TEST_CASE("theta_ab") {
  CHECK(std::fabs(theta_ab(2.0, 0.0, 1.0) - theta_brute(1.0, 12)) <= 1e-12);
  CHECK(std::fabs(theta_ab(2.0, 0.0, 1.0) - 1.7726372048266521) <= 1e-12);
  // Jacobi imaginary transformation theta(w) = sqrt(pi/w) theta(pi^2/w).
  for (double w : {0.3, 1.0, 2.7}) {
    const double pi = std::numbers::pi;
    CHECK(theta_ab(2.0, 0.0, w) == doctest::Approx(std::sqrt(pi / w) * theta_ab(2.0, 0.0, pi * pi / w)).epsilon(1e-13));
  }
  CHECK(theta_ab(1.0, 1.0, 50.0) < 1e-20);
  CHECK(theta_ab(1.0, 1.0, 50.0) > 0.0);
  // b > 0: no n = 0 term. Closed form sum 2 n e^{-wn} = 2 e^{-w} / (1 - e^{-w})^2.
  const double q = std::exp(-0.8);
  CHECK(theta_ab(1.0, 1.0, 0.8) == doctest::Approx(2 * q / ((1 - q) * (1 - q))).epsilon(1e-13));
  CHECK_THROWS_AS((void)theta_ab(2.0, 0.0, 0.0), domain_error);
  ToleranceConfig few;
  few.max_terms = 10;
  CHECK_THROWS_AS((void)theta_ab(2.0, 0.0, 1e-6, few), convergence_error);
}

TEST_CASE("periodic trapezoid oracle") {
  const PeriodicFunction one([](double) { return 1.0; });
  CHECK(periodic_trapezoid_integral(one, 7) == doctest::Approx(1.0).epsilon(1e-15));
  const PeriodicFunction sin2([](double x) {
    const double s = std::sin(2 * std::numbers::pi * x);
    return s * s;
  });
  CHECK(std::fabs(periodic_trapezoid_integral(sin2, 64) - 0.5) <= 1e-14);

  const PeriodicFunction kink([](double x) { return std::fabs(std::sin(std::numbers::pi * x)); });
  const double t18 = periodic_trapezoid_integral(kink, 1 << 18);
  const double t19 = periodic_trapezoid_integral(kink, 1 << 19);
  const double t20 = periodic_trapezoid_integral(kink, 1 << 20);
  const double richardson = (4.0 * t19 - t18) / 3.0;
  CHECK(std::fabs(t20 - richardson) <= 1e-10);
  CHECK(std::fabs(t20 - 2.0 / std::numbers::pi) <= 1e-10);
  CHECK_THROWS_AS((void)periodic_trapezoid_integral(one, 1), domain_error);
}

TEST_CASE("periodic function reduction, evaluation errors and modulus spot-check") {
  const PeriodicFunction f([](double x) { return x; });
  CHECK(f(1.25) == doctest::Approx(0.25));
  CHECK(f(-0.25) == doctest::Approx(0.75));
  const PeriodicFunction bad([](double) { return NAN; });
  CHECK_THROWS_AS((void)bad(0.3), evaluation_error);

  auto kink = [](double x) { return std::fabs(std::sin(std::numbers::pi * x)); };
  CHECK_NOTHROW(PeriodicFunction(kink, ModulusOfContinuity::lipschitz(1.0, std::numbers::pi)));
  CHECK_THROWS_AS(PeriodicFunction(kink, ModulusOfContinuity::lipschitz(1.0, 0.1)), domain_error);
  CHECK_THROWS_AS((void)ModulusOfContinuity::lipschitz(1.5), domain_error);
  CHECK_THROWS_AS((void)ModulusOfContinuity::loglog(1.0), domain_error);

  const PeriodicFunction g(kink, ModulusOfContinuity::lipschitz(1.0));
  CHECK(g.sampled_modulus_constant(*g.modulus()) == doctest::Approx(std::numbers::pi).epsilon(1e-3));
  CHECK(g.sampled_max_abs() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("class membership of moduli") {
  CHECK(check_class_membership(ModulusOfContinuity::lipschitz(0.5), 3).converges);
  CHECK(check_class_membership(ModulusOfContinuity::loglog(2.0), 0).converges);
  CHECK_FALSE(check_class_membership(ModulusOfContinuity::loglog(2.0), 1).converges);
  CHECK(check_class_membership(ModulusOfContinuity::loglog(1.01), 0).converges);
  const auto slow = ModulusOfContinuity::custom([](double d) { return 1.0 / (1.0 + std::log1p(1.0 / d)); });
  CHECK_FALSE(check_class_membership(slow, 0).converges);
  const auto fast = ModulusOfContinuity::custom([](double d) { return std::sqrt(d); });
  CHECK(check_class_membership(fast, 2).converges);
}
