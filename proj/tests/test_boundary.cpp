#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "zsk/boundary.hpp"
#include "zsk/detail/log_series.hpp"

using namespace zsk;

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::int64_t kGroups = 1000000;

// Trapezoid mean of F over N equispaced points of the unit circle.
cplx contour_mean(const ComplexMap& F, int N) {
  cplx s = 0.0;
  for (int j = 0; j < N; ++j) s += F(std::polar(1.0, 2 * pi * j / N));
  return s / static_cast<double>(N);
}

std::vector<DiskFunction> test_set() {
  return {DiskFunction([](cplx z) { return 1.0 / (1.0 - z / 2.0); }),
          DiskFunction([](cplx z) { return z * z * z; }),
          DiskFunction([](cplx z) { return std::exp(z / 3.0); })};
}

}  // namespace

TEST_CASE("boundary nodes have unit modulus") {
  const long double log_base = std::log(2.0L);
  for (std::int64_t m : {1LL, 2LL, 3LL, 12345LL, 9999991LL, 10000000LL, 123456789LL}) {
    const cplx z = unit_point(detail::log_node(m, log_base));
    CHECK(std::fabs(std::abs(z) - 1.0) <= 2 * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("circle_mean") {
  const BoundaryResult one = circle_mean(CircleFunction([](cplx) { return cplx(1.0); }), 2, 100000);
  CHECK(std::abs(one.value - 1.0) <= 1e-4);
  const BoundaryResult z = circle_mean(CircleFunction([](cplx w) { return w; }), 3, kGroups);
  CHECK(std::abs(z.value) <= 1e-4);

  const ComplexMap kernel = [](cplx w) { return 1.0 / ((w - 0.5) * (1.0 / w - 0.5)); };
  const BoundaryResult k = circle_mean(CircleFunction(kernel), 2, kGroups);
  CHECK(std::abs(k.value - 4.0 / 3.0) <= 1e-3);
  CHECK(std::abs(k.value - contour_mean(kernel, 1 << 16)) <= k.tail_estimate + 1e-3);

  // A declared modulus switches the tail to a rigorous bound.
  const ComplexMap rough = [](cplx w) { return cplx(std::fabs(w.imag()), 0.0); };
  const CircleFunction with_modulus(rough, ModulusOfContinuity::lipschitz(1.0, 2 * pi));
  const BoundaryResult rb = circle_mean(with_modulus, 2, 100000);
  CHECK(rb.tail_is_bound);
  CHECK(std::abs(rb.value - 2.0 / pi) <= rb.tail_estimate);
}

TEST_CASE("holo_at_zero") {
  CHECK(std::abs(holo_at_zero(DiskFunction([](cplx) { return cplx(2.0, -1.0); }), 1.0, 1, 2, 100000).value -
                 cplx(2.0, -1.0)) <= 1e-4);
  for (int k : {1, 2, 5}) {
    const DiskFunction power([k](cplx z) { return std::pow(z, k); });
    CHECK(std::abs(holo_at_zero(power, std::polar(1.0, 0.7), 2, 3, 100000).value) <= 1e-3);
  }
  const DiskFunction f([](cplx z) { return 1.0 / (1.0 - z / 2.0); });
  const BoundaryResult r = holo_at_zero(f, 1.0, 1, 2, kGroups);
  CHECK(std::abs(r.value - 1.0) <= 1e-3);
  // Cross-check: the trapezoid Cauchy integral gives the same mean.
  CHECK(std::abs(contour_mean([&](cplx z) { return f(z); }, 64) - 1.0) <= 1e-14);

  CHECK_THROWS_AS((void)holo_at_zero(f, 2.0, 1, 2, 10), domain_error);
  CHECK_THROWS_AS((void)holo_at_zero(f, 1.0, 0, 2, 10), domain_error);
}

TEST_CASE("holo_at_zero is invariant under rotation and L -> -L") {
  for (const DiskFunction& f : test_set()) {
    const cplx target = f(0.0);
    for (double theta : {0.0, 1.1, 2.9}) {
      for (int L : {1, -1, 2, -3}) {
        const BoundaryResult r = holo_at_zero(f, std::polar(1.0, theta), L, 2, 200000);
        CHECK(std::abs(r.value - target) <= r.tail_estimate + 1e-3);
      }
    }
  }
}

TEST_CASE("weighted kernel, J = 1, inside: f(c) / (1 - |c|^2)") {
  const DiskFunction square([](cplx z) { return z * z; });
  const BoundaryResult r = holo_weighted_kernel(square, 0.3, 1, 2, kGroups, PoleSide::inside);
  CHECK(std::abs(r.value - 0.09 / 0.91) <= 1e-3);
  CHECK(std::abs(r.raw_series_sum / std::log(2.0) - r.value) <= 1e-15);

  const DiskFunction one([](cplx) { return cplx(1.0); });
  CHECK(std::abs(holo_weighted_kernel(one, 0.5, 1, 2, kGroups, PoleSide::inside).value - 4.0 / 3.0) <= 1e-3);

  for (const DiskFunction& f : test_set()) {
    for (cplx c : {cplx(0.2, 0.0), cplx(0.3, 0.2)}) {
      const cplx poisson = f(c) / (1.0 - std::norm(c));
      CHECK(std::abs(weighted_kernel_target(f, c, 1, PoleSide::inside) - poisson) <= 1e-13);
      const BoundaryResult s = holo_weighted_kernel(f, c, 1, 2, kGroups, PoleSide::inside);
      CHECK(std::abs(s.value - poisson) <= 1e-3);
    }
  }
}

TEST_CASE("weighted kernel, J = 2, against a finite-difference target") {
  const DiskFunction one([](cplx) { return cplx(1.0); });
  const cplx c = 0.3;
  // d/dz [z (1 - conj(c) z)^{-2}] at z = c by a central difference with step 1e-5.
  auto bracket = [c](cplx z) { return z / ((1.0 - std::conj(c) * z) * (1.0 - std::conj(c) * z)); };
  const double h = 1e-5;
  const cplx fd = (bracket(c + h) - bracket(c - h)) / (2.0 * h);
  const cplx target = weighted_kernel_target(one, c, 2, PoleSide::inside);
  CHECK(std::abs(target - fd) <= 1e-8);
  const BoundaryResult r = holo_weighted_kernel(one, c, 2, 2, kGroups, PoleSide::inside);
  CHECK(std::abs(r.value - target) <= 1e-3);

  // A complex point and non-constant f, series against the target.
  const DiskFunction f([](cplx z) { return std::exp(z / 3.0); });
  const cplx c2(0.2, -0.25);
  for (int J : {2, 3}) {
    const BoundaryResult s = holo_weighted_kernel(f, c2, J, 3, kGroups, PoleSide::inside);
    CHECK(std::abs(s.value - weighted_kernel_target(f, c2, J, PoleSide::inside)) <= 1e-3);
  }
}

TEST_CASE("weighted kernel, outside pole") {
  const cplx c(0.4, 0.3);
  for (const DiskFunction& f : test_set()) {
    // J = 1 closed form: |c|^2 f(conj c) / (1 - |c|^2).
    const cplx closed = std::norm(c) * f(std::conj(c)) / (1.0 - std::norm(c));
    CHECK(std::abs(weighted_kernel_target(f, c, 1, PoleSide::outside) - closed) <= 1e-13);
    const BoundaryResult s1 = holo_weighted_kernel(f, c, 1, 2, kGroups, PoleSide::outside);
    CHECK(std::abs(s1.value - closed) <= 1e-3);
    const BoundaryResult s2 = holo_weighted_kernel(f, c, 2, 2, kGroups, PoleSide::outside);
    CHECK(std::abs(s2.value - weighted_kernel_target(f, c, 2, PoleSide::outside)) <= 1e-3);
    // The series is a plain boundary mean, so the trapezoid contour oracle applies too.
    const cplx oracle = contour_mean([&](cplx z) { return f(z) / std::pow(std::norm(z - 1.0 / c), 2); }, 1 << 12);
    CHECK(std::abs(weighted_kernel_target(f, c, 2, PoleSide::outside) - oracle) <= 1e-12);
  }
  const DiskFunction one([](cplx) { return cplx(1.0); });
  CHECK_THROWS_AS((void)holo_weighted_kernel(one, 0.95, 1, 2, 10, PoleSide::inside), domain_error);
  CHECK_THROWS_AS((void)holo_weighted_kernel(one, 0.0, 1, 2, 10, PoleSide::inside), domain_error);
  CHECK_THROWS_AS((void)holo_weighted_kernel(one, 0.3, 0, 2, 10, PoleSide::inside), domain_error);
}

TEST_CASE("holo_general") {
  const DiskFunction identity([](cplx z) { return z; });
  const DiskFunction unit([](cplx) { return cplx(1.0); });
  const DiskFunction f([](cplx z) { return 1.0 / (1.0 - z / 2.0); });
  for (int sign : {1, -1}) {
    const BoundaryResult g = holo_general(f, identity, unit, 2, 100000, sign);
    const BoundaryResult z = holo_at_zero(f, 1.0, sign, 2, 100000);
    CHECK(g.raw_series_sum == z.raw_series_sum);
  }
  const DiskFunction half([](cplx z) { return 0.4 * z; });
  CHECK(std::abs(holo_general(identity, half, unit, 2, kGroups).value) <= 1e-3);

  const DiskFunction mu([](cplx z) { return 1.0 + z / 2.0; });
  const DiskFunction g([](cplx z) { return z / 2.0; });
  const DiskFunction pole([](cplx z) { return 1.0 / (1.0 - z); });
  const BoundaryResult r = holo_general(pole, g, mu, 2, kGroups);
  CHECK(std::abs(r.value - 1.0) <= 1e-3);
  CHECK(std::abs(contour_mean([&](cplx z) { return mu(z) * pole(g(z)); }, 256) - 1.0) <= 1e-13);

  const DiskFunction bad_mu([](cplx z) { return 2.0 + z; });
  CHECK_THROWS_AS((void)holo_general(f, identity, bad_mu, 2, 10), domain_error);
  CHECK_THROWS_AS((void)holo_general(f, identity, unit, 2, 10, 0), domain_error);
}

TEST_CASE("Blaschke nodes") {
  const DiskFunction identity([](cplx z) { return z; });
  const BlaschkeSpec single{{cplx(0.5)}, 1.0, 1};
  CHECK(std::abs(holo_at_point_blaschke(identity, single, 2, kGroups).value - 0.5) <= 1e-3);

  const DiskFunction one([](cplx) { return cplx(1.0); });
  const BlaschkeSpec pair{{cplx(0.5), cplx(-0.4)}, 1.0, 1};
  CHECK(std::abs(holo_at_point_blaschke(one, pair, 2, kGroups).value - 1.0) <= 1e-3);

  const DiskFunction square([](cplx z) { return z * z; });
  const BlaschkeSpec rotated{{cplx(0.5), cplx(0.5)}, cplx(0.0, 1.0), 1};
  CHECK(rotated.target_point() == cplx(0.0, 0.25));
  CHECK(std::abs(holo_at_point_blaschke(square, rotated, 2, kGroups).value - cplx(-0.0625, 0.0)) <= 1e-3);

  // Other node powers and bases reach the same point.
  const BlaschkeSpec mixed{{cplx(0.3, 0.4), cplx(-0.2, 0.1)}, std::polar(1.0, 0.8), -2};
  const DiskFunction e([](cplx z) { return std::exp(z); });
  CHECK(std::abs(holo_at_point_blaschke(e, mixed, 3, kGroups).value - e(mixed.target_point())) <= 1e-3);

  CHECK_THROWS_AS((void)holo_at_point_blaschke(one, BlaschkeSpec{{cplx(1.0)}, 1.0, 1}, 2, 10), domain_error);
  CHECK_THROWS_AS((void)holo_at_point_blaschke(one, BlaschkeSpec{{cplx(0.1)}, 2.0, 1}, 2, 10), domain_error);
}

TEST_CASE("disk functions must pass the Cauchy-Riemann check") {
  CHECK_THROWS_AS(DiskFunction([](cplx z) { return std::conj(z); }), domain_error);
  CHECK_THROWS_AS(DiskFunction([](cplx z) { return cplx(std::norm(z)); }), domain_error);
  CHECK_NOTHROW(DiskFunction([](cplx z) { return std::sin(z) * std::exp(z); }));
  const DiskFunction blowup([](cplx z) { return 1.0 / (z - 1.0); });
  CHECK_THROWS_AS((void)blowup(1.0), evaluation_error);
}
