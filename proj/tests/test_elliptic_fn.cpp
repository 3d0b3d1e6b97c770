#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "weingarten/elliptic_fn.hpp"

using wg::EllipticFunction;

namespace {

std::vector<EllipticFunction> admissible_samples() {
  return {EllipticFunction::zero(),          EllipticFunction::rational(1.0),
          EllipticFunction::rational(-1.5),  EllipticFunction::rational(1.53),
          EllipticFunction::sqrt_shift(1.0), EllipticFunction::sqrt_shift(0.5),
          EllipticFunction::sqrt_shift(-1.0), EllipticFunction::sqrt_shift(-0.3)};
}

}  // namespace

TEST_CASE("eval_f and eval_f_prime closed forms") {
  CHECK(wg::eval_f(EllipticFunction::zero(), 5.0) == 0.0);
  CHECK(wg::eval_f(EllipticFunction::rational(1.0), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(wg::eval_f(EllipticFunction::sqrt_shift(1.0), 3.0) == doctest::Approx(-1.0).epsilon(1e-15));

  CHECK(wg::eval_f_prime(EllipticFunction::zero(), 2.0) == 0.0);
  CHECK(wg::eval_f_prime(EllipticFunction::rational(1.0), 0.0) == 1.0);
  CHECK(wg::eval_f_prime(EllipticFunction::sqrt_shift(1.0), 0.0) == -0.5);

  for (const auto& F : admissible_samples()) CHECK(wg::eval_f(F, 0.0) == 0.0);
}

TEST_CASE("negative arguments are a domain error") {
  CHECK_THROWS_AS(wg::eval_f(EllipticFunction::rational(1.0), -1e-3), std::domain_error);
  CHECK_THROWS_AS(wg::eval_f_prime(EllipticFunction::sqrt_shift(1.0), -2.0), std::domain_error);
}

TEST_CASE("eval_f_prime matches central differences") {
  for (const auto& F : admissible_samples()) {
    for (double x : {0.1, 0.7, 3.0, 40.0}) {
      const double h = 1e-6 * (1.0 + x);
      const double fd = (wg::eval_f(F, x + h) - wg::eval_f(F, x - h)) / (2 * h);
      CHECK(wg::eval_f_prime(F, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("check_ellipticity per family") {
  SUBCASE("zero") {
    const auto r = wg::check_ellipticity(EllipticFunction::zero());
    CHECK(r.admissible);
    CHECK(r.sup_value == 0.0);
    CHECK(r.grid_size == wg::kDefaultEllipticityGrid);
  }
  SUBCASE("rational c=1: 27/64 at x=1/3") {
    const auto r = wg::check_ellipticity(EllipticFunction::rational(1.0));
    CHECK(r.admissible);
    REQUIRE(r.analytic_bound);
    CHECK(*r.analytic_bound == doctest::Approx(27.0 / 64.0).epsilon(1e-15));
    CHECK(r.witness_x == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("rational c=2 is not elliptic") {
    const auto r = wg::check_ellipticity(EllipticFunction::rational(2.0));
    CHECK_FALSE(r.admissible);
    CHECK(*r.analytic_bound == doctest::Approx(27.0 / 16.0).epsilon(1e-15));
  }
  SUBCASE("sqrtshift a=1: supremum 1 never attained") {
    const auto r = wg::check_ellipticity(EllipticFunction::sqrt_shift(1.0));
    CHECK(r.admissible);
    CHECK(r.sup_value < 1.0);
    CHECK(*r.analytic_bound == 1.0);
    CHECK_FALSE(wg::check_ellipticity(EllipticFunction::sqrt_shift(1.01)).admissible);
  }
  SUBCASE("threshold c^2 = 64/27") {
    CHECK(wg::check_ellipticity(EllipticFunction::rational(1.53)).admissible);
    CHECK_FALSE(wg::check_ellipticity(EllipticFunction::rational(1.55)).admissible);
    CHECK(wg::check_ellipticity(EllipticFunction::rational(-1.53)).admissible);
  }
  SUBCASE("grid never exceeds the analytic bound") {
    for (double c : {0.3, 1.0, 1.5, 2.0}) {
      const auto F = EllipticFunction::rational(c);
      double grid_max = 0.0;
      const auto r = wg::check_ellipticity(F, 1e6, 4096);
      for (int i = 0; i <= 4000; ++i) {
        const double x = std::pow(10.0, -6.0 + 12.0 * i / 4000.0);
        const double fp = wg::eval_f_prime(F, x);
        grid_max = std::max(grid_max, 4 * x * fp * fp);
      }
      CHECK(grid_max <= *r.analytic_bound * (1 + 1e-12));
    }
  }
  CHECK_THROWS_AS(wg::check_ellipticity(EllipticFunction::zero(), 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(wg::check_ellipticity(EllipticFunction::zero(), 1.0, 1), std::invalid_argument);
}

TEST_CASE("g and g_bar") {
  for (double x : {-1.0, 0.0, 2.0}) {
    CHECK(wg::g(EllipticFunction::zero(), x) == x);
    CHECK(wg::g_bar(EllipticFunction::zero(), x) == x);
  }
  CHECK(wg::g(EllipticFunction::sqrt_shift(1.0), 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (const auto& F : admissible_samples()) {
    CHECK(wg::g(F, 0.0) == 0.0);
    CHECK(wg::g_bar(F, 0.0) == 0.0);
  }
}

TEST_CASE("g, g_bar: cancellation-free forms agree with the naive formula") {
  for (const auto& F : admissible_samples()) {
    for (double x : {-7.5, -1.0, -0.2, 0.3, 2.0, 11.0}) {
      const double naive = x - wg::eval_f(F, x * x);
      CHECK(wg::g(F, x) == doctest::Approx(naive).epsilon(1e-13));
      const double naive_p = 1.0 - 2.0 * x * wg::eval_f_prime(F, x * x);
      CHECK(wg::g_prime(F, x) == doctest::Approx(naive_p).epsilon(1e-12));
    }
  }
  // far end of the finite side: g(r) -> -1 + 1/(2|r|)
  const auto F = EllipticFunction::sqrt_shift(1.0);
  CHECK(wg::g(F, -1e8) == doctest::Approx(-1.0 + 0.5e-8).epsilon(1e-15));
}

TEST_CASE("property: strict monotonicity, reflection identity, reparameterised ellipticity") {
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> x_dist(-50.0, 50.0);
  for (const auto& F : admissible_samples()) {
    for (int i = 0; i < 500; ++i) {
      double a = x_dist(rng), b = x_dist(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      CHECK(wg::g(F, a) < wg::g(F, b));
      CHECK(wg::g_bar(F, a) < wg::g_bar(F, b));
      CHECK(wg::g_bar(F, a) == -wg::g(F, -a));
      CHECK(std::abs(2.0 * a * wg::eval_f_prime(F, a * a)) < 1.0);
    }
  }
}

TEST_CASE("compute_limits closed forms") {
  const double inf = std::numeric_limits<double>::infinity();
  auto z = wg::compute_limits(EllipticFunction::zero());
  CHECK(z.ell_minus == -inf);
  CHECK(z.ell_plus == inf);
  auto r = wg::compute_limits(EllipticFunction::rational(1.0));
  CHECK(r.ell_minus == -inf);
  CHECK(r.ell_plus == inf);
  auto s = wg::compute_limits(EllipticFunction::sqrt_shift(1.0));
  CHECK(s.ell_minus == -1.0);
  CHECK(s.ell_plus == inf);
  auto m = wg::compute_limits(EllipticFunction::sqrt_shift(-1.0));
  CHECK(m.ell_minus == -inf);
  CHECK(m.ell_plus == 1.0);
  for (const auto& F : admissible_samples()) {
    const auto L = wg::compute_limits(F);
    CHECK(L.ell_minus < 0.0);
    CHECK(L.ell_plus > 0.0);
  }
}

TEST_CASE("numerical limit estimate agrees with the closed forms") {
  for (const auto& F : admissible_samples()) {
    const auto exact = wg::compute_limits(F);
    const auto est = wg::estimate_limits_numerically(F);
    if (std::isinf(exact.ell_minus)) {
      CHECK(est.ell_minus == exact.ell_minus);
    } else {
      CHECK(est.ell_minus == doctest::Approx(exact.ell_minus).epsilon(1e-10));
    }
    if (std::isinf(exact.ell_plus)) {
      CHECK(est.ell_plus == exact.ell_plus);
    } else {
      CHECK(est.ell_plus == doctest::Approx(exact.ell_plus).epsilon(1e-10));
    }
  }
}

TEST_CASE("invert_g_bar") {
  for (const auto& F : admissible_samples()) {
    auto u = wg::invert_g_bar(F, 0.0);
    REQUIRE(u);
    CHECK(*u == 0.0);
  }
  CHECK(*wg::invert_g_bar(EllipticFunction::zero(), 1.3130) == 1.3130);
  CHECK_FALSE(wg::invert_g_bar(EllipticFunction::sqrt_shift(1.0), 1.2));
  CHECK_FALSE(wg::invert_g_bar(EllipticFunction::sqrt_shift(1.0), 1.0));
  CHECK_FALSE(wg::invert_g_bar(EllipticFunction::sqrt_shift(-1.0), -1.0));
  CHECK_FALSE(wg::invert_g_bar(EllipticFunction::zero(), std::nan("")));

  SUBCASE("round trip inside the range") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w_dist(-30.0, 30.0);
    for (const auto& F : admissible_samples()) {
      const auto L = wg::compute_limits(F);
      for (int i = 0; i < 300; ++i) {
        const double w = w_dist(rng);
        if (!(w > -L.ell_plus && w < -L.ell_minus)) {
          CHECK_FALSE(wg::invert_g_bar(F, w));
          continue;
        }
        const auto u = wg::invert_g_bar(F, w);
        REQUIRE(u);
        CHECK(std::abs(wg::g_bar(F, *u) - w) <= 1e-10);
      }
    }
  }
  SUBCASE("close to the finite end of the range") {
    const auto F = EllipticFunction::sqrt_shift(1.0);
    for (double w : {0.9, 0.99, 0.999999, 1.0 - 1e-9}) {
      const auto u = wg::invert_g_bar(F, w);
      REQUIRE(u);
      CHECK(std::abs(wg::g_bar(F, *u) - w) <= 1e-12);
    }
  }
}

TEST_CASE("family spec parsing") {
  CHECK(EllipticFunction::parse("zero") == EllipticFunction::zero());
  CHECK(EllipticFunction::parse("rational:c=1.5") == EllipticFunction::rational(1.5));
  CHECK(EllipticFunction::parse("sqrtshift:a=-0.25") == EllipticFunction::sqrt_shift(-0.25));
  CHECK_THROWS_AS(EllipticFunction::parse("rational:c="), std::invalid_argument);
  CHECK_THROWS_AS(EllipticFunction::parse("rational:a=1"), std::invalid_argument);
  CHECK_THROWS_AS(EllipticFunction::parse("cubic:c=1"), std::invalid_argument);
  CHECK_THROWS_AS(EllipticFunction::parse("rational:c=1x"), std::invalid_argument);
  CHECK_THROWS_AS(EllipticFunction::parse(""), std::invalid_argument);
  CHECK_THROWS_WITH_AS(EllipticFunction::parse("sqrtshift:a=nope"),
                       doctest::Contains("nope"), std::invalid_argument);

  const double c = 0.1 + 0.2;
  const auto F = EllipticFunction::rational(c);
  CHECK(EllipticFunction::parse(F.to_string()) == F);
}
