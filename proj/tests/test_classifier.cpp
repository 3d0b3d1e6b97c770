#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"
#include "weingarten/classifier.hpp"

using wg::Ambient;
using wg::EllipticFunction;
using wg::SurfaceKind;

namespace {

constexpr double kPi = std::numbers::pi;
// Minimal unduloid from pi/4: vertical period; catenoid from phi = 1: half-height.
constexpr double kUnduloidTTilde = 5.24411510858423768451;
constexpr double kCatenoidTInf = 1.36449619131287570554;

wg::Profile trace(const EllipticFunction& F, const Ambient& A, double phi0, int sigma = 1,
                  double s_max = 0.0) {
  return wg::integrate_profile(wg::make_shooting_spec(F, A, phi0, sigma, s_max));
}

}  // namespace

TEST_CASE("minimal unduloid from pi/4") {
  const auto r = wg::classify(trace(EllipticFunction::zero(), Ambient::sphere(), kPi / 4));
  CHECK(r.kind == SurfaceKind::Unduloidal);
  CHECK(std::abs(*r.period_T - 2 * kPi) <= 1e-8);
  CHECK(std::abs(*r.vertical_period - kUnduloidTTilde) <= 1e-8);
  CHECK(std::abs(*r.phi_min - kPi / 4) <= 1e-12);
  CHECK(std::abs(*r.phi_max - 3 * kPi / 4) <= 1e-8);
  CHECK(*r.s1 == 0.0);
  CHECK(std::abs(*r.s2 - kPi) <= 1e-8);
  REQUIRE(r.s3);
  CHECK(*r.s3 > *r.s1);
  CHECK(*r.s3 < *r.s2);
  CHECK_FALSE(r.t_infinity);
  for (const auto& [name, check] : r.diagnostics) {
    INFO(name);
    CHECK(check.passed);
  }
}

TEST_CASE("minimal unduloid period is 2 pi for every neck") {
  for (double phi0 : {0.3, 0.8, 1.2, 1.5}) {
    const auto est = wg::estimate_period(trace(EllipticFunction::zero(), Ambient::sphere(), phi0));
    CHECK(std::abs(est.T - 2 * kPi) <= 1e-8);
    CHECK(est.cross_check <= 1e-7 * est.T);
  }
}

TEST_CASE("minimal catenoid from phi = 1") {
  const auto P = trace(EllipticFunction::zero(), Ambient::hyperbolic(), 1.0);
  const auto r = wg::classify(P);
  CHECK(r.kind == SurfaceKind::Catenoidal);
  CHECK(std::abs(*r.t_infinity - kCatenoidTInf) <= 1e-8);
  CHECK(std::abs(*r.decay_rate_b - 1.0) <= 1e-6);
  CHECK(*r.phi_min == 1.0);
  CHECK_FALSE(r.period_T);
  CHECK(std::abs(P.samples.back().t) < *r.t_infinity);
  CHECK_THROWS_AS(wg::estimate_period(P), wg::InsufficientEvents);
  const auto tail = wg::estimate_t_infinity(P);
  CHECK(tail.fit_ok);
  CHECK(tail.fit_residual < wg::kTailFitResidualTol);
}

TEST_CASE("cylinder and slice") {
  const auto cyl = wg::classify(trace(EllipticFunction::sqrt_shift(-0.5), Ambient::sphere(), kPi / 2));
  CHECK(cyl.kind == SurfaceKind::Cylinder);
  const auto slice = wg::classify(
      wg::make_slice_profile(EllipticFunction::rational(1.0), Ambient::hyperbolic(), -0.5, 0.2, 4.0, 50));
  CHECK(slice.kind == SurfaceKind::Slice);
  const auto slice_s = wg::classify(
      wg::make_slice_profile(EllipticFunction::zero(), Ambient::sphere(), 1.0, 0.2, 3.0, 50));
  CHECK(slice_s.kind == SurfaceKind::Slice);
  CHECK(std::string(wg::to_string(SurfaceKind::Catenoidal)) == "Catenoidal");
}

TEST_CASE("corrupted profiles are rejected") {
  auto P = trace(EllipticFunction::zero(), Ambient::sphere(), kPi / 4);
  P.k1[P.k1.size() / 3] += 1e-3;
  CHECK_THROWS_AS(wg::classify(P), wg::InconsistentProfile);

  auto Q = trace(EllipticFunction::zero(), Ambient::hyperbolic(), 1.0);
  for (auto& st : Q.samples) {
    if (st.s > 3.0) st.t += 1e-4;  // break the odd symmetry of t
  }
  CHECK_THROWS_AS(wg::classify(Q), wg::InconsistentProfile);
}

TEST_CASE("symmetry check about extrema") {
  auto spec = wg::make_shooting_spec(EllipticFunction::sqrt_shift(1.0), Ambient::sphere(), 0.9, 1);
  spec.reintegrate_backward = true;
  const auto P = wg::integrate_profile(spec);
  CHECK(wg::check_symmetry(P, 0.0) <= wg::kSymmetryTol);
  const auto est = wg::estimate_period(P);
  CHECK(wg::check_symmetry(P, est.s2) <= wg::kSymmetryTol);
  // not a symmetry point
  CHECK(wg::check_symmetry(P, 0.5 * est.s2) > 1e-3);
}

TEST_CASE("property: H^2 profiles are strictly convex catenoids") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> phi_dist(0.2, 3.0);
  std::uniform_real_distribution<double> c_dist(-1.5, 1.5);
  for (int i = 0; i < 12; ++i) {
    const auto F = (i % 2) ? EllipticFunction::rational(c_dist(rng)) : EllipticFunction::sqrt_shift(-1.0);
    const auto P = trace(F, Ambient::hyperbolic(), phi_dist(rng));
    REQUIRE(P.termination == wg::Termination::Completed);
    for (std::size_t k = 0; k < P.samples.size(); ++k) CHECK(P.phi_pp(k) > 0.0);
    const auto r = wg::classify(P);
    CHECK(r.kind == SurfaceKind::Catenoidal);
    CHECK(std::abs(P.samples.back().t) <= *r.t_infinity);
  }
}

TEST_CASE("property: on S^2, phi'' has the sign of pi/2 - phi") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> phi_dist(0.2, kPi / 2 - 0.05);
  std::uniform_real_distribution<double> c_dist(-1.5, 1.5);
  for (int i = 0; i < 12; ++i) {
    const auto F = (i % 2) ? EllipticFunction::rational(c_dist(rng)) : EllipticFunction::zero();
    const auto P = trace(F, Ambient::sphere(), phi_dist(rng));
    for (std::size_t k = 0; k < P.samples.size(); ++k) {
      const double off = P.samples[k].phi - kPi / 2;
      if (std::abs(off) < 1e-9) continue;
      CHECK((off < 0 ? P.phi_pp(k) > 0.0 : P.phi_pp(k) < 0.0));
    }
    CHECK(wg::classify(P).kind == SurfaceKind::Unduloidal);
  }
}
