#include "doctest.h"

#include <cmath>

#include "tangle/domain.hpp"
#include "tangle/errors.hpp"

using namespace tangle;

namespace {

MapParams sine_map(double c = 3.0, double d = 2.0) {
  MapParams p;
  p.c = c;
  p.d = d;
  p.gamma = std::sqrt(2.0);
  p.b = 0.005;
  return p;
}

}  // namespace

TEST_CASE("domain boundaries at z = 0: sin theta = -1/3") {
  const MapParams p = sine_map();
  const ThetaInterval s = domain_boundaries(p, 0.0);
  CHECK(s.lo == doctest::Approx(-std::asin(1.0 / 3.0)).epsilon(1e-11));
  CHECK(s.hi == doctest::Approx(kPi + std::asin(1.0 / 3.0)).epsilon(1e-11));
  CHECK(std::abs(eval_F(p, s.lo, 0.0)) < 1e-10);
  CHECK(std::abs(eval_F(p, s.hi, 0.0)) < 1e-10);
  CHECK(eval_F(p, 0.5 * (s.lo + s.hi), 0.0) > 0.0);
}

TEST_CASE("domain boundaries at z = 0.5: sin theta = -1/2") {
  const MapParams p = sine_map();
  const ThetaInterval s = domain_boundaries(p, 0.5);
  CHECK(s.lo == doctest::Approx(-kPi / 6.0).epsilon(1e-11));
  CHECK(s.hi == doctest::Approx(7.0 * kPi / 6.0).epsilon(1e-11));
}

TEST_CASE("multi-strip profile splits V") {
  MapParams p = sine_map(1.0);
  p.forcing = ForcingProfile::sin_plus_sin3();
  const auto strips = vertical_strips(p, 0.0);
  CHECK(strips.size() >= 2);
  for (const auto& s : strips) {
    // Endpoints are roots of F unless they sit on the angle cut (a strip
    // wrapping the seam is reported as two fragments).
    if (s.lo > -kHalfPi + 1e-9) CHECK(std::abs(eval_F(p, s.lo, 0.0)) < 1e-10);
    if (s.hi < 3.0 * kHalfPi - 1e-9) CHECK(std::abs(eval_F(p, s.hi, 0.0)) < 1e-10);
    CHECK(eval_F(p, 0.5 * (s.lo + s.hi), 0.0) > 0.0);
  }
  CHECK_THROWS_AS(domain_boundaries(p, 0.0), MultipleRootsError);
}

TEST_CASE("no boundary when c is too small") {
  MapParams p = sine_map(0.4);  // 1 + 0.4 sin > 0 everywhere at z = 0
  CHECK_THROWS_AS(domain_boundaries(p, 0.0), NoBoundaryError);
}

TEST_CASE("critical theta solves F = d F_theta and is a fold minimum") {
  const MapParams p = sine_map();
  const double tc = critical_theta(p, 0.0);
  const ThetaInterval s = domain_boundaries(p, 0.0);
  CHECK(s.contains(tc));
  // Defining property: dtheta1/dtheta = 0 within tolerance.
  CHECK(std::abs(dtheta1_dtheta(p, tc, 0.0)) < 1e-9);
  // 1 + 3 sin(tc) = 6 cos(tc) at z = 0.
  CHECK(eval_F(p, tc, 0.0) == doctest::Approx(p.d * F_theta(p, tc)).epsilon(1e-10));
  // Second derivative positive: sign change of dtheta1/dtheta across tc.
  CHECK(dtheta1_dtheta(p, tc - 1e-4, 0.0) < 0.0);
  CHECK(dtheta1_dtheta(p, tc + 1e-4, 0.0) > 0.0);
}

TEST_CASE("fold strip brackets theta_c with |dtheta1/dtheta| = 2 endpoints") {
  const MapParams p = sine_map();
  const double tc = critical_theta(p, 0.0);
  const ThetaInterval f = fold_strip(p, 0.0);
  CHECK(f.contains(tc));
  CHECK(std::abs(std::abs(dtheta1_dtheta(p, f.lo, 0.0)) - 2.0) < 1e-8);
  CHECK(std::abs(std::abs(dtheta1_dtheta(p, f.hi, 0.0)) - 2.0) < 1e-8);
  CHECK(f.width() > 0.0);
  // Regression record of the width at d = 2 (the 10/d scale bound applies
  // in the large-d regime only).
  CHECK(f.width() == doctest::Approx(1.8771051431).epsilon(1e-6));
}

TEST_CASE("fold strip obeys the 10/d size bound at large d") {
  const MapParams p = sine_map(3.0, 50.0);
  const ThetaInterval f = fold_strip(p, 0.0);
  CHECK(f.width() < 10.0 / p.d);
}

TEST_CASE("monotone fold: dtheta1/dtheta strictly increasing for c >= 2") {
  const MapParams p = sine_map();
  const ThetaInterval s = domain_boundaries(p, 0.0);
  double prev = -1e300;
  for (int i = 1; i < 400; ++i) {
    const double th = s.lo + s.width() * i / 400.0;
    const double g = dtheta1_dtheta(p, th, 0.0);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("boundary consistency: theta1 -> +inf and z1 -> 0 at the strip edges") {
  const MapParams p = sine_map();
  const ThetaInterval s = domain_boundaries(p, 0.0);
  double prev_theta1 = -1e300;
  for (double eps : {1e-4, 1e-6, 1e-8, 1e-10}) {
    const auto im = apply_unwrapped(p, s.lo + eps, 0.0);
    REQUIRE(im.has_value());
    CHECK(im->x > prev_theta1);
    prev_theta1 = im->x;
  }
  const auto deep = apply_unwrapped(p, s.lo + 1e-10, 0.0);
  CHECK(deep->x > 40.0);
  CHECK(deep->y < 1e-10);

  const auto right = apply_unwrapped(p, s.hi - 1e-10, 0.0);
  CHECK(right->x > 40.0);
  CHECK(right->y < 1e-10);
}

TEST_CASE("v_bounding_box covers the widest strip") {
  const MapParams p = sine_map();
  const Box b = v_bounding_box(p);
  // Widest at z = 1: sin theta = -2/3.
  CHECK(b.theta_lo == doctest::Approx(-std::asin(2.0 / 3.0)).epsilon(1e-3));
  CHECK(b.theta_hi == doctest::Approx(kPi + std::asin(2.0 / 3.0)).epsilon(1e-3));
}
