#include "doctest.h"

#include <cmath>

#include "tangle/errors.hpp"
#include "tangle/fixed_points.hpp"
#include "tangle/survival.hpp"

using namespace tangle;

namespace {

MapParams fig9_params() {
  MapParams p;
  p.a = 2.0;
  p.b = 0.005;
  p.c = 3.0;
  p.d = 2.0;
  p.gamma = std::sqrt(2.0);
  return p;
}

}  // namespace

TEST_CASE("m = 0 fixed points of the Fig. 9 family: one sink, one saddle") {
  const MapParams p = fig9_params();
  const auto recs = find_fixed_points(p, 0, 0);
  REQUIRE(recs.size() == 2);

  int sinks = 0, saddles = 0;
  for (const auto& r : recs) {
    // F = e^(a/d) = e at every m = 0 fixed point.
    CHECK(r.F_value == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
    CHECK(r.winding_m == 0);
    // sin(theta*) = (e - 1 - 0.005 e^gamma)/3
    CHECK(std::sin(r.point.theta) == doctest::Approx(0.5659051922).epsilon(1e-8));
    // apply returns the point to 1e-10.
    const auto im = apply(p, r.point);
    REQUIRE(im.has_value());
    CHECK(std::abs(wrap_to_pi(im->theta - r.point.theta)) < 1e-10);
    CHECK(std::abs(im->z - r.point.z) < 1e-10);
    if (r.is_sink()) {
      ++sinks;
      CHECK(std::cos(r.point.theta) > 0.0);
      CHECK(std::abs(r.lambda1) == doctest::Approx(0.7956870429).epsilon(1e-7));
      CHECK(std::abs(r.lambda2) == doctest::Approx(0.0134472470).epsilon(1e-6));
    }
    if (r.is_saddle()) ++saddles;
  }
  CHECK(sinks == 1);
  CHECK(saddles == 1);
}

TEST_CASE("m = 1 family members are saddles with large angular expansion") {
  const MapParams p = fig9_params();
  const auto recs = find_fixed_points(p, 1, 1);
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) {
    CHECK(r.F_value == doctest::Approx(0.1174676088).epsilon(1e-9));
    CHECK(r.is_saddle());
    CHECK(std::abs(r.lambda1) > 10.0);
    CHECK(std::abs(r.lambda1 * r.lambda2) < 0.01);  // det << 1
  }
}

TEST_CASE("no fixed points when F_m is out of reach") {
  const MapParams p = fig9_params();
  // m = -1: F = e^((2 + 2pi)/2) ~ 63, needs sin theta ~ 20.
  CHECK(find_fixed_points(p, -1, -1).empty());
}

TEST_CASE("winding consistency: a - d ln F = 2 pi m") {
  const MapParams p = fig9_params();
  for (const auto& r : find_fixed_points(p, 0, 3)) {
    const double lhs = p.a - p.d * std::log(r.F_value);
    CHECK(lhs == doctest::Approx(kTwoPi * r.winding_m).epsilon(1e-9));
    // det identity at the fixed point
    CHECK(jacobian(p, r.point).det() ==
          doctest::Approx(p.gamma * p.b * std::pow(r.F_value, p.gamma - 1.0) * p.k)
              .epsilon(1e-12));
  }
}

TEST_CASE("classify_fixed_point rejects non-fixed points") {
  const MapParams p = fig9_params();
  CHECK_THROWS_AS(classify_fixed_point(p, PhasePoint(0.3, 0.1)), NotFixedError);
}

TEST_CASE("saddle family rules at d = 2") {
  const MapParams p = fig9_params();
  CHECK(first_saddle_m_weak(p) == 6);    // ceil(3d) with 3d = 6
  CHECK(first_saddle_m_strict(p) == 7);  // smallest integer > 6

  const auto fam = find_saddle_family(p, 3);
  REQUIRE(!fam.empty());
  for (const auto& r : fam) {
    CHECK(r.winding_m >= 6);
    CHECK(r.is_saddle());
    CHECK(r.F_value < 0.01);  // deep family: F < 1/100
  }
}

TEST_CASE("saddle family theta drifts slowly in a") {
  // |d theta_m / d a| < 1/100 for the deep members, by finite differences.
  MapParams p = fig9_params();
  const auto fam = find_saddle_family(p, 1);
  REQUIRE(fam.size() >= 2);
  const double da = 1e-5;
  MapParams p2 = p;
  p2.a = p.a + da;
  const auto fam2 = find_saddle_family(p2, 1);
  REQUIRE(fam2.size() == fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double drift =
        std::abs(wrap_to_pi(fam2[i].point.theta - fam[i].point.theta)) / da;
    CHECK(drift < 0.01);
  }
}

TEST_CASE("find_periodic_orbits at period 1 reproduces find_fixed_points") {
  const MapParams p = fig9_params();
  const auto direct = find_fixed_points(p, 0, 1);
  const auto via_period = find_periodic_orbits(p, 1);
  // Every direct record appears in the period-1 scan.
  for (const auto& r : direct) {
    bool found = false;
    for (const auto& q : via_period)
      if (std::abs(wrap_to_pi(q.point.theta - r.point.theta)) < 1e-7 &&
          std::abs(q.point.z - r.point.z) < 1e-7)
        found = true;
    CHECK(found);
  }
}

TEST_CASE("Fig. 13 family has an attracting period-2 orbit") {
  MapParams p;
  p.a = 1.0;
  p.b = 0.005;
  p.c = 1.0;
  p.d = 2.0;
  p.gamma = std::sqrt(2.0);
  p.forcing = ForcingProfile::sin_plus_sin3();

  // Trace recurrence finds the period first.
  const int per = detect_period(p, PhasePoint(0.3, 0.01));
  CHECK(per == 2);

  const auto orbits = find_periodic_orbits(p, 2, 400);
  bool sink_found = false;
  for (const auto& r : orbits) {
    if (!r.is_sink()) continue;
    sink_found = true;
    // Multipliers match a finite-difference Jacobian of F^2.
    const double h = 1e-7;
    auto f2 = [&](double th, double z) {
      auto q1 = apply_unwrapped(p, th, z);
      return *apply_unwrapped(p, q1->x, q1->y);
    };
    const Vec2 c0 = f2(r.point.theta, r.point.z);
    (void)c0;
    const double t = r.point.theta, z = r.point.z;
    const Mat2 J{(f2(t + h, z).x - f2(t - h, z).x) / (2 * h),
                 (f2(t, z + h).x - f2(t, z - h).x) / (2 * h),
                 (f2(t + h, z).y - f2(t - h, z).y) / (2 * h),
                 (f2(t, z + h).y - f2(t, z - h).y) / (2 * h)};
    const auto [l1, l2] = orbit_multipliers(p, r.point, 2);
    CHECK(J.trace() == doctest::Approx((l1 + l2).real()).epsilon(1e-4));
    CHECK(J.det() == doctest::Approx((l1 * l2).real()).epsilon(1e-4));
  }
  CHECK(sink_found);
}

TEST_CASE("sink basin sanity: nearby seeds converge to the Fig. 9 sink") {
  const MapParams p = fig9_params();
  const auto recs = find_fixed_points(p, 0, 0);
  const FixedPointRecord* sink = nullptr;
  for (const auto& r : recs)
    if (r.is_sink()) sink = &r;
  REQUIRE(sink != nullptr);

  int converged = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      PhasePoint q(sink->point.theta + (i - 4.5) * 0.002,
                   sink->point.z + (j - 4.5) * 0.002);
      for (int it = 0; it < 300; ++it) {
        auto im = apply(p, q);
        if (!im) break;
        q = *im;
      }
      if (std::abs(wrap_to_pi(q.theta - sink->point.theta)) < 1e-8 &&
          std::abs(q.z - sink->point.z) < 1e-8)
        ++converged;
    }
  }
  CHECK(converged == 100);
}
