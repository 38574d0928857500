#include "doctest.h"

#include <cmath>

#include "tangle/errors.hpp"
#include "tangle/tangency.hpp"

using namespace tangle;

namespace {

// Tangency working regime: strong angular gain, sine forcing.
MapParams deep_family(double a) {
  MapParams p;
  p.a = a;
  p.b = 0.005;
  p.c = 3.0;
  p.d = 20.0;
  p.gamma = std::sqrt(2.0);
  return p;
}

}  // namespace

TEST_CASE("tangency saddle selection (strict m rule)") {
  const MapParams p = deep_family(3.5);
  CHECK(first_saddle_m_strict(p) == 61);
  const FixedPointRecord s = tangency_saddle(p, 61);
  CHECK(s.is_saddle());
  CHECK(F_theta(p, s.point.theta) > 0.0);
  CHECK(s.F_value == doctest::Approx(std::exp((3.5 - kTwoPi * 61) / 20.0)).epsilon(1e-8));
}

TEST_CASE("gap moves at unit speed in a") {
  TangencyOptions opts;
  const MapParams p0 = deep_family(3.5);
  const double g1 = tangency_gap(p0, tangency_saddle(p0, 61), opts);
  const MapParams p1 = deep_family(3.52);
  const double g2 = tangency_gap(p1, tangency_saddle(p1, 61), opts);
  // The same fold window is auto-selected at both values (a shift of 0.02
  // does not move the feasibility edge); the gap advances by ~ the increment.
  CHECK(wrap_to_pi(g2 - g1) == doctest::Approx(0.02).epsilon(0.05));
}

TEST_CASE("gap changes sign over one 2pi period of a") {
  TangencyOptions opts;
  int sign_changes = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= 32; ++i) {
    const double a = 3.0 + kTwoPi * i / 32.0;
    const MapParams p = deep_family(a);
    double g;
    try {
      g = tangency_gap(p, tangency_saddle(p, 61), opts);
    } catch (const FoldNotFoundError&) {
      continue;
    }
    if (have_prev && (prev < 0.0) != (g < 0.0) && std::abs(g - prev) < 1.0)
      ++sign_changes;
    prev = g;
    have_prev = true;
  }
  CHECK(sign_changes >= 1);
}

TEST_CASE("find_tangency: convergence, non-degeneracy, unfolding") {
  // Bracket a sign change first.
  TangencyOptions opts;
  double a_lo = 0.0, a_hi = 0.0;
  {
    double prev = 0.0, prev_a = 0.0;
    bool have = false;
    for (int i = 0; i <= 32; ++i) {
      const double a = 3.0 + kTwoPi * i / 32.0;
      const MapParams p = deep_family(a);
      double g;
      try {
        g = tangency_gap(p, tangency_saddle(p, 61), opts);
      } catch (const FoldNotFoundError&) {
        continue;
      }
      if (have && (prev < 0.0) != (g < 0.0) && std::abs(g - prev) < 1.0) {
        a_lo = prev_a;
        a_hi = a;
        break;
      }
      prev = g;
      prev_a = a;
      have = true;
    }
  }
  REQUIRE(a_hi > a_lo);

  const TangencyReport rep = find_tangency(deep_family(0.0), 61, a_lo, a_hi, opts);
  CHECK(rep.gap_residual < 1e-10);
  CHECK(rep.quadratic_coeff > 100.0);
  CHECK(rep.crossing_speed != 0.0);
  // Desk-scale speed is close to the angular translation rate 1; the
  // asymptotic reference separation is 2/3 - 1/25.
  CHECK(std::abs(rep.crossing_speed) > 2.0 / 3.0 - 1.0 / 25.0);
  CHECK(std::abs(rep.crossing_speed) == doctest::Approx(1.0).epsilon(0.1));
  // Quadratic unfolding: 0 local intersections on one side, 2 on the other.
  CHECK(((rep.intersections_below == 0 && rep.intersections_above == 2) ||
         (rep.intersections_below == 2 && rep.intersections_above == 0)));
  // Slope bounds in the regime the estimates promise.
  CHECK(rep.unstable_slope_bound < std::sqrt(deep_family(0.0).b));
  CHECK(rep.stable_slope_bound < std::sqrt(deep_family(0.0).k));
}

TEST_CASE("find_tangency without a bracket raises NoBracket") {
  TangencyOptions opts;
  // A tiny interval cannot straddle a zero of a unit-slope function unless
  // it happens to contain one; pick one where the gap is clearly one-signed.
  const MapParams p = deep_family(3.5);
  const double g = tangency_gap(p, tangency_saddle(p, 61), opts);
  REQUIRE(std::abs(g) > 0.05);
  CHECK_THROWS_AS(find_tangency(deep_family(0.0), 61, 3.5 - 0.01, 3.5 + 0.01, opts),
                  NoBracketError);
}

TEST_CASE("infeasible fold window raises FoldNotFound") {
  const MapParams p = deep_family(3.5);
  TangencyOptions opts;
  opts.winding = -1000;  // far outside the stage-1 angular range
  CHECK_THROWS_AS(tangency_gap(p, tangency_saddle(p, 61), opts), FoldNotFoundError);
}
