#include "doctest.h"

#include <cmath>

#include "tangle/domain.hpp"
#include "tangle/errors.hpp"
#include "tangle/manifolds.hpp"

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

FixedPointRecord m0_saddle(const MapParams& p) {
  for (const auto& r : find_fixed_points(p, 0, 0))
    if (r.is_saddle()) return r;
  throw std::runtime_error("no m=0 saddle");
}

double sup_gap(const CurveSample& a, const CurveSample& b) {
  // Compare at common arclengths via linear interpolation on b.
  double worst = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const double s = a.arclength[i];
    if (s < b.arclength.front() || s > b.arclength.back()) continue;
    std::size_t j = 1;
    while (j < b.arclength.size() && b.arclength[j] < s) ++j;
    if (j >= b.arclength.size()) continue;
    const double t =
        (s - b.arclength[j - 1]) / (b.arclength[j] - b.arclength[j - 1]);
    const double th = b.points[j - 1].theta + t * (b.points[j].theta - b.points[j - 1].theta);
    const double z = b.points[j - 1].z + t * (b.points[j].z - b.points[j - 1].z);
    worst = std::max(worst, std::hypot(a.points[i].theta - th, a.points[i].z - z));
  }
  return worst;
}

}  // namespace

TEST_CASE("stable curve passes through the saddle and is transverse") {
  const MapParams p = fig9_params();
  const FixedPointRecord saddle = m0_saddle(p);
  const CurveSample c = stable_curve(p, saddle, 12, 0.25);
  REQUIRE(c.points.size() > 100);

  // The saddle is on the curve at arclength 0.
  bool has_zero = false;
  for (std::size_t i = 0; i < c.arclength.size(); ++i)
    if (c.arclength[i] == 0.0) {
      has_zero = true;
      CHECK(c.points[i].theta == doctest::Approx(saddle.point.theta));
      CHECK(c.points[i].z == doctest::Approx(saddle.point.z));
    }
  CHECK(has_zero);

  // z is monotone along the curve (vertical curve in the k-scaled sense)
  // and the measured |d theta/d z| stays below sqrt(k).
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const double dz = c.points[i].z - c.points[i - 1].z;
    const double dth = c.points[i].theta - c.points[i - 1].theta;
    CHECK(dz > 0.0);
    CHECK(std::abs(dth / dz) < std::sqrt(p.k));
  }
}

TEST_CASE("stable curves converge geometrically in the order n") {
  const MapParams p = fig9_params();
  const FixedPointRecord saddle = m0_saddle(p);

  std::vector<double> gaps;
  CurveSample prev = stable_curve(p, saddle, 1, 0.2);
  for (int n = 2; n <= 5; ++n) {
    const CurveSample cur = stable_curve(p, saddle, n, 0.2);
    gaps.push_back(sup_gap(prev, cur));
    prev = cur;
  }
  // |gamma_{n+1} - gamma_n| decays geometrically with ratio < 0.5 at b=0.005
  // until the floor.
  REQUIRE(gaps.size() >= 3);
  CHECK(gaps[0] > 0.0);
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i - 1] < 1e-13) break;
    CHECK(gaps[i] < 0.5 * gaps[i - 1]);
  }
}

TEST_CASE("points on the stable curve contract toward the saddle") {
  const MapParams p = fig9_params();
  const FixedPointRecord saddle = m0_saddle(p);
  const CurveSample c = stable_curve(p, saddle, 12, 0.2);

  for (double s_target : {0.05, 0.1, 0.15}) {
    // Pick the sample nearest the target arclength on the upper branch.
    std::size_t best = 0;
    for (std::size_t i = 0; i < c.arclength.size(); ++i)
      if (std::abs(c.arclength[i] - s_target) <
          std::abs(c.arclength[best] - s_target))
        best = i;
    PhasePoint q = c.points[best];
    double dist = std::hypot(wrap_to_pi(q.theta - saddle.point.theta),
                             q.z - saddle.point.z);
    for (int i = 0; i < 6; ++i) {
      auto im = apply(p, q);
      REQUIRE(im.has_value());
      q = *im;
      const double nd = std::hypot(wrap_to_pi(q.theta - saddle.point.theta),
                                   q.z - saddle.point.z);
      if (dist < 1e-11) break;  // machine floor
      CHECK(nd < dist);
      dist = nd;
    }
    CHECK(dist < 1e-4);
  }
}

TEST_CASE("unstable eigenvector is expanding and nearly horizontal") {
  const MapParams p = fig9_params();
  const FixedPointRecord saddle = m0_saddle(p);
  const Vec2 vu = unstable_eigenvector(p, saddle);
  CHECK(std::abs(vu.norm() - 1.0) < 1e-14);
  CHECK(std::abs(slope(vu)) < std::sqrt(p.b));
  // J vu = lambda_u vu
  const Vec2 jv = jacobian(p, saddle.point) * vu;
  CHECK(jv.x / vu.x == doctest::Approx(saddle.lambda1.real()).epsilon(1e-9));
}

TEST_CASE("unstable curve grows by at least doubling while in V minus V_f") {
  const MapParams p = fig9_params();
  const FixedPointRecord saddle = m0_saddle(p);

  double prev_len = 0.0;
  for (int iters = 1; iters <= 3; ++iters) {
    const CurveSample c = unstable_curve(p, saddle, iters, 1e-5, 1e-3);
    REQUIRE(c.points.size() >= 2);
    const double len = c.arclength.back() - c.arclength.front();
    if (iters > 1 && prev_len > 0.0) {
      // Doubling holds while the curve stays clear of the fold strip; the
      // saddle's multiplier is ~2.8 here.
      const ThetaInterval fold = fold_strip(p, saddle.point.z);
      bool clear = true;
      for (const auto& q : c.points)
        if (fold.contains(q.theta)) clear = false;
      if (clear) CHECK(len >= 2.0 * prev_len);
    }
    prev_len = len;
  }
}

TEST_CASE("unstable curve slope stays below sqrt(b) off the fold strip") {
  const MapParams p = fig9_params();
  const FixedPointRecord saddle = m0_saddle(p);
  const CurveSample c = unstable_curve(p, saddle, 3, 1e-5, 1e-3);
  REQUIRE(c.points.size() > 10);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    const double dth = wrap_to_pi(c.points[i].theta - c.points[i - 1].theta);
    const double dz = c.points[i].z - c.points[i - 1].z;
    if (std::abs(dth) < 1e-12) continue;
    const double F = eval_F(p, c.points[i]);
    if (std::abs(1.0 - p.d * F_theta(p, c.points[i].theta) / F) < 2.0) continue;
    CHECK(std::abs(dz / dth) < std::sqrt(p.b));
  }
}

TEST_CASE("stable curve requires a saddle") {
  const MapParams p = fig9_params();
  for (const auto& r : find_fixed_points(p, 0, 0))
    if (r.is_sink()) CHECK_THROWS_AS(stable_curve(p, r, 10, 0.1), PreconditionError);
}
