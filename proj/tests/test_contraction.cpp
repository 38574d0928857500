#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "tangle/contraction.hpp"
#include "tangle/errors.hpp"
#include "tangle/rng.hpp"

using namespace tangle;

namespace {

// Independent oracle: most contracted direction from the eigen-decomposition
// of M^T M (smaller eigenvalue's eigenvector).
struct MtmOracle {
  Vec2 e;
  double sigma_min, sigma_max;
};

MtmOracle mtm_oracle(const Mat2& M) {
  const double a = M.a11 * M.a11 + M.a21 * M.a21;   // (M^T M)_11
  const double b = M.a11 * M.a12 + M.a21 * M.a22;   // (M^T M)_12
  const double c = M.a12 * M.a12 + M.a22 * M.a22;   // (M^T M)_22
  const double tr = a + c;
  const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
  const double lmax = 0.5 * (tr + disc);
  // Stable small eigenvalue: det(M^T M)/lmax avoids the subtraction.
  const double detM = M.det();
  const double lmin = detM * detM / lmax;
  Vec2 e;
  if (std::abs(b) > 1e-300) {
    const Vec2 e1{b, lmin - a};
    const Vec2 e2{lmin - c, b};
    e = (e1.norm() >= e2.norm()) ? e1 : e2;
  } else {
    e = (a <= c) ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  }
  const double n = e.norm();
  e = e / n;
  if (e.x < 0.0 || (e.x == 0.0 && e.y < 0.0)) e = -e;
  return {e, std::sqrt(std::max(0.0, lmin)), std::sqrt(lmax)};
}

Mat2 random_matrix(Rng& rng) {
  return {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
          rng.uniform(-2.0, 2.0)};
}

Mat2 product_of(const std::vector<Mat2>& ms) {
  Mat2 P{1, 0, 0, 1};
  for (const auto& m : ms) P = m * P;
  return P;
}

}  // namespace

TEST_CASE("axis-aligned diagonal matrix") {
  const Mat2 M{2.0, 0.0, 0.0, 0.5};
  const auto f = most_contracted_direction(std::array<Mat2, 1>{M});
  CHECK(std::abs(f.e.x) < 1e-14);
  CHECK(std::abs(f.e.y) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.sigma_min() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f.sigma_max() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("unit shear matrix") {
  const Mat2 M{1.0, 1.0, 0.0, 1.0};
  const auto f = most_contracted_direction(std::array<Mat2, 1>{M});
  // Smaller singular value sqrt((3 - sqrt 5)/2), direction from M^T M.
  CHECK(f.sigma_min() ==
        doctest::Approx(std::sqrt((3.0 - std::sqrt(5.0)) / 2.0)).epsilon(1e-13));
  CHECK(f.e.x == doctest::Approx(0.85065080835).epsilon(1e-9));
  CHECK(f.e.y == doctest::Approx(-0.52573111212).epsilon(1e-9));
}

TEST_CASE("agrees with the M^T M oracle on random products") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Mat2> ms;
    const int n = 1 + int(rng.integer(5));
    for (int i = 0; i < n; ++i) ms.push_back(random_matrix(rng));
    const Mat2 P = product_of(ms);
    MtmOracle oracle = mtm_oracle(P);
    // Skip near-conformal products where the direction is ill-posed.
    if (oracle.sigma_max - oracle.sigma_min < 1e-8 * oracle.sigma_max) continue;
    const auto f = most_contracted_direction(std::span<const Mat2>(ms));
    CHECK(std::abs(f.e.x - oracle.e.x) < 1e-10);
    CHECK(std::abs(f.e.y - oracle.e.y) < 1e-10);
    CHECK(f.sigma_min() == doctest::Approx(oracle.sigma_min).epsilon(1e-10));
    CHECK(f.sigma_max() == doctest::Approx(oracle.sigma_max).epsilon(1e-10));
  }
}

TEST_CASE("most contracted means |Me| <= |Mu| over random unit vectors") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Mat2> ms{random_matrix(rng), random_matrix(rng)};
    const Mat2 P = product_of(ms);
    const auto f = most_contracted_direction(std::span<const Mat2>(ms));
    const double me = (P * f.e).norm();
    for (int i = 0; i < 64; ++i) {
      const double phi = rng.uniform(0.0, kTwoPi);
      const Vec2 u{std::cos(phi), std::sin(phi)};
      CHECK(me <= (P * u).norm() * (1.0 + 1e-12));
    }
    CHECK(std::abs(f.e.norm() - 1.0) < 1e-14);
  }
}

TEST_CASE("conformal product raises DegenerateConformal") {
  const Mat2 rot{0.6, -0.8, 0.8, 0.6};  // rotation: both singular values 1
  CHECK_THROWS_AS(most_contracted_direction(std::array<Mat2, 1>{rot}),
                  DegenerateConformalError);
}

TEST_CASE("e_n decays geometrically along orbits away from the fold strip") {
  MapParams p;
  p.a = 2.0;
  p.b = 0.005;
  p.c = 3.0;
  p.d = 2.0;
  p.gamma = std::sqrt(2.0);

  // The geometric-decay estimate holds for orbits that stay in V away from
  // the fold strip (|dtheta1/dtheta| >= 2), so filter seeds accordingly.
  auto orbit_avoids_fold = [&](PhasePoint q, int n) {
    for (int i = 0; i < n; ++i) {
      const double F = eval_F(p, q);
      if (F <= 0.0) return false;
      if (std::abs(1.0 - p.d * F_theta(p, q.theta) / F) < 2.0) return false;
      auto im = apply(p, q);
      if (!im) return false;
      q = *im;
    }
    return true;
  };

  Rng rng(17);
  int orbits_checked = 0;
  while (orbits_checked < 100) {
    const PhasePoint q(rng.uniform(0.2, 2.5), rng.uniform(-0.3, 0.3));
    if (!orbit_avoids_fold(q, 12)) continue;

    const auto seq = direction_sequence(p, q, 10);
    REQUIRE(seq.size() >= 4);
    std::vector<double> diffs;
    for (std::size_t i = 1; i < seq.size(); ++i)
      diffs.push_back((seq[i] - seq[i - 1]).norm());
    // Geometric decay above the floating-point floor.
    for (std::size_t i = 1; i < diffs.size(); ++i) {
      if (diffs[i - 1] < 1e-13) break;
      CHECK(diffs[i] < 0.5 * diffs[i - 1]);
    }
    // |M^(i) e_n| decays while above the product's rounding floor
    // (sigma_max * eps noise swamps the true contracted length below it).
    Mat2 P{1, 0, 0, 1};
    PhasePoint walk = q;
    const Vec2 en = seq.back();
    double prev = 1.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      P = jacobian(p, walk) * P;
      const double pnorm = std::max((P * Vec2{1, 0}).norm(), (P * Vec2{0, 1}).norm());
      const double len = (P * en).norm();
      if (len < 1e-12 * pnorm) break;
      CHECK(len < prev);
      prev = len;
      walk = *apply(p, walk);
    }
    ++orbits_checked;
  }
}

TEST_CASE("DirectionField converges to the deep-product direction") {
  MapParams p;
  p.a = 2.0;
  p.b = 0.005;
  p.c = 3.0;
  p.d = 2.0;
  p.gamma = std::sqrt(2.0);
  const PhasePoint q(0.6015307480, 0.0205662519);  // near the m=0 sink
  const DirectionField field{p, 20, 1e-13};
  const Vec2 e = field.eval(q);
  const auto seq = direction_sequence(p, q, 16);
  CHECK((e - seq.back()).norm() < 1e-12);
}
