#include "tangle/contraction.hpp"

#include <cmath>

#include "tangle/errors.hpp"

namespace tangle {

namespace {

constexpr double kDegeneracyFloor = 1e-28;

Vec2 sign_normalize(Vec2 e) {
  if (e.x < 0.0 || (e.x == 0.0 && e.y < 0.0)) e = -e;
  if (std::abs(e.x) < 1e-15 && e.y < 0.0) e = -e;
  return e;
}

struct Accumulator {
  // Column images of the basis u=(1,0), v=(0,1), rescaled so the larger
  // norm stays 1; only ratios enter the singular-frame formulas, so the
  // common rescale is exact. log_scale recovers absolute singular values.
  Vec2 Au{1.0, 0.0};
  Vec2 Av{0.0, 1.0};
  double log_scale = 0.0;

  void fold(const Mat2& M) {
    Au = M * Au;
    Av = M * Av;
    const double s = std::max(Au.norm(), Av.norm());
    if (s > 0.0) {
      Au = Au / s;
      Av = Av / s;
      log_scale += std::log(s);
    }
  }

  // Computes the frame; returns false when degenerate.
  bool frame(SingularFrame& out) const {
    const double B = Au.norm2() + Av.norm2();
    const double C = wedge(Au, Av) * wedge(Au, Av);
    const double disc = B * B - 4.0 * C;
    if (disc < kDegeneracyFloor) return false;
    const double sq = std::sqrt(disc);
    const double lam_max = 0.5 * (B + sq);
    // lam via C / lam_max, not (B - sq)/2: the direct form cancels badly
    // when the product is strongly non-conformal.
    const double lam = C / lam_max;
    const double alpha = Av.norm2() - lam;
    const double beta = -dot(Av, Au);
    const double Z = std::hypot(alpha, beta);
    Vec2 e = (Z < 1e-300) ? Vec2{0.0, 1.0} : Vec2{alpha / Z, beta / Z};
    out.e = sign_normalize(e);
    out.log_sigma_min = 0.5 * std::log(lam) + log_scale;
    out.log_sigma_max = 0.5 * std::log(lam_max) + log_scale;
    return true;
  }
};

}  // namespace

double SingularFrame::sigma_min() const { return std::exp(log_sigma_min); }
double SingularFrame::sigma_max() const { return std::exp(log_sigma_max); }

SingularFrame most_contracted_direction(std::span<const Mat2> factors) {
  Accumulator acc;
  for (const Mat2& M : factors) acc.fold(M);
  SingularFrame f;
  if (!acc.frame(f))
    throw DegenerateConformalError(
        "most_contracted_direction: product is conformal to working precision");
  f.factors = int(factors.size());
  return f;
}

std::vector<Vec2> direction_sequence(const MapParams& p, const PhasePoint& q, int n) {
  std::vector<Vec2> seq;
  Accumulator acc;
  PhasePoint cur = q;
  for (int i = 0; i < n; ++i) {
    if (eval_F(p, cur) <= p.escape_floor) break;
    acc.fold(jacobian(p, cur));
    SingularFrame f;
    if (!acc.frame(f)) break;
    seq.push_back(f.e);
    auto im = apply(p, cur);
    if (!im) break;
    cur = *im;
  }
  return seq;
}

Vec2 DirectionField::eval(const PhasePoint& q) const {
  Accumulator acc;
  PhasePoint cur = q;
  Vec2 prev{0.0, 0.0};
  bool have_prev = false;
  for (int i = 0; i < order_n; ++i) {
    if (eval_F(params, cur) <= params.escape_floor) break;
    acc.fold(jacobian(params, cur));
    SingularFrame f;
    if (!acc.frame(f)) break;
    if (have_prev && (f.e - prev).norm() < convergence_tol) return f.e;
    prev = f.e;
    have_prev = true;
    auto im = apply(params, cur);
    if (!im) break;
    cur = *im;
  }
  if (!have_prev)
    throw DegenerateConformalError("DirectionField: e_1 undefined at this point");
  return prev;
}

}  // namespace tangle
