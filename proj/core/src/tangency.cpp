#include "tangle/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tangle/contraction.hpp"
#include "tangle/domain.hpp"
#include "tangle/errors.hpp"
#include "tangle/manifolds.hpp"

namespace tangle {

FixedPointRecord tangency_saddle(const MapParams& p, int m) {
  auto recs = find_fixed_points(p, m, m);
  for (const auto& r : recs)
    if (r.is_saddle() && F_theta(p, r.point.theta) > 0.0) return r;
  throw AnalysisError("tangency_saddle: no entry-side saddle at m=" + std::to_string(m));
}

namespace {

// Composition pipeline for one parameter value. Stage-0 is the seed segment
// along the unstable eigenvector; the first image already traverses many
// fold windows because the deep saddles carry enormous expansion, so the
// crossing piece is located by monotone root-finding on the unwrapped
// stage-1 angle and the fold tip by golden-section on the stage-2 angle.
class Pipeline {
 public:
  Pipeline(const MapParams& p, const FixedPointRecord& saddle, const TangencyOptions& opts)
      : p_(p), saddle_(saddle), opts_(opts), vu_(unstable_eigenvector(p, saddle)) {
    const double dFdt = F_theta(p_, saddle_.point.theta) * vu_.x + p_.k * vu_.y;
    if (dFdt == 0.0) throw AnalysisError("tangency: degenerate seed direction");
    // Walk the seed parameter away from the F = 0 end. The bracket stops at
    // the F ~ 1e-13 level: below that, evaluating 1 + c Phi + k z is pure
    // cancellation noise, and the windows we query never need smaller F.
    const double Fm = eval_F(p_, saddle_.point);
    t_escape_ = -Fm / dFdt;
    t_far_ = (t_escape_ < 0.0) ? opts_.seed_radius : -opts_.seed_radius;
    t_near_ = t_escape_ + 1e-13 / dFdt;  // F(seed(t_near)) ~ 1e-13
  }

  Vec2 seed(double t) const {
    return {saddle_.point.theta + t * vu_.x, saddle_.point.z + t * vu_.y};
  }

  // Unwrapped stage-1 image angle and height.
  Vec2 stage1(double t) const {
    const Vec2 s = seed(t);
    auto im = apply_unwrapped(p_, s.x, s.y);
    if (!im) throw FoldNotFoundError("tangency: seed point escaped at stage 1");
    return *im;
  }

  Vec2 stage2(double t) const {
    const Vec2 q1 = stage1(t);
    auto im = apply_unwrapped(p_, q1.x, q1.y);
    if (!im) throw FoldNotFoundError("tangency: crossing piece escaped at stage 2");
    return *im;
  }

  // Lowest fold window the stage-1 curve fully traverses.
  int default_winding() const {
    const double th_min = stage1(t_far_).x;
    const double fl = fold_strip(p_, 0.0).lo;
    return int(std::ceil((th_min - fl) / kTwoPi)) + 1;
  }

  // t-interval whose stage-1 image crosses fold window j (z-consistent:
  // the fold strip is evaluated at the piece's own height).
  std::pair<double, double> crossing_piece(int j) const {
    auto edge = [&](bool upper) {
      auto g = [&](double t) {
        const Vec2 q1 = stage1(t);
        const ThetaInterval f = fold_strip(p_, std::min(1.0, q1.y));
        const double target = (upper ? f.hi : f.lo) + kTwoPi * j;
        return q1.x - target;
      };
      double lo = t_near_, hi = t_far_;
      double glo = g(lo), ghi = g(hi);
      if ((glo > 0.0) == (ghi > 0.0))
        throw FoldNotFoundError("tangency: fold window " + std::to_string(j) +
                                " outside the stage-1 range");
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm > 0.0) == (glo > 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
        if (std::abs(hi - lo) < 1e-18 * std::max(1.0, std::abs(lo))) break;
      }
      return 0.5 * (lo + hi);
    };
    double ta = edge(false), tb = edge(true);
    if (ta > tb) std::swap(ta, tb);
    return {ta, tb};
  }

  // Golden-section minimum of the stage-2 angle over the crossing piece,
  // polished by one parabolic step. Returns (t_tip, tip point).
  std::pair<double, Vec2> fold_tip(int j) const {
    auto [ta, tb] = crossing_piece(j);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double A = ta, B = tb;
    double x1 = B - gr * (B - A), x2 = A + gr * (B - A);
    double f1 = stage2(x1).x, f2 = stage2(x2).x;
    for (int it = 0; it < 200 && (B - A) > 1e-16 * std::max(1.0, std::abs(A)); ++it) {
      if (f1 < f2) {
        B = x2;
        x2 = x1;
        f2 = f1;
        x1 = B - gr * (B - A);
        f1 = stage2(x1).x;
      } else {
        A = x1;
        x1 = x2;
        f1 = f2;
        x2 = A + gr * (B - A);
        f2 = stage2(x2).x;
      }
    }
    double t = 0.5 * (A + B);
    // Parabolic polish on three samples.
    const double h = std::max(1e-12 * std::abs(tb - ta), 1e-18);
    const double fm = stage2(t - h).x, f0 = stage2(t).x, fp = stage2(t + h).x;
    const double denom = fm - 2.0 * f0 + fp;
    if (denom > 0.0) {
      const double dt = 0.5 * h * (fm - fp) / denom;
      if (std::abs(dt) < std::abs(tb - ta)) t += dt;
    }
    const double span = tb - ta;
    if (t - ta < 1e-6 * span || tb - t < 1e-6 * span)
      throw FoldNotFoundError("tangency: no interior theta1 extremum on the piece");
    return {t, stage2(t)};
  }

  // Stable curve of the saddle as theta(z), integrated on demand; adaptive
  // RK4 with step doubling at opts_.ws_tol.
  double ws_at(double z_target, double* max_slope = nullptr) {
    DirectionField field{p_, opts_.order_n, 1e-13};
    auto slope = [&](double th, double z) {
      const Vec2 e = field.eval(PhasePoint(th, z));
      if (std::abs(e.y) < 0.05)
        throw AnalysisError("tangency: stable direction too horizontal for z-parameterization");
      return e.x / e.y;  // dtheta/dz, invariant under e -> -e
    };
    double z = saddle_.point.z, th = saddle_.point.theta;
    const double dir = (z_target >= z) ? 1.0 : -1.0;
    double h = dir * std::max(1e-6, std::abs(z_target - z) / 64.0);
    double worst = 0.0;
    auto rk4 = [&](double th0, double z0, double hh) {
      const double k1 = slope(th0, z0);
      const double k2 = slope(th0 + 0.5 * hh * k1, z0 + 0.5 * hh);
      const double k3 = slope(th0 + 0.5 * hh * k2, z0 + 0.5 * hh);
      const double k4 = slope(th0 + hh * k3, z0 + hh);
      worst = std::max({worst, std::abs(k1), std::abs(k4)});
      return th0 + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    while ((z_target - z) * dir > 0.0) {
      if ((z + h - z_target) * dir > 0.0) h = z_target - z;
      // Near a deep saddle the curve hugs a sliver of width F_m in F; trial
      // points can fall out of V, which surfaces as an AnalysisError and is
      // treated like a failed step.
      double full, half;
      bool ok = true;
      try {
        full = rk4(th, z, h);
        half = rk4(rk4(th, z, 0.5 * h), z + 0.5 * h, 0.5 * h);
      } catch (const AnalysisError&) {
        ok = false;
        full = half = 0.0;
      }
      if ((!ok || std::abs(full - half) > opts_.ws_tol) &&
          std::abs(h) > 1e-10 * std::max(1.0, std::abs(z_target))) {
        h *= 0.5;
        continue;
      }
      if (!ok)
        throw AnalysisError("tangency: stable-curve step failed at minimal step size");
      th = half;
      z += h;
      if (std::abs(full - half) < 0.1 * opts_.ws_tol) h *= 2.0;
    }
    if (max_slope) *max_slope = worst;
    return th;
  }

  double t_near() const { return t_near_; }
  double t_far() const { return t_far_; }

 private:
  MapParams p_;
  FixedPointRecord saddle_;
  TangencyOptions opts_;
  Vec2 vu_;
  double t_escape_ = 0.0, t_near_ = 0.0, t_far_ = 0.0;
};

struct GapResult {
  double gap;
  Vec2 tip;
  double t_tip;
  int winding;
};

GapResult eval_gap(const MapParams& p, const FixedPointRecord& saddle,
                   const TangencyOptions& opts, double* stable_slope = nullptr) {
  Pipeline pipe(p, saddle, opts);
  const int j = opts.winding ? *opts.winding : pipe.default_winding();
  auto [t_tip, tip] = pipe.fold_tip(j);
  const double ws = pipe.ws_at(tip.y, stable_slope);
  return {wrap_to_pi(tip.x - ws), tip, t_tip, j};
}

}  // namespace

double tangency_gap(const MapParams& p, const FixedPointRecord& saddle,
                    const TangencyOptions& opts) {
  return eval_gap(p, saddle, opts).gap;
}

namespace {

// Sign changes of the local gap function along the fold image near the tip;
// 0 before a quadratic tangency, 2 after (or vice versa).
int local_intersections(const MapParams& p, int saddle_m, const TangencyOptions& opts,
                        double t_tip_hint, int j) {
  const FixedPointRecord saddle = tangency_saddle(p, saddle_m);
  Pipeline pipe(p, saddle, opts);
  auto [ta, tb] = pipe.crossing_piece(j);
  const double span = tb - ta;
  const double half = 0.25 * span;
  const double lo = std::max(ta + 1e-3 * span, t_tip_hint - half);
  const double hi = std::min(tb - 1e-3 * span, t_tip_hint + half);
  const int n = 400;
  int crossings = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / n;
    const Vec2 q2 = pipe.stage2(t);
    const double h = wrap_to_pi(q2.x - pipe.ws_at(q2.y));
    if (have_prev && (prev < 0.0) != (h < 0.0)) ++crossings;
    prev = h;
    have_prev = true;
  }
  return crossings;
}

}  // namespace

TangencyReport find_tangency(const MapParams& base, int saddle_m, double a_lo,
                             double a_hi, const TangencyOptions& opts_in) {
  TangencyOptions opts = opts_in;

  auto gap_at = [&](double a) {
    MapParams p = base;
    p.a = a;
    return eval_gap(p, tangency_saddle(p, saddle_m), opts);
  };

  // Pin the fold window at the midpoint so the gap stays continuous in a.
  if (!opts.winding) {
    MapParams pm = base;
    pm.a = 0.5 * (a_lo + a_hi);
    Pipeline pipe(pm, tangency_saddle(pm, saddle_m), opts);
    opts.winding = pipe.default_winding();
  }

  GapResult glo = gap_at(a_lo), ghi = gap_at(a_hi);
  if ((glo.gap > 0.0) == (ghi.gap > 0.0))
    throw NoBracketError("find_tangency: gap does not change sign on [a_lo, a_hi]");

  // Regula falsi safeguarded by the bracket; the gap is close to linear in
  // a, so this converges in a handful of steps.
  double lo = a_lo, hi = a_hi, flo = glo.gap, fhi = ghi.gap;
  double a_star = 0.5 * (lo + hi);
  GapResult gstar = gap_at(a_star);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(gstar.gap) < 5e-11) break;
    if ((gstar.gap > 0.0) == (fhi > 0.0)) {
      hi = a_star;
      fhi = gstar.gap;
    } else {
      lo = a_star;
      flo = gstar.gap;
    }
    double prop = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(prop > lo && prop < hi)) prop = 0.5 * (lo + hi);
    a_star = prop;
    gstar = gap_at(a_star);
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(lo))) break;
  }

  TangencyReport rep;
  rep.a_star = a_star;
  rep.gap_residual = std::abs(gstar.gap);
  rep.tangency_point = PhasePoint(gstar.tip.x, gstar.tip.y);
  rep.saddle_m = saddle_m;
  rep.winding = gstar.winding;

  // Quadratic coefficient |d^2 theta1/d z1^2| at the tip via central
  // differences along the fold image.
  {
    MapParams p = base;
    p.a = a_star;
    const FixedPointRecord saddle = tangency_saddle(p, saddle_m);
    Pipeline pipe(p, saddle, opts);
    auto [ta, tb] = pipe.crossing_piece(*opts.winding);
    const double h = 1e-4 * (tb - ta);
    const Vec2 qm = pipe.stage2(gstar.t_tip - h);
    const Vec2 q0 = pipe.stage2(gstar.t_tip);
    const Vec2 qp = pipe.stage2(gstar.t_tip + h);
    const double thdd = (qm.x - 2.0 * q0.x + qp.x) / (h * h);
    const double thd = (qp.x - qm.x) / (2.0 * h);
    const double zd = (qp.y - qm.y) / (2.0 * h);
    const double zdd = (qm.y - 2.0 * q0.y + qp.y) / (h * h);
    rep.quadratic_coeff = std::abs((thdd * zd - thd * zdd) / (zd * zd * zd));

    // Unstable slope bound over the crossing piece (the pre-fold curve).
    double worst = 0.0;
    for (int i = 1; i < 32; ++i) {
      const double t = ta + (tb - ta) * i / 32.0;
      const double hh = 1e-5 * (tb - ta);
      const Vec2 a1 = pipe.stage1(t - hh), b1 = pipe.stage1(t + hh);
      worst = std::max(worst, std::abs((b1.y - a1.y) / (b1.x - a1.x)));
    }
    rep.unstable_slope_bound = worst;

    double ws_slope = 0.0;
    (void)pipe.ws_at(gstar.tip.y, &ws_slope);
    rep.stable_slope_bound = ws_slope;
  }

  // Crossing speed: Richardson-extrapolated central difference of the gap.
  {
    const double d1 = 1e-6;
    const double D1 = (gap_at(a_star + d1).gap - gap_at(a_star - d1).gap) / (2.0 * d1);
    const double D2 =
        (gap_at(a_star + 0.5 * d1).gap - gap_at(a_star - 0.5 * d1).gap) / d1;
    rep.crossing_speed = (4.0 * D2 - D1) / 3.0;
  }

  // Local quadratic unfolding: intersection counts on both sides of a_star.
  {
    MapParams pb = base;
    pb.a = a_star - rep.unfold_delta_a;
    MapParams pa = base;
    pa.a = a_star + rep.unfold_delta_a;
    rep.intersections_below =
        local_intersections(pb, saddle_m, opts, gstar.t_tip, gstar.winding);
    rep.intersections_above =
        local_intersections(pa, saddle_m, opts, gstar.t_tip, gstar.winding);
  }
  return rep;
}

}  // namespace tangle
