#include "tangle/manifolds.hpp"

#include <algorithm>
#include <cmath>

#include "tangle/domain.hpp"
#include "tangle/errors.hpp"

namespace tangle {

double CurveSample::theta_at_z(double z) const {
  if (points.size() < 2) throw AnalysisError("CurveSample: too few points");
  const bool inc = points.back().z > points.front().z;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double z0 = points[i - 1].z, z1 = points[i].z;
    if ((inc && z >= z0 && z <= z1) || (!inc && z <= z0 && z >= z1)) {
      const double t = (z1 == z0) ? 0.0 : (z - z0) / (z1 - z0);
      return points[i - 1].theta + t * (points[i].theta - points[i - 1].theta);
    }
  }
  throw AnalysisError("CurveSample: z outside sampled range");
}

double CurveSample::z_min() const {
  double m = points.front().z;
  for (const auto& q : points) m = std::min(m, q.z);
  return m;
}

double CurveSample::z_max() const {
  double m = points.front().z;
  for (const auto& q : points) m = std::max(m, q.z);
  return m;
}

namespace {

bool in_fold_strip(const MapParams& p, const PhasePoint& q) {
  return std::abs(dtheta1_dtheta(p, q.theta, q.z)) < 2.0;
}

bool in_domain(const MapParams& p, const PhasePoint& q) {
  return eval_F(p, q) > p.escape_floor && std::abs(q.z) <= 1.0 &&
         !in_fold_strip(p, q);
}

// One RK4 step of dq/ds = +-e_n(q), with the field sign aligned to `dir`.
bool rk4_step(const DirectionField& field, const Vec2& dir, const PhasePoint& q,
              double h, PhasePoint& out) {
  auto f = [&](const PhasePoint& x) -> Vec2 {
    Vec2 e = field.eval(x);
    if (dot(e, dir) < 0.0) e = -e;
    return e;
  };
  try {
    const Vec2 k1 = f(q);
    const Vec2 k2 = f(PhasePoint(q.theta + 0.5 * h * k1.x, q.z + 0.5 * h * k1.y));
    const Vec2 k3 = f(PhasePoint(q.theta + 0.5 * h * k2.x, q.z + 0.5 * h * k2.y));
    const Vec2 k4 = f(PhasePoint(q.theta + h * k3.x, q.z + h * k3.y));
    out = PhasePoint(q.theta + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                     q.z + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y));
    return true;
  } catch (const AnalysisError&) {
    return false;
  }
}

// Integrates one branch; appends points (excluding the start) to out.
void integrate_branch(const MapParams& p, const DirectionField& field,
                      const PhasePoint& start, Vec2 dir, double half_length,
                      double max_step, std::vector<PhasePoint>& pts,
                      std::vector<double>& arcs, double sign) {
  constexpr double kStepTol = 1e-10;
  PhasePoint q = start;
  double s = 0.0;
  double h = max_step;
  while (s < half_length) {
    h = std::min(h, half_length - s);
    PhasePoint full, h1, h2;
    if (!rk4_step(field, dir, q, h, full)) break;
    if (!rk4_step(field, dir, q, 0.5 * h, h1)) break;
    if (!rk4_step(field, dir, h1, 0.5 * h, h2)) break;
    const double err = std::hypot(full.theta - h2.theta, full.z - h2.z);
    if (err > kStepTol && h > 1e-7) {
      h *= 0.5;
      continue;
    }
    if (!in_domain(p, h2)) break;
    dir = Vec2{h2.theta - q.theta, h2.z - q.z};
    const double dn = dir.norm();
    if (dn == 0.0) break;
    dir = dir / dn;
    q = h2;
    s += h;
    pts.push_back(q);
    arcs.push_back(sign * s);
    if (err < 0.25 * kStepTol && h < max_step) h = std::min(max_step, 2.0 * h);
  }
}

}  // namespace

CurveSample stable_curve(const MapParams& p, const FixedPointRecord& saddle,
                         int order_n, double half_length, double max_step) {
  if (!saddle.is_saddle())
    throw PreconditionError("stable_curve: record is not a saddle");

  DirectionField field{p, order_n, 1e-13};
  const Vec2 e0 = field.eval(saddle.point);

  std::vector<PhasePoint> down_pts;
  std::vector<double> down_arcs;
  integrate_branch(p, field, saddle.point, -e0, half_length, max_step, down_pts,
                   down_arcs, -1.0);

  CurveSample c;
  c.kind = CurveSample::Kind::kStable;
  c.points.assign(down_pts.rbegin(), down_pts.rend());
  c.arclength.assign(down_arcs.rbegin(), down_arcs.rend());
  c.points.push_back(saddle.point);
  c.arclength.push_back(0.0);
  integrate_branch(p, field, saddle.point, e0, half_length, max_step, c.points,
                   c.arclength, 1.0);
  return c;
}

Vec2 unstable_eigenvector(const MapParams& p, const FixedPointRecord& saddle) {
  const Mat2 J = jacobian(p, saddle.point);
  const double lu = saddle.lambda1.real();  // saddle: real eigenvalues
  if (std::abs(saddle.lambda1) <= 1.0)
    throw PreconditionError("unstable_eigenvector: |lambda_u| <= 1");
  Vec2 v;
  if (std::abs(J.a12) + std::abs(lu - J.a11) >= std::abs(lu - J.a22) + std::abs(J.a21))
    v = Vec2{J.a12, lu - J.a11};
  else
    v = Vec2{lu - J.a22, J.a21};
  const double n = v.norm();
  if (n == 0.0) v = Vec2{1.0, 0.0};
  else v = v / n;
  if (v.x < 0.0) v = -v;
  return v;
}

CurveSample unstable_curve(const MapParams& p, const FixedPointRecord& saddle,
                           int iterations, double seed_radius, double max_gap,
                           std::size_t max_points) {
  const Vec2 vu = unstable_eigenvector(p, saddle);

  struct Node {
    double t;
    PhasePoint pos;
    bool alive;
  };

  auto advance = [&](double t, int stages) -> std::pair<PhasePoint, bool> {
    PhasePoint q(saddle.point.theta + t * vu.x, saddle.point.z + t * vu.y);
    for (int j = 0; j < stages; ++j) {
      auto im = apply(p, q);
      if (!im) return {q, false};
      q = *im;
    }
    return {q, true};
  };

  std::vector<Node> nodes;
  const int init = 64;
  for (int i = 0; i <= init; ++i) {
    const double t = -seed_radius + 2.0 * seed_radius * i / init;
    nodes.push_back({t, PhasePoint(saddle.point.theta + t * vu.x,
                                   saddle.point.z + t * vu.y),
                     true});
  }

  for (int stage = 1; stage <= iterations; ++stage) {
    for (auto& nd : nodes) {
      if (!nd.alive) continue;
      auto im = apply(p, nd.pos);
      if (!im) nd.alive = false;
      else nd.pos = *im;
    }
    // Adaptive insertion between adjacent alive nodes with a big image gap.
    bool inserted = true;
    while (inserted && nodes.size() < max_points) {
      inserted = false;
      std::vector<Node> next;
      next.reserve(nodes.size() * 2);
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        next.push_back(nodes[i]);
        const Node& a = nodes[i];
        const Node& b = nodes[i + 1];
        const double dt = b.t - a.t;
        const bool gap_big =
            a.alive && b.alive &&
            std::hypot(wrap_to_pi(b.pos.theta - a.pos.theta), b.pos.z - a.pos.z) > max_gap;
        const bool edge = (a.alive != b.alive) && dt > 1e-15 * seed_radius;
        if ((gap_big || edge) && dt > 1e-16 * seed_radius) {
          const double tm = 0.5 * (a.t + b.t);
          auto [pos, alive] = advance(tm, stage);
          next.push_back({tm, pos, alive});
          inserted = true;
        }
      }
      next.push_back(nodes.back());
      nodes.swap(next);
    }
  }

  // Connected alive run containing t = 0 (the saddle is fixed, so alive).
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i].t) < std::abs(nodes[i0].t)) i0 = i;
  std::size_t lo = i0, hi = i0;
  while (lo > 0 && nodes[lo - 1].alive) --lo;
  while (hi + 1 < nodes.size() && nodes[hi + 1].alive) ++hi;

  CurveSample c;
  c.kind = CurveSample::Kind::kUnstable;
  double s = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (!nodes[i].alive) continue;
    if (!c.points.empty())
      s += std::hypot(wrap_to_pi(nodes[i].pos.theta - c.points.back().theta),
                      nodes[i].pos.z - c.points.back().z);
    c.points.push_back(nodes[i].pos);
    c.arclength.push_back(s);
  }
  return c;
}

}  // namespace tangle
