#include "tangle/fixed_points.hpp"

#include <algorithm>
#include <cmath>

#include "tangle/detail/rootfind.hpp"
#include "tangle/domain.hpp"
#include "tangle/errors.hpp"

namespace tangle {

namespace {

constexpr double kResidualTol = 1e-12;   // Newton step-norm convergence
constexpr double kDedupRadius = 1e-8;
constexpr double kHyperbolicBand = 1e-9;
constexpr int kThetaScan = 4096;

std::pair<std::complex<double>, std::complex<double>> eigenvalues(const Mat2& J) {
  const double tr = J.trace(), det = J.det();
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
  std::complex<double> l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
  return {l1, l2};
}

StabilityKind classify(const std::complex<double>& l1, const std::complex<double>& l2) {
  const double m1 = std::abs(l1), m2 = std::abs(l2);
  if (std::abs(m1 - 1.0) < kHyperbolicBand || std::abs(m2 - 1.0) < kHyperbolicBand)
    return StabilityKind::kNonHyperbolic;
  if (m1 < 1.0) return StabilityKind::kSink;
  if (m2 > 1.0) return StabilityKind::kSource;
  return StabilityKind::kSaddle;
}

// The angular residual a - d ln F - 2 pi m cannot be driven below the
// conditioning floor d |F_theta| / F * eps(theta): one ulp of theta moves
// ln F by that much at small F (the deep saddle family). Acceptance
// tolerances grow with that floor; the point itself is still machine-exact.
double residual_floor(const MapParams& p, double theta, double z, double base) {
  const double F = eval_F(p, theta, z);
  const double cond = p.d * (std::abs(F_theta(p, theta)) + p.k) / F;
  constexpr double eps = 2.220446049250313e-16;
  return std::max(base, 64.0 * eps * cond * (std::abs(theta) + std::abs(z) + 1.0));
}

// Damped Newton on R(theta,z) = (a - d ln F - 2 pi m, b F^gamma - z).
// Returns false when it fails to converge.
bool polish_fixed_point(const MapParams& p, int m, double& theta, double& z) {
  auto residual = [&](double th, double zz, double& r1, double& r2) {
    const double F = eval_F(p, th, zz);
    if (F <= 0.0) return false;
    r1 = p.a - p.d * std::log(F) - kTwoPi * m;
    r2 = p.b * std::pow(F, p.gamma) - zz;
    return true;
  };
  auto accepted = [&](double th, double zz) {
    double r1, r2;
    if (!residual(th, zz, r1, r2)) return false;
    return std::abs(r1) <= residual_floor(p, th, zz, 1e-10) && std::abs(r2) <= 1e-10;
  };

  for (int it = 0; it < 60; ++it) {
    const double F = eval_F(p, theta, z);
    if (F <= 0.0) return false;
    double r1, r2;
    if (!residual(theta, z, r1, r2)) return false;
    const double rn = std::hypot(r1, r2);

    const double Ft = F_theta(p, theta), Fz = F_z(p);
    const double w = p.gamma * p.b * std::pow(F, p.gamma - 1.0);
    const Mat2 J{-p.d * Ft / F, -p.d * Fz / F, w * Ft, w * Fz - 1.0};
    const double det = J.det();
    if (det == 0.0 || !std::isfinite(det)) return false;
    const double dth = -(J.a22 * r1 - J.a12 * r2) / det;
    const double dz = -(-J.a21 * r1 + J.a11 * r2) / det;
    if (!std::isfinite(dth) || !std::isfinite(dz)) return false;

    double step = 1.0;
    bool moved = false;
    for (int h = 0; h < 40; ++h) {
      const double t2 = theta + step * dth, z2 = z + step * dz;
      double n1, n2;
      if (residual(t2, z2, n1, n2) && std::hypot(n1, n2) < rn) {
        theta = t2;
        z = z2;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) return accepted(theta, z);
    if (std::hypot(step * dth, step * dz) < kResidualTol) return accepted(theta, z);
  }
  return false;
}

}  // namespace

std::string stability_name(StabilityKind k) {
  switch (k) {
    case StabilityKind::kSink: return "sink";
    case StabilityKind::kSaddle: return "saddle";
    case StabilityKind::kSource: return "source";
    default: return "nonhyperbolic";
  }
}

std::vector<FixedPointRecord> find_fixed_points(const MapParams& p, int m_lo, int m_hi) {
  std::vector<FixedPointRecord> out;
  for (int m = m_lo; m <= m_hi; ++m) {
    const double Fm = std::exp((p.a - kTwoPi * m) / p.d);
    if (!std::isfinite(Fm) || Fm <= 0.0) continue;
    const double zm = p.b * std::pow(Fm, p.gamma);
    const double target = Fm - 1.0 - p.k * zm;  // c Phi(theta) = target
    if (std::abs(target) > p.c * p.forcing.max_abs_bound() + 1.0) continue;

    auto g = [&](double th) { return p.c * p.forcing.eval(th) - target; };
    double prev_th = -kHalfPi, prev = g(prev_th);
    for (int i = 1; i <= kThetaScan; ++i) {
      const double th = -kHalfPi + kTwoPi * i / kThetaScan;
      const double v = g(th);
      if ((prev <= 0.0) != (v <= 0.0)) {
        double theta = detail::find_root(g, prev_th, th, 1e-12);
        double z = zm;
        if (polish_fixed_point(p, m, theta, z)) {
          const PhasePoint q(theta, z);
          bool dup = false;
          for (const auto& r : out)
            if (std::abs(wrap_to_pi(q.theta - r.point.theta)) < kDedupRadius &&
                std::abs(q.z - r.point.z) < kDedupRadius)
              dup = true;
          if (!dup) {
            try {
              FixedPointRecord rec = classify_fixed_point(p, q);
              rec.winding_m = m;
              out.push_back(rec);
            } catch (const NotFixedError&) {
              // polish landed on a numerically degenerate root; skip it
            }
          }
        }
      }
      prev_th = th;
      prev = v;
    }
  }
  return out;
}

FixedPointRecord classify_fixed_point(const MapParams& p, const PhasePoint& q) {
  auto im = apply(p, q);
  if (!im) throw NotFixedError("classify_fixed_point: point lies in U");
  const double res =
      std::hypot(wrap_to_pi(im->theta - q.theta), im->z - q.z);
  if (res > residual_floor(p, q.theta, q.z, 1e-8))
    throw NotFixedError("classify_fixed_point: residual " + std::to_string(res));

  FixedPointRecord rec;
  rec.point = q;
  rec.F_value = eval_F(p, q);
  // Recover the winding: a - d ln F = 2 pi m at a fixed point.
  rec.winding_m = int(std::lround((p.a - p.d * std::log(rec.F_value)) / kTwoPi));
  const Mat2 J = jacobian(p, q);
  std::tie(rec.lambda1, rec.lambda2) = eigenvalues(J);
  rec.kind = classify(rec.lambda1, rec.lambda2);
  return rec;
}

int first_saddle_m_weak(const MapParams& p) {
  return int(std::ceil(3.0 * p.d));
}

int first_saddle_m_strict(const MapParams& p) {
  return int(std::floor(3.0 * p.d)) + 1;
}

std::vector<FixedPointRecord> find_saddle_family(const MapParams& p, int max_members) {
  std::vector<FixedPointRecord> out;
  const int m0 = first_saddle_m_weak(p);
  for (int m = m0; m < m0 + max_members; ++m) {
    const double Fm = std::exp((p.a - kTwoPi * m) / p.d);
    if (Fm < 1e-300 || p.b * std::pow(Fm, p.gamma) < 1e-308) break;
    auto recs = find_fixed_points(p, m, m);
    for (auto& r : recs)
      if (r.is_saddle()) out.push_back(r);
  }
  return out;
}

std::pair<std::complex<double>, std::complex<double>> orbit_multipliers(
    const MapParams& p, const PhasePoint& q, int period) {
  Mat2 J{1.0, 0.0, 0.0, 1.0};
  PhasePoint cur = q;
  for (int j = 0; j < period; ++j) {
    J = jacobian(p, cur) * J;
    auto im = apply(p, cur);
    if (!im) throw OrbitEscapedError("orbit_multipliers: orbit left V");
    cur = *im;
  }
  return eigenvalues(J);
}

namespace {

// Newton on F^period - id with wrapped angular residual.
bool polish_periodic(const MapParams& p, int period, double& theta, double& z) {
  for (int it = 0; it < 60; ++it) {
    PhasePoint cur(theta, z);
    Mat2 J{1.0, 0.0, 0.0, 1.0};
    double un_theta = cur.theta;  // unwrapped image angle
    double un_z = cur.z;
    bool ok = true;
    for (int j = 0; j < period; ++j) {
      const PhasePoint qq(un_theta, un_z);
      if (eval_F(p, qq) <= p.escape_floor) {
        ok = false;
        break;
      }
      J = jacobian(p, qq) * J;
      auto im = apply_unwrapped(p, qq.theta, qq.z);
      if (!im) {
        ok = false;
        break;
      }
      un_theta = im->x;
      un_z = im->y;
    }
    if (!ok) return false;

    const double r1 = wrap_to_pi(un_theta - theta);
    const double r2 = un_z - z;
    const double rn = std::hypot(r1, r2);
    const Mat2 A{J.a11 - 1.0, J.a12, J.a21, J.a22 - 1.0};
    const double det = A.det();
    if (det == 0.0) return false;
    const double dth = -(A.a22 * r1 - A.a12 * r2) / det;
    const double dz = -(-A.a21 * r1 + A.a11 * r2) / det;
    if (!std::isfinite(dth) || !std::isfinite(dz)) return false;

    theta = normalize_theta(theta + dth);
    z += dz;
    if (std::hypot(dth, dz) < kResidualTol && rn < 1e-10) return true;
  }
  return false;
}

}  // namespace

std::vector<FixedPointRecord> find_periodic_orbits(const MapParams& p, int period,
                                                   int seeds) {
  if (period < 1) throw PreconditionError("find_periodic_orbits: period >= 1");
  if (period == 1) {
    // Same equation as the winding solver. m range: F_m within the solvable
    // window above, down to the strip-thickness floor b F^gamma >= 1e-14.
    const double F_max = 1.0 + p.c * p.forcing.max_abs_bound() + p.k;
    const int m_lo = int(std::floor((p.a - p.d * std::log(F_max)) / kTwoPi)) - 1;
    const double F_floor = std::pow(1e-14 / p.b, 1.0 / p.gamma);
    const int m_hi = int(std::ceil((p.a - p.d * std::log(F_floor)) / kTwoPi)) + 1;
    auto recs = find_fixed_points(p, m_lo, std::max(m_hi, m_lo));
    for (auto& r : recs) r.period = 1;
    return recs;
  }

  const Box box = v_bounding_box(p);
  const int per_axis = std::max(2, int(std::lround(std::sqrt(double(seeds)))));
  std::vector<FixedPointRecord> out;

  auto record_orbit = [&](double theta, double z) {
    // Canonical representative: lexicographically smallest orbit point.
    PhasePoint q(theta, z);
    PhasePoint best = q;
    PhasePoint cur = q;
    for (int j = 1; j < period; ++j) {
      auto im = apply(p, cur);
      if (!im) return;
      cur = *im;
      if (cur.theta < best.theta - 1e-13 ||
          (std::abs(cur.theta - best.theta) <= 1e-13 && cur.z < best.z))
        best = cur;
    }
    for (const auto& r : out)
      if (std::abs(wrap_to_pi(best.theta - r.point.theta)) < kDedupRadius &&
          std::abs(best.z - r.point.z) < kDedupRadius)
        return;

    FixedPointRecord rec;
    rec.point = best;
    rec.period = period;
    rec.F_value = eval_F(p, best);
    std::tie(rec.lambda1, rec.lambda2) = orbit_multipliers(p, best, period);
    rec.kind = classify(rec.lambda1, rec.lambda2);
    out.push_back(rec);
  };

  for (int iz = 0; iz < per_axis; ++iz) {
    for (int it = 0; it < per_axis; ++it) {
      double theta = box.theta_lo + (box.theta_hi - box.theta_lo) * (it + 0.5) / per_axis;
      double z = box.z_lo + (box.z_hi - box.z_lo) * (iz + 0.5) / per_axis;
      if (eval_F(p, theta, z) <= 0.0) continue;
      if (polish_periodic(p, period, theta, z)) record_orbit(theta, z);
    }
  }
  return out;
}

}  // namespace tangle
