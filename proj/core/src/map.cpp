#include "tangle/map.hpp"

#include <cmath>

#include "tangle/errors.hpp"

namespace tangle {

double eval_F(const MapParams& p, double theta, double z) {
  return 1.0 + p.c * p.forcing.eval(theta) + p.k * z;
}

double eval_F(const MapParams& p, const PhasePoint& q) {
  return eval_F(p, q.theta, q.z);
}

double F_theta(const MapParams& p, double theta) {
  return p.c * p.forcing.deriv(theta);
}

std::optional<Vec2> apply_unwrapped(const MapParams& p, double theta, double z) {
  const double F = eval_F(p, theta, z);
  if (F <= p.escape_floor) return std::nullopt;
  const double theta1 = theta + p.a - p.d * std::log(F);
  const double z1 = p.b * std::pow(F, p.gamma);
  if (!std::isfinite(theta1) || !std::isfinite(z1))
    throw NumericDomainError("apply: non-finite image (pathological parameters)");
  return Vec2{theta1, z1};
}

std::optional<PhasePoint> apply(const MapParams& p, const PhasePoint& q) {
  auto im = apply_unwrapped(p, q.theta, q.z);
  if (!im) return std::nullopt;
  return PhasePoint(im->x, im->y);
}

Mat2 jacobian(const MapParams& p, const PhasePoint& q) {
  const double F = eval_F(p, q);
  if (F <= 0.0) throw NumericDomainError("jacobian: F <= 0");
  const double Ft = F_theta(p, q.theta);
  const double Fz = F_z(p);
  const double w = p.gamma * p.b * std::pow(F, p.gamma - 1.0);
  return {1.0 - p.d * Ft / F, -p.d * Fz / F,
          w * Ft, w * Fz};
}

double jacobian_det(const MapParams& p, const PhasePoint& q) {
  const double F = eval_F(p, q);
  if (F <= 0.0) throw NumericDomainError("jacobian_det: F <= 0");
  return p.gamma * p.b * std::pow(F, p.gamma - 1.0) * F_z(p);
}

}  // namespace tangle
