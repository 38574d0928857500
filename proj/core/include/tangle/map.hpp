#pragma once

#include <optional>

#include "tangle/forcing.hpp"
#include "tangle/geom.hpp"

namespace tangle {

/// Constants of the wrapped-horseshoe return map
///
///   theta1 = theta + a - d ln F(theta, z)
///   z1     = b F(theta, z)^gamma,      F = 1 + c Phi(theta) + k z.
///
/// d = omega/beta, gamma = alpha/beta when the map is derived from an ODE;
/// gamma > 1 encodes dissipativity of the saddle.
struct MapParams {
  double a = 0.0;      // angular shift, enters mod 2*pi
  double b = 0.005;    // vertical contraction amplitude, 0 < b << 1
  double c = 3.0;      // forcing amplitude, > 0
  double d = 2.0;      // logarithm gain omega/beta, > 0
  double gamma = 1.4142135623730951;  // power alpha/beta, > 1
  double k = 1.0;      // vertical coupling, 0 < k <= 1
  double escape_floor = 0.0;          // map undefined where F <= escape_floor
  ForcingProfile forcing = ForcingProfile::pure_sin();

  bool valid() const {
    return b > 0.0 && c > 0.0 && d > 0.0 && gamma > 1.0 && k > 0.0 && k <= 1.0 &&
           !forcing.empty();
  }
};

/// A point on the annulus S^1 x [-1,1]; theta normalized to [-pi/2, 3pi/2).
struct PhasePoint {
  double theta = 0.0;
  double z = 0.0;

  PhasePoint() = default;
  PhasePoint(double th, double zz) : theta(normalize_theta(th)), z(zz) {}
};

double eval_F(const MapParams& p, const PhasePoint& q);
double eval_F(const MapParams& p, double theta, double z);
double F_theta(const MapParams& p, double theta);   // dF/dtheta
inline double F_z(const MapParams& p) { return p.k; }

/// One application of the map; nullopt means the point lies in the escape
/// window U (F <= escape_floor). Non-finite output raises NumericDomainError.
std::optional<PhasePoint> apply(const MapParams& p, const PhasePoint& q);

/// Image with the angle left unwrapped (theta1 not reduced mod 2*pi).
std::optional<Vec2> apply_unwrapped(const MapParams& p, double theta, double z);

/// Analytic Jacobian of apply at q; requires F(q) > 0.
///
/// d(theta1)/dz carries the sign obtained by differentiating the map,
/// which also makes det = gamma b F^(gamma-1) F_z an exact identity.
Mat2 jacobian(const MapParams& p, const PhasePoint& q);

/// det(jacobian) evaluated from the closed form gamma*b*F^(gamma-1)*F_z.
double jacobian_det(const MapParams& p, const PhasePoint& q);

}  // namespace tangle
