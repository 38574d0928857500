#pragma once

#include <vector>

#include "tangle/map.hpp"

namespace tangle {

/// A theta-interval at fixed z, lo < hi, inside [-pi/2, 3pi/2).
struct ThetaInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double theta) const { return theta > lo && theta < hi; }
};

/// All maximal intervals where F(., z) > 0, i.e. the vertical strips making
/// up V at height z. Multi-harmonic profiles can produce several.
/// Throws NoBoundaryError when F(., z) has no sign change.
std::vector<ThetaInterval> vertical_strips(const MapParams& p, double z);

/// The single strip (theta_l, theta_r) bounding V at height z. Roots located
/// to 1e-12. Throws NoBoundaryError (no sign change) or MultipleRootsError
/// (profile outside the single-strip regime).
ThetaInterval domain_boundaries(const MapParams& p, double z);

/// Unique root of d(theta1)/d(theta) = 0 inside the given strip.
/// Throws MultipleRootsError if the derivative is not single-crossing there.
double critical_theta(const MapParams& p, double z, const ThetaInterval& strip);
double critical_theta(const MapParams& p, double z);

/// Slope of the angular image: d(theta1)/d(theta) = 1 - d * F_theta / F.
double dtheta1_dtheta(const MapParams& p, double theta, double z);

/// The fold strip V_f at height z: interval around theta_c where
/// |d(theta1)/d(theta)| < 2, endpoints to 1e-10.
ThetaInterval fold_strip(const MapParams& p, double z, const ThetaInterval& strip);
ThetaInterval fold_strip(const MapParams& p, double z);

/// Bounding rectangle of V over z in [z_lo, z_hi] (union over strips).
struct Box {
  double theta_lo, theta_hi, z_lo, z_hi;
};
Box v_bounding_box(const MapParams& p, double z_lo = -1.0, double z_hi = 1.0,
                   int z_samples = 64);

}  // namespace tangle
