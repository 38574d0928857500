#pragma once

#include <vector>

#include "tangle/contraction.hpp"
#include "tangle/fixed_points.hpp"
#include "tangle/map.hpp"

namespace tangle {

/// An ordered polyline along a stable or unstable curve, with signed
/// arclength from the anchor point (the saddle).
struct CurveSample {
  enum class Kind { kStable, kUnstable };

  std::vector<PhasePoint> points;
  std::vector<double> arclength;
  Kind kind = Kind::kStable;

  /// Linear interpolation of theta at the given z; requires z monotone
  /// along the stored polyline (true for stable curves).
  double theta_at_z(double z) const;
  double z_min() const;
  double z_max() const;
};

/// Integral curve gamma_n of the most-contracted-direction field e_n through
/// the saddle, adaptive RK4 in arclength. Integration stops per branch at
/// half_length, domain exit (F <= 0, |z| > 1, or entry into the fold strip),
/// or a degenerate field.
CurveSample stable_curve(const MapParams& p, const FixedPointRecord& saddle,
                         int order_n = 20, double half_length = 0.5,
                         double max_step = 1e-3);

/// Unstable curve grown by forward iteration of a seed segment of radius
/// seed_radius along the unstable eigenvector, with adaptive point insertion
/// (max image spacing max_gap) and trimming at escape. Returns the connected
/// surviving piece through the saddle.
CurveSample unstable_curve(const MapParams& p, const FixedPointRecord& saddle,
                           int iterations, double seed_radius,
                           double max_gap = 1e-3, std::size_t max_points = 200000);

/// Unit unstable eigenvector of the saddle's Jacobian (sign: positive theta
/// component). Throws PreconditionError when |lambda_u| <= 1.
Vec2 unstable_eigenvector(const MapParams& p, const FixedPointRecord& saddle);

}  // namespace tangle
