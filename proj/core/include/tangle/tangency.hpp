#pragma once

#include <optional>

#include "tangle/fixed_points.hpp"
#include "tangle/map.hpp"

namespace tangle {

/// Diagnostics of a located non-degenerate homoclinic tangency.
struct TangencyReport {
  double a_star = 0.0;
  PhasePoint tangency_point;     // fold tip of the unstable image at a_star
  double gap_residual = 0.0;     // |tangency_gap| at a_star
  double quadratic_coeff = 0.0;  // |d^2 theta1 / d z1^2| at the fold tip
  double crossing_speed = 0.0;   // d(gap)/da at a_star
  double unstable_slope_bound = 0.0;  // max |dw^u/dtheta| over the crossing piece
  double stable_slope_bound = 0.0;    // max |dw^s/dz| along the stable curve
  int saddle_m = 0;
  int winding = 0;               // fold-window index used for the gap
  int intersections_below = 0;   // local crossings at a_star - delta_a
  int intersections_above = 0;   // at a_star + delta_a
  double unfold_delta_a = 1e-3;
};

struct TangencyOptions {
  double seed_radius = 1e-4;
  int order_n = 20;          // direction-field depth for the stable curve
  double ws_tol = 1e-12;     // stable-curve integration error control
  std::optional<int> winding;  // fold window; default: lowest feasible
};

/// Signed theta-distance between the fold tip of F(l^u cap V_f) and the
/// stable curve of the saddle evaluated at the tip's z. Positive when the
/// tip lies on the theta_r side of the stable curve.
double tangency_gap(const MapParams& p, const FixedPointRecord& saddle,
                    const TangencyOptions& opts = {});

/// Bisects tangency_gap in a over [a_lo, a_hi] (same fold window throughout)
/// to |gap| < 1e-10, then assembles the report: quadratic coefficient at the
/// tip, crossing speed by Richardson-extrapolated central differences, slope
/// bounds, and the local intersection counts at a_star -+ unfold_delta_a.
/// Throws NoBracketError when the gap does not change sign on the range.
TangencyReport find_tangency(const MapParams& base, int saddle_m, double a_lo,
                             double a_hi, const TangencyOptions& opts = {});

/// The saddle record used by the pipeline for winding number m: the theta
/// root with positive cosine (the theta_l side). Throws AnalysisError if it
/// does not exist at these parameters.
FixedPointRecord tangency_saddle(const MapParams& p, int m);

}  // namespace tangle
