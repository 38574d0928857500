#pragma once

#include <span>
#include <vector>

#include "tangle/geom.hpp"
#include "tangle/map.hpp"

namespace tangle {

/// Most contracted / most expanded directions and singular values of a
/// matrix product M = Mn ... M1. Singular values are kept as logs so deep
/// products with huge expansion do not overflow.
struct SingularFrame {
  Vec2 e;                    // most contracted direction, |e| = 1,
                             // sign-normalized to e.x > 0 (or e.y > 0 when degenerate)
  double log_sigma_min = 0.0;
  double log_sigma_max = 0.0;
  int factors = 0;           // number of matrices actually folded in

  double sigma_min() const;
  double sigma_max() const;
};

/// Singular frame of the ordered product factors[n-1] * ... * factors[0].
/// Throws DegenerateConformalError when B^2 - 4C falls below the degeneracy
/// floor (all directions contracted equally).
SingularFrame most_contracted_direction(std::span<const Mat2> factors);

/// e_i for i = 1..n along the forward orbit of q: e_i is the most contracted
/// direction of DF^i(q). Stops early when the orbit leaves V or the frame
/// degenerates; the returned sequence holds what was computable.
std::vector<Vec2> direction_sequence(const MapParams& p, const PhasePoint& q, int n);

/// The direction field e_n used for stable curves: folds Jacobian factors
/// along the forward orbit of q until |e_{i+1} - e_i| < tol, the orbit exits
/// V, or i == order_n. Throws DegenerateConformalError only when not even
/// e_1 exists.
struct DirectionField {
  MapParams params;
  int order_n = 20;
  double convergence_tol = 1e-13;

  Vec2 eval(const PhasePoint& q) const;
};

}  // namespace tangle
