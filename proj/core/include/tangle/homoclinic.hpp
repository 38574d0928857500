#pragma once

#include <vector>

#include "tangle/detail/pchip.hpp"
#include "tangle/ode.hpp"

namespace tangle {

/// The unperturbed homoclinic orbit ell(s) = (a(s), b(s)) sampled densely,
/// with the unit tangent (u, v), the variational rate E(s), the Melnikov
/// kernel H(s) = v A - u B, and the section passage times L+- (s at which
/// |ell| first drops below the section radius forward/backward from the
/// apex at s = 0).
struct HomoclinicOrbitData {
  std::vector<double> s;
  std::vector<double> x, y;
  std::vector<double> u, v;
  std::vector<double> E, H;
  double L_plus = 0.0;
  double L_minus = 0.0;
  double section_radius = 0.0;   // = epsilon of the system that produced it
  double closure_residual = 0.0; // distance to W^s at the probe section
  double shoot_value = 0.0;      // shooting parameter at closure (0 if none)

  // Anchors of the Poincare sections in original coordinates:
  // Sigma- sits on the departing branch at y = epsilon, Sigma+ on the
  // returning branch at x = epsilon.
  double sigma_minus_x = 0.0;  // x-coordinate of W^u_loc at y = epsilon
  double sigma_plus_y = 0.0;   // y-coordinate of W^s_loc at x = epsilon

  detail::Pchip interp_E() const { return detail::Pchip(s, E); }
  detail::Pchip interp_H() const { return detail::Pchip(s, H); }

  /// Recomputes L+- for a different section radius (tails permitting).
  std::pair<double, double> passage_times(double radius) const;
};

struct HomoclinicOptions {
  double shoot_tol = 1e-9;
  double integ_tol = 1e-13;
  double seed_offset = 1e-8;   // distance along the unstable axis to start
  double tail_radius = 1e-6;   // stop when |ell| re-enters this ball (the
                               // closest approach is limited by integration
                               // error amplified along the unstable direction)
  double max_sample_ds = 0.01; // resampling density of the stored orbit
};

/// Computes the homoclinic orbit of the unperturbed system by forward
/// integration from the unstable axis; when the system declares a shooting
/// bracket, bisects the shooting parameter until the loop-closure residual
/// (distance to W^s measured on a probe section) is below shoot_tol.
/// Throws NoHomoclinicError with the best residual on failure.
HomoclinicOrbitData compute_homoclinic_orbit(const OdeSystem& sys,
                                             const HomoclinicOptions& opts = {});

}  // namespace tangle
