#pragma once

#include <array>
#include <optional>
#include <string>

#include "tangle/forcing.hpp"
#include "tangle/geom.hpp"
#include "tangle/poly2.hpp"

namespace tangle {

/// Planar system
///
///   x' = -alpha x + f(x,y) + mu A(x,y) (rho + Q(omega t))
///   y' =  beta  y + g(x,y) + mu B(x,y) (rho + Q(omega t))
///
/// with a dissipative saddle at the origin (0 < beta < alpha), f, g, A, B
/// polynomials vanishing to second order, and Q a zero-mean trigonometric
/// polynomial. Q's Fourier coefficients are carried by a ForcingProfile.
struct OdeSystem {
  double alpha = 1.5;
  double beta = 1.0;
  Poly2 f, g;  // autonomous nonlinearities
  Poly2 A, B;  // perturbation shapes
  ForcingProfile q = ForcingProfile::pure_sin();

  double omega = 2.0;
  double rho = 1.0;
  double mu = 1e-5;
  double epsilon = 0.05;

  /// Optional shooting handle: the field is augmented by
  /// shoot * (0, x^2) and the homoclinic computation bisects `shoot`
  /// over [shoot_lo, shoot_hi] to close the loop.
  std::optional<std::pair<double, double>> shoot_bracket;

  /// Checks (H1)(ii) and degeneracy conditions; returns a message on
  /// failure. The Diophantine condition (H1)(i) is not decidable
  /// numerically and is not checked; near-resonant alpha/beta merely
  /// degrades the linearization-based predictions.
  std::optional<std::string> check_hypotheses() const;

  /// Warns (does not fail) when mu << epsilon << 1 is violated.
  std::optional<std::string> scale_warning() const;

  Vec2 unperturbed_field(double x, double y) const {
    return {-alpha * x + f.eval(x, y), beta * y + g.eval(x, y)};
  }

  Vec2 forced_field(double x, double y, double t, double shoot = 0.0) const {
    const double qv = rho + q.eval(omega * t);
    Vec2 v{-alpha * x + f.eval(x, y) + mu * A.eval(x, y) * qv,
           beta * y + g.eval(x, y) + mu * B.eval(x, y) * qv};
    v.y += shoot * x * x;
    return v;
  }
};

/// The shipped test system: a nodal-cubic level set 4xy - (x+y)^3/2 = 0 made
/// invariant by construction, so it carries an exact homoclinic loop through
/// the origin for any 0 < beta < alpha (departing along +y, returning along
/// +x). Default perturbation shapes A = xy, B = x^2.
OdeSystem engineered_loop_system(double alpha = 1.5, double beta = 1.0);

/// Same field plus the shooting handle nu * (0, x^2); the loop closes at
/// nu = 0, so shooting has a known answer. Used to exercise the bisection
/// path of the homoclinic computation.
OdeSystem engineered_shooting_system(double alpha = 1.5, double beta = 1.0,
                                     double bracket = 0.05);

/// Level function of the engineered loop (diagnostic for tests).
double engineered_loop_level(double x, double y);

}  // namespace tangle
