#include "tangle/ode.hpp"

#include <cmath>

namespace tangle {

std::optional<std::string> OdeSystem::check_hypotheses() const {
  if (!(beta > 0.0) || !(alpha > beta))
    return "dissipativity 0 < beta < alpha violated";
  if (alpha == beta) return "alpha == beta (resonant saddle)";
  if (!f.vanishes_to_second_order() || !g.vanishes_to_second_order())
    return "f or g does not vanish to second order at the origin";
  if (!A.vanishes_to_second_order() || !B.vanishes_to_second_order())
    return "A or B does not vanish to second order at the origin";
  if (q.empty()) return "forcing Q is identically zero";
  if (!(omega > 0.0)) return "omega must be positive";
  return std::nullopt;
}

std::optional<std::string> OdeSystem::scale_warning() const {
  if (!(mu < 0.2 * epsilon) || !(epsilon < 0.5))
    return "scale ordering mu << epsilon << 1 is strained (mu=" +
           std::to_string(mu) + ", epsilon=" + std::to_string(epsilon) + ")";
  return std::nullopt;
}

namespace {

// Nonlinearities that keep G = 4xy - (x+y)^3/2 invariant next to the
// linear part (-alpha x, beta y):
//   f =  (a-b)(x+y)^2/8 + 3(a+b)(x+y)^2/16 + 3(a-b)(x+y)(x-y)/16
//   g =  (a-b)(x+y)^2/8 - 3(a+b)(x+y)^2/16 - 3(a-b)(x+y)(x-y)/16
Poly2 engineered_f(double a, double b) {
  // (x+y)^2 = x^2 + 2xy + y^2 ; (x+y)(x-y) = x^2 - y^2
  const double c1 = (a - b) / 8.0 + 3.0 * (a + b) / 16.0;  // on (x+y)^2
  const double c2 = 3.0 * (a - b) / 16.0;                  // on x^2 - y^2
  Poly2 p;
  p.add(2, 0, c1 + c2);
  p.add(1, 1, 2.0 * c1);
  p.add(0, 2, c1 - c2);
  return p;
}

Poly2 engineered_g(double a, double b) {
  const double c1 = (a - b) / 8.0 - 3.0 * (a + b) / 16.0;
  const double c2 = -3.0 * (a - b) / 16.0;
  Poly2 p;
  p.add(2, 0, c1 + c2);
  p.add(1, 1, 2.0 * c1);
  p.add(0, 2, c1 - c2);
  return p;
}

}  // namespace

double engineered_loop_level(double x, double y) {
  const double s = x + y;
  return 4.0 * x * y - 0.5 * s * s * s;
}

OdeSystem engineered_loop_system(double alpha, double beta) {
  OdeSystem sys;
  sys.alpha = alpha;
  sys.beta = beta;
  sys.f = engineered_f(alpha, beta);
  sys.g = engineered_g(alpha, beta);
  sys.A.add(1, 1, 1.0);  // A = xy
  sys.B.add(2, 0, 1.0);  // B = x^2
  return sys;
}

OdeSystem engineered_shooting_system(double alpha, double beta, double bracket) {
  OdeSystem sys = engineered_loop_system(alpha, beta);
  sys.shoot_bracket = std::make_pair(-bracket, bracket);
  return sys;
}

}  // namespace tangle
