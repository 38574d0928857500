#include "tangle/validate.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "tangle/parallel.hpp"

namespace tangle {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

namespace {

struct FlowResult {
  ValidationSample::Outcome outcome = ValidationSample::Outcome::kFailure;
  double t_return = 0.0;
  double x_return = 0.0;
};

// Forced flow from Sigma-; return = next upward crossing of y = epsilon near
// the saddle, escape = the orbit dives below the saddle or leaves the loop
// box. Crossings are located by bisection on the dense-output interpolant
// and validated by the |x| gate afterwards, so no discontinuous event
// functions are involved.
FlowResult flow_once(const OdeSystem& sys, double x0, double theta0,
                     const ValidateOptions& opts) {
  auto rhs = [&](const State& q, State& dq, double t) {
    const Vec2 v = sys.forced_field(q[0], q[1], t);
    dq[0] = v.x;
    dq[1] = v.y;
  };
  auto stepper = odeint::make_dense_output(opts.integ_tol, opts.integ_tol,
                                           odeint::runge_kutta_dopri5<State>());
  const double t0 = theta0 / sys.omega;
  State q{x0, sys.epsilon};
  stepper.initialize(q, t0, 1e-4);

  const double eps = sys.epsilon;
  const double x_gate = 0.35;  // near-saddle gate for the return crossing
  double prev_t = t0;
  State prev = q;
  FlowResult res;
  while (stepper.current_time() - t0 < opts.max_time) {
    stepper.do_step(rhs);
    const double t1 = stepper.current_time();
    State cur;
    stepper.calc_state(t1, cur);

    // Escape: dipped below the saddle or blew up.
    if (cur[1] < -0.15 || std::hypot(cur[0], cur[1]) > 40.0) {
      res.outcome = ValidationSample::Outcome::kEscape;
      return res;
    }

    // Return: y crosses epsilon upward with |x| small; skip the start.
    if (t1 - t0 > 1.0 && prev[1] < eps && cur[1] >= eps) {
      double lo = prev_t, hi = t1;
      for (int b = 0; b < 80; ++b) {
        const double mid = 0.5 * (lo + hi);
        State s;
        stepper.calc_state(mid, s);
        (s[1] < eps ? lo : hi) = mid;
      }
      State s;
      stepper.calc_state(0.5 * (lo + hi), s);
      if (std::abs(s[0]) < x_gate) {
        res.outcome = ValidationSample::Outcome::kReturn;
        res.t_return = 0.5 * (lo + hi);
        res.x_return = s[0];
        return res;
      }
    }
    prev_t = t1;
    prev = cur;
  }
  return res;  // timeout -> failure
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

ValidationReport validate_return_map(const OdeSystem& sys,
                                     const HomoclinicOrbitData& orbit,
                                     const DerivedConstants& consts,
                                     const MapParams& derived,
                                     const ValidateOptions& opts, unsigned threads) {
  ValidationReport rep;
  rep.mu = sys.mu;

  std::vector<ValidationSample> samples;
  for (int it = 0; it < opts.theta_samples; ++it) {
    for (int iz = 0; iz < opts.z_samples; ++iz) {
      ValidationSample s;
      s.theta0 = kTwoPi * it / opts.theta_samples;
      s.z0 = (opts.z_samples == 1)
                 ? 0.0
                 : -opts.z_span + 2.0 * opts.z_span * iz / (opts.z_samples - 1);
      samples.push_back(s);
    }
  }

  const double shift = consts.phase_shift;
  parallel_for(samples.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      ValidationSample& s = samples[i];

      // Map-side prediction in the shifted angle.
      const double theta_m = s.theta0 + shift;
      const double F = eval_F(derived, PhasePoint(theta_m, s.z0));
      s.predicted_return = F > derived.escape_floor;
      if (s.predicted_return) {
        const double th1_m = theta_m + derived.a - derived.d * std::log(F);
        s.theta1_predicted = normalize_theta(th1_m - shift);
        s.z1_predicted = derived.b * std::pow(F, derived.gamma);
      }

      // Direct integration from the anchored section.
      const double x0 = orbit.sigma_minus_x + sys.mu * s.z0;
      const FlowResult fr = flow_once(sys, x0, s.theta0, opts);
      s.outcome = fr.outcome;
      if (fr.outcome == ValidationSample::Outcome::kReturn) {
        s.theta1_direct = normalize_theta(sys.omega * fr.t_return);
        s.z1_direct = (fr.x_return - orbit.sigma_minus_x) / sys.mu;
        if (s.predicted_return) {
          s.dtheta = std::abs(wrap_to_pi(s.theta1_direct - s.theta1_predicted));
          s.dz = std::abs(s.z1_direct - s.z1_predicted);
        }
      }
    }
  });

  std::vector<double> dths, dzs;
  for (const auto& s : samples) {
    if (s.outcome == ValidationSample::Outcome::kFailure) {
      ++rep.failures;
      continue;
    }
    ++rep.decided;
    const bool direct_return = s.outcome == ValidationSample::Outcome::kReturn;
    if (direct_return == s.predicted_return) ++rep.agreements;
    if (direct_return && s.predicted_return) {
      dths.push_back(s.dtheta);
      dzs.push_back(s.dz);
    }
  }
  rep.median_dtheta = median_of(dths);
  rep.median_dz = median_of(dzs);
  rep.samples = std::move(samples);
  return rep;
}

}  // namespace tangle
