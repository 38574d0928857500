#include "tangle/homoclinic.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>

#include "tangle/errors.hpp"

namespace tangle {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

namespace {

struct RawOrbit {
  std::vector<double> t, x, y;
  bool closed = false;   // re-entered the tail ball after the apex
  double apex_r = 0.0;
};

// Forward integration from the unstable axis until the orbit re-enters the
// tail ball past the apex, leaves the working box, or times out.
RawOrbit trace_loop(const OdeSystem& sys, double shoot, const HomoclinicOptions& opts) {
  auto rhs = [&](const State& q, State& dq, double) {
    const Vec2 v = sys.unperturbed_field(q[0], q[1]);
    dq[0] = v.x;
    dq[1] = v.y + shoot * q[0] * q[0];
  };

  auto stepper = odeint::make_dense_output(opts.integ_tol, opts.integ_tol,
                                           odeint::runge_kutta_dopri5<State>());
  State q{0.0, opts.seed_offset};
  stepper.initialize(q, 0.0, 1e-4);

  RawOrbit orbit;
  orbit.t.push_back(0.0);
  orbit.x.push_back(q[0]);
  orbit.y.push_back(q[1]);

  const double t_max = 500.0;
  const double r_escape = 50.0;
  bool past_apex = false;
  while (stepper.current_time() < t_max) {
    stepper.do_step(rhs);
    const double t1 = stepper.current_time();
    // Resample the step at the storage density.
    double t = orbit.t.back();
    while (t < t1) {
      t = std::min(t1, t + opts.max_sample_ds);
      State s;
      stepper.calc_state(t, s);
      orbit.t.push_back(t);
      orbit.x.push_back(s[0]);
      orbit.y.push_back(s[1]);
      const double r = std::hypot(s[0], s[1]);
      orbit.apex_r = std::max(orbit.apex_r, r);
      if (r < 0.5 * orbit.apex_r) past_apex = true;
      if (past_apex && r < opts.tail_radius) {
        orbit.closed = true;
        return orbit;
      }
      if (r > r_escape || s[1] < -r_escape) return orbit;
    }
  }
  return orbit;
}

// y-coordinate of the local stable manifold at x = x_probe, by backward
// integration from a point on the stable axis (backward flow contracts onto
// W^s exponentially).
double stable_manifold_y(const OdeSystem& sys, double shoot, double x_probe,
                         double integ_tol) {
  auto rhs = [&](const State& q, State& dq, double) {
    const Vec2 v = sys.unperturbed_field(q[0], q[1]);
    dq[0] = -v.x;
    dq[1] = -(v.y + shoot * q[0] * q[0]);
  };
  auto stepper = odeint::make_dense_output(integ_tol, integ_tol,
                                           odeint::runge_kutta_dopri5<State>());
  State q{1e-6, 0.0};
  stepper.initialize(q, 0.0, 1e-4);
  double prev_t = 0.0;
  State prev = q;
  for (int it = 0; it < 100000; ++it) {
    stepper.do_step(rhs);
    State cur;
    stepper.calc_state(stepper.current_time(), cur);
    if (cur[0] >= x_probe) {
      // Bisect the crossing inside the step.
      double lo = prev_t, hi = stepper.current_time();
      for (int b = 0; b < 80; ++b) {
        const double mid = 0.5 * (lo + hi);
        State s;
        stepper.calc_state(mid, s);
        (s[0] < x_probe ? lo : hi) = mid;
      }
      State s;
      stepper.calc_state(0.5 * (lo + hi), s);
      return s[1];
    }
    prev_t = stepper.current_time();
    prev = cur;
    if (std::hypot(cur[0], cur[1]) > 50.0) break;
  }
  throw NoHomoclinicError("stable manifold probe never reached the section", 0.0);
}

// Re-integrates a short segment from a stored sample and bisects the
// crossing of x = x_probe on the dense-output interpolant (the stored
// polyline alone is only accurate to O(ds^2) at a crossing).
double refined_crossing_y(const OdeSystem& sys, double shoot, const State& from,
                          double x_probe, double integ_tol) {
  auto rhs = [&](const State& q, State& dq, double) {
    const Vec2 v = sys.unperturbed_field(q[0], q[1]);
    dq[0] = v.x;
    dq[1] = v.y + shoot * q[0] * q[0];
  };
  auto stepper = odeint::make_dense_output(integ_tol, integ_tol,
                                           odeint::runge_kutta_dopri5<State>());
  stepper.initialize(from, 0.0, 1e-4);
  double prev_t = 0.0;
  for (int it = 0; it < 10000; ++it) {
    stepper.do_step(rhs);
    State cur;
    stepper.calc_state(stepper.current_time(), cur);
    if (cur[0] < x_probe) {
      double lo = prev_t, hi = stepper.current_time();
      for (int b = 0; b < 80; ++b) {
        const double mid = 0.5 * (lo + hi);
        State s;
        stepper.calc_state(mid, s);
        (s[0] >= x_probe ? lo : hi) = mid;
      }
      State s;
      stepper.calc_state(0.5 * (lo + hi), s);
      return s[1];
    }
    prev_t = stepper.current_time();
  }
  throw IntegrationFailure("refined_crossing_y: no section crossing");
}

// Signed miss distance at the probe section x = x_probe: y of the first
// downward crossing on the return leg minus the W^s height there. Orbits
// that never produce a valid crossing are classified by where they ended up.
double miss_distance(const OdeSystem& sys, double shoot, double x_probe,
                     const HomoclinicOptions& opts) {
  const RawOrbit orbit = trace_loop(sys, shoot, opts);
  const double y_ws = stable_manifold_y(sys, shoot, x_probe, opts.integ_tol);

  std::size_t apex = 0;
  double rmax = 0.0;
  for (std::size_t i = 0; i < orbit.t.size(); ++i) {
    const double r = std::hypot(orbit.x[i], orbit.y[i]);
    if (r > rmax) {
      rmax = r;
      apex = i;
    }
  }
  for (std::size_t i = apex; i + 1 < orbit.t.size(); ++i) {
    if (orbit.x[i] >= x_probe && orbit.x[i + 1] < x_probe) {
      const double yc = refined_crossing_y(sys, shoot, {orbit.x[i], orbit.y[i]},
                                           x_probe, opts.integ_tol);
      return yc - y_ws;
    }
  }
  // No crossing: overshoot ends with y large positive, undershoot negative.
  return orbit.y.back() >= 0.0 ? 1.0 : -1.0;
}

}  // namespace

std::pair<double, double> HomoclinicOrbitData::passage_times(double radius) const {
  double lp = std::numeric_limits<double>::quiet_NaN();
  double lm = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double r0 = std::hypot(x[i - 1], y[i - 1]);
    const double r1 = std::hypot(x[i], y[i]);
    if (s[i] > 0.0 && r0 >= radius && r1 < radius && std::isnan(lp)) {
      const double f = (r0 - radius) / (r0 - r1);
      lp = s[i - 1] + f * (s[i] - s[i - 1]);
    }
    if (s[i] <= 0.0 && r0 < radius && r1 >= radius && std::isnan(lm)) {
      const double f = (radius - r0) / (r1 - r0);
      lm = -(s[i - 1] + f * (s[i] - s[i - 1]));
    }
  }
  if (std::isnan(lp) || std::isnan(lm))
    throw AnalysisError("passage_times: radius outside the sampled range");
  return {lp, lm};
}

HomoclinicOrbitData compute_homoclinic_orbit(const OdeSystem& sys,
                                             const HomoclinicOptions& opts) {
  if (auto msg = sys.check_hypotheses())
    throw PreconditionError("compute_homoclinic_orbit: " + *msg);

  // Probe section for the closure measurement: a fraction of the loop size.
  const double apex_guess =
      trace_loop(sys, sys.shoot_bracket ? 0.5 * (sys.shoot_bracket->first +
                                                 sys.shoot_bracket->second)
                                        : 0.0,
                 opts)
          .apex_r;
  const double x_probe = std::max(4.0 * sys.epsilon, 0.25 * apex_guess);

  double shoot = 0.0;
  double residual;
  if (sys.shoot_bracket) {
    double lo = sys.shoot_bracket->first, hi = sys.shoot_bracket->second;
    double mlo = miss_distance(sys, lo, x_probe, opts);
    double mhi = miss_distance(sys, hi, x_probe, opts);
    if ((mlo > 0.0) == (mhi > 0.0))
      throw NoHomoclinicError("shooting bracket does not straddle the loop",
                              std::min(std::abs(mlo), std::abs(mhi)));
    double mmid = mlo;
    for (int it = 0; it < 200; ++it) {
      shoot = 0.5 * (lo + hi);
      mmid = miss_distance(sys, shoot, x_probe, opts);
      if (std::abs(mmid) < 0.25 * opts.shoot_tol) break;
      if ((mmid > 0.0) == (mhi > 0.0)) {
        hi = shoot;
        mhi = mmid;
      } else {
        lo = shoot;
        mlo = mmid;
      }
      if (hi - lo < 1e-16 * std::max(1.0, std::abs(lo))) break;
    }
    residual = std::abs(mmid);
  } else {
    residual = std::abs(miss_distance(sys, 0.0, x_probe, opts));
  }
  if (residual > opts.shoot_tol)
    throw NoHomoclinicError(
        "loop-closure residual " + std::to_string(residual) + " above tolerance",
        residual);

  const RawOrbit orbit = trace_loop(sys, shoot, opts);
  if (!orbit.closed)
    throw NoHomoclinicError("closed residual passed but the orbit did not return",
                            residual);

  HomoclinicOrbitData data;
  data.closure_residual = residual;
  data.shoot_value = shoot;
  data.section_radius = sys.epsilon;

  std::size_t apex = 0;
  double rmax = 0.0;
  for (std::size_t i = 0; i < orbit.t.size(); ++i) {
    const double r = std::hypot(orbit.x[i], orbit.y[i]);
    if (r > rmax) {
      rmax = r;
      apex = i;
    }
  }
  // Quadratic refinement of the apex time: the sampled argmax wobbles by
  // ds/2, which would shift the s-origin (and with it every L and phase).
  double t_apex = orbit.t[apex];
  if (apex > 0 && apex + 1 < orbit.t.size()) {
    auto r2 = [&](std::size_t i) {
      return orbit.x[i] * orbit.x[i] + orbit.y[i] * orbit.y[i];
    };
    const double fm = r2(apex - 1), f0 = r2(apex), fp = r2(apex + 1);
    const double denom = fm - 2.0 * f0 + fp;
    if (denom < 0.0) {
      const double h = 0.5 * (orbit.t[apex + 1] - orbit.t[apex - 1]);
      t_apex += 0.5 * h * (fm - fp) / denom;
    }
  }

  const std::size_t n = orbit.t.size();
  data.s.resize(n);
  data.x = orbit.x;
  data.y = orbit.y;
  data.u.resize(n);
  data.v.resize(n);
  data.E.resize(n);
  data.H.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.s[i] = orbit.t[i] - t_apex;
    const double x = orbit.x[i], y = orbit.y[i];
    const Vec2 f = sys.unperturbed_field(x, y);
    const double speed = f.norm();
    const double u = f.x / speed, v = f.y / speed;
    data.u[i] = u;
    data.v[i] = v;
    const double fx = sys.f.dx(x, y), fy = sys.f.dy(x, y);
    const double gx = sys.g.dx(x, y) + 2.0 * shoot * x, gy = sys.g.dy(x, y);
    data.E[i] = v * v * (-sys.alpha + fx) + u * u * (sys.beta + gy) -
                u * v * (fy + gx);
    data.H[i] = v * sys.A.eval(x, y) - u * sys.B.eval(x, y);
  }

  // Truncate the stored tails where E stops converging to its saddle
  // limits (beta forward, -alpha backward): past that point the
  // integrator's amplified unstable-mode error dominates the tangent frame
  // and E turns into noise. The kept range still dwarfs L+-.
  {
    std::size_t hi = n - 1;
    double emin = 1e300;
    for (std::size_t i = apex + (n - apex) * 3 / 5; i < n; ++i) {
      const double dev = std::abs(data.E[i] - sys.beta);
      if (dev < emin) {
        emin = dev;
        hi = i;
      }
    }
    std::size_t lo = 0;
    emin = 1e300;
    for (std::size_t i = 0; i <= apex * 2 / 5; ++i) {
      const double dev = std::abs(data.E[i] + sys.alpha);
      if (dev < emin) {
        emin = dev;
        lo = i;
      }
    }
    auto cut = [&](std::vector<double>& a) {
      a = std::vector<double>(a.begin() + lo, a.begin() + hi + 1);
    };
    cut(data.s);
    cut(data.x);
    cut(data.y);
    cut(data.u);
    cut(data.v);
    cut(data.E);
    cut(data.H);
  }

  std::tie(data.L_plus, data.L_minus) = data.passage_times(sys.epsilon);

  // Section anchors in original coordinates (apex is now at s = 0).
  std::size_t apex2 = 0;
  for (std::size_t i = 0; i < data.s.size(); ++i)
    if (std::abs(data.s[i]) < std::abs(data.s[apex2])) apex2 = i;
  for (std::size_t i = 1; i <= apex2; ++i) {
    if (data.y[i - 1] < sys.epsilon && data.y[i] >= sys.epsilon) {
      const double f = (sys.epsilon - data.y[i - 1]) / (data.y[i] - data.y[i - 1]);
      data.sigma_minus_x = data.x[i - 1] + f * (data.x[i] - data.x[i - 1]);
      break;
    }
  }
  for (std::size_t i = apex2; i + 1 < data.s.size(); ++i) {
    if (data.x[i] >= sys.epsilon && data.x[i + 1] < sys.epsilon) {
      const double f = (data.x[i] - sys.epsilon) / (data.x[i] - data.x[i + 1]);
      data.sigma_plus_y = data.y[i] + f * (data.y[i + 1] - data.y[i]);
      break;
    }
  }
  return data;
}

}  // namespace tangle
