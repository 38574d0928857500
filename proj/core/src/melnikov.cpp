#include "tangle/melnikov.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "tangle/errors.hpp"

namespace tangle {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// Piecewise-smooth integrand: integrate per knot interval so the PCHIP C^1
// joints never limit the quadrature order.
template <class F>
double integrate_knots(const F& f, const std::vector<double>& knots, double lo,
                       double hi, double rel_tol) {
  double total = 0.0;
  auto piece = [&](double a, double b) {
    if (b <= a) return 0.0;
    return GK::integrate(f, a, b, 8, rel_tol);
  };
  double cursor = lo;
  for (double kx : knots) {
    if (kx <= lo) continue;
    if (kx >= hi) break;
    total += piece(cursor, kx);
    cursor = kx;
  }
  total += piece(cursor, hi);
  return total;
}

struct Kernel {
  detail::Pchip H;
  detail::Pchip E;
  double IE0;

  explicit Kernel(const HomoclinicOrbitData& orbit)
      : H(orbit.s, orbit.H), E(orbit.s, orbit.E), IE0(E.integral(0.0)) {}

  double cumE(double s) const { return E.integral(s) - IE0; }
  double operator()(double s) const { return H(s) * std::exp(-cumE(s)); }
};

// Exponential-decay fit of |R| on the outer third of a tail; positive rate
// means decay. Samples below the kernel's numerical floor (set by the
// integrator tolerance, relative to the kernel peak) are noise, not signal,
// and are excluded; a tail entirely below the floor counts as decayed.
double tail_decay_rate(const Kernel& R, double s_inner, double s_outer,
                       double peak) {
  const double floor = 1e-12 * peak;
  const int n = 16;
  double sum_xy = 0.0, sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const double s = s_inner + (s_outer - s_inner) * (i + 0.5) / n;
    const double v = std::abs(R(s));
    if (v <= floor) continue;
    const double x = std::abs(s), y = std::log(v);
    sum_xy += x * y;
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    ++used;
  }
  if (used < 4) return 1.0;  // tail already at numerical zero: fine
  const double slope = (used * sum_xy - sum_x * sum_y) / (used * sum_xx - sum_x * sum_x);
  return -slope;
}

DerivedConstants integrals_over(const HomoclinicOrbitData& orbit,
                                const OdeSystem& sys, double lo, double hi,
                                double Lm, double Lp, const QuadratureOptions& opts,
                                bool tail_checks) {
  const Kernel R(orbit);
  const double w = sys.omega;

  if (tail_checks) {
    double peak = 0.0;
    for (int i = 0; i < 128; ++i) {
      const double s =
          orbit.s.front() + (orbit.s.back() - orbit.s.front()) * i / 127.0;
      peak = std::max(peak, std::abs(R(s)));
    }
    const double fwd =
        tail_decay_rate(R, orbit.s.back() * 2.0 / 3.0, orbit.s.back(), peak);
    const double bwd =
        tail_decay_rate(R, orbit.s.front() * 2.0 / 3.0, orbit.s.front(), peak);
    if (fwd <= 0.0 || bwd <= 0.0)
      throw DivergentError("melnikov_integrals: kernel tail fails exponential decay");
  }

  DerivedConstants c;
  c.omega = w;
  c.L_plus = Lp;
  c.L_minus = Lm;
  const auto& knots = orbit.s;

  auto I = [&](auto&& f, double a, double b) {
    return integrate_knots(f, knots, a, b, opts.rel_tol);
  };

  c.A_val = I([&](double s) { return R(s); }, lo, hi);
  c.C_val = I([&](double s) { return R(s) * std::cos(w * s); }, lo, hi);
  c.S_val = I([&](double s) { return R(s) * std::sin(w * s); }, lo, hi);
  c.A_L = I([&](double s) { return R(s); }, -Lm, Lp);
  c.C_L = I([&](double s) { return R(s) * std::cos(w * s); }, -Lm, Lp);
  c.S_L = I([&](double s) { return R(s) * std::sin(w * s); }, -Lm, Lp);
  c.P_L = std::exp(R.cumE(Lp) - R.cumE(-Lm));
  c.P_L_plus = std::exp(R.cumE(Lp));
  return c;
}

}  // namespace

DerivedConstants melnikov_integrals(const HomoclinicOrbitData& orbit,
                                    const OdeSystem& sys,
                                    const QuadratureOptions& opts) {
  DerivedConstants c =
      integrals_over(orbit, sys, orbit.s.front(), orbit.s.back(), orbit.L_minus,
                     orbit.L_plus, opts, true);

  // rho with the sign of A (keeps rho * A > 0 as the parameter box demands).
  c.rho = (sys.rho != 0.0) ? sys.rho : 1.0;
  if (c.A_val != 0.0 && c.rho * c.A_val < 0.0) c.rho = -c.rho;

  // Reduced forcing profile: harmonic 1 becomes sin(theta) after shifting
  // theta by omega L- + c0; higher harmonics keep their relative amplitude
  // ratio and phase.
  const Kernel R(orbit);
  const auto& q = sys.q;
  auto cs_at = [&](double w) {
    const double C = integrate_knots([&](double s) { return R(s) * std::cos(w * s); },
                                     orbit.s, -orbit.L_minus, orbit.L_plus, opts.rel_tol);
    const double S = integrate_knots([&](double s) { return R(s) * std::sin(w * s); },
                                     orbit.s, -orbit.L_minus, orbit.L_plus, opts.rel_tol);
    return std::make_pair(C, S);
  };
  auto delta_of = [&](std::size_t n, double C, double S) {
    const double cn = q.cos_coeff(n), sn = q.sin_coeff(n);
    return std::atan2(cn * C + sn * S, sn * C - cn * S);
  };
  const double c1 = q.cos_coeff(1), s1 = q.sin_coeff(1);
  const double amp1 = std::hypot(c1, s1);
  const double base = std::hypot(c.C_L, c.S_L);
  if (amp1 > 0.0 && base > 0.0) {
    const double c0 = delta_of(1, c.C_L, c.S_L);
    c.phase_shift = sys.omega * orbit.L_minus + c0;
    for (std::size_t n = 2; n <= q.harmonics(); ++n) {
      const double cn = q.cos_coeff(n), sn = q.sin_coeff(n);
      if (cn == 0.0 && sn == 0.0) continue;
      auto [Cn, Sn] = cs_at(double(n) * sys.omega);
      ProfileHarmonic h;
      h.n = int(n);
      h.ratio = (std::hypot(cn, sn) / amp1) * (std::hypot(Cn, Sn) / base);
      h.phase = delta_of(n, Cn, Sn) - double(n) * c0;
      c.harmonics.push_back(h);
    }
  }
  return c;
}

DerivedConstants melnikov_integrals_truncated(const HomoclinicOrbitData& orbit,
                                              const OdeSystem& sys, double Lm,
                                              double Lp,
                                              const QuadratureOptions& opts) {
  return integrals_over(orbit, sys, -Lm, Lp, Lm, Lp, opts, false);
}

std::pair<double, double> melnikov_cs(const HomoclinicOrbitData& orbit, double w,
                                      const QuadratureOptions& opts) {
  const Kernel R(orbit);
  const double C =
      integrate_knots([&](double s) { return R(s) * std::cos(w * s); }, orbit.s,
                      orbit.s.front(), orbit.s.back(), opts.rel_tol);
  const double S =
      integrate_knots([&](double s) { return R(s) * std::sin(w * s); }, orbit.s,
                      orbit.s.front(), orbit.s.back(), opts.rel_tol);
  return {C, S};
}

double cumulative_E(const HomoclinicOrbitData& orbit, double L) {
  detail::Pchip E(orbit.s, orbit.E);
  return E.integral(L) - E.integral(0.0);
}

double select_rho(const OdeSystem& sys, const DerivedConstants& c) {
  const double amp1 = std::hypot(sys.q.cos_coeff(1), sys.q.sin_coeff(1));
  const double target = amp1 * std::hypot(c.C_val, c.S_val);
  if (c.A_val == 0.0 || target == 0.0)
    throw HypothesisViolatedError("select_rho: A = 0 or vanishing first harmonic");
  // Midpoint of the 3 < (1/(rho A)) sqrt(...) < 9 window, sign following A.
  return target / (6.0 * c.A_val);
}

MapParams derive_map_params(const OdeSystem& sys, const DerivedConstants& c,
                            std::string* warning) {
  const double amp1 = std::hypot(sys.q.cos_coeff(1), sys.q.sin_coeff(1));
  const double scale = std::abs(c.A_val) + std::abs(c.C_L) + std::abs(c.S_L);
  if (std::abs(c.A_L) < 1e-12 * std::max(1.0, scale))
    throw HypothesisViolatedError("derive_map_params: (H2)(i) A = 0");
  if (amp1 == 0.0)
    throw HypothesisViolatedError("derive_map_params: first forcing harmonic vanishes");
  if (std::hypot(c.C_L, c.S_L) < 1e-12 * std::max(1.0, scale))
    throw HypothesisViolatedError("derive_map_params: (H2)(ii) C^2 + S^2 = 0");

  double rho = c.rho != 0.0 ? c.rho : sys.rho;
  if (rho * c.A_L <= 0.0)
    throw HypothesisViolatedError("derive_map_params: rho * A must be positive");

  const double S = c.P_L_plus * c.A_L * rho;  // the recurring product
  if (S <= 0.0)
    throw HypothesisViolatedError("derive_map_params: P_L+ A_L rho <= 0");

  MapParams p;
  p.d = sys.omega / sys.beta;
  p.gamma = sys.alpha / sys.beta;
  // Angular constant from composing the corner map with the loop passage:
  // theta1 = theta + omega(L+ + L-) + (omega/beta) ln(eps/mu) -
  // (omega/beta) ln(P_L+ F), then F = rho A_L Fhat. P_L+ A_L rho lands in
  // the denominator; direct integration of the forced flow confirms the
  // sign (the z-line, which is insensitive to it, matches either way).
  p.a = p.d * std::log(1.0 / sys.mu) + sys.omega * (c.L_plus + c.L_minus) +
        p.d * std::log(sys.epsilon / S);
  p.b = std::pow(sys.mu / sys.epsilon, p.gamma - 1.0) * std::pow(S, p.gamma);
  p.c = amp1 * std::hypot(c.C_L, c.S_L) / (c.A_L * rho);
  p.k = c.P_L / (c.P_L_plus * c.A_L * rho);

  std::vector<double> sin_coeffs{1.0};
  std::vector<double> cos_coeffs{0.0};
  for (const auto& h : c.harmonics) {
    sin_coeffs.resize(std::max<std::size_t>(sin_coeffs.size(), h.n), 0.0);
    cos_coeffs.resize(std::max<std::size_t>(cos_coeffs.size(), h.n), 0.0);
    sin_coeffs[h.n - 1] = h.ratio * std::cos(h.phase);
    cos_coeffs[h.n - 1] = h.ratio * std::sin(h.phase);
  }
  p.forcing = ForcingProfile(sin_coeffs, cos_coeffs);

  if (warning) {
    warning->clear();
    if (!(p.c > 2.0 && p.c < 10.0))
      *warning = "derived c = " + std::to_string(p.c) + " outside the (2, 10) window";
  }
  return p;
}

MapParams map_params_at_mu(const OdeSystem& sys, const DerivedConstants& c,
                           double mu) {
  OdeSystem s2 = sys;
  s2.mu = mu;
  return derive_map_params(s2, c);
}

}  // namespace tangle
