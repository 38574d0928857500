#pragma once

#include <vector>

#include "tangle/homoclinic.hpp"
#include "tangle/map.hpp"

namespace tangle {

/// One harmonic of the reduced forcing profile phi_L, as amplitude ratio and
/// phase relative to the first harmonic (which is normalized to sin(theta)).
struct ProfileHarmonic {
  int n = 1;
  double ratio = 0.0;
  double phase = 0.0;
};

/// Melnikov-type integrals of the kernel R(s) = H(s) exp(-int_0^s E) and the
/// exponential accumulation factors of E over the loop passage.
struct DerivedConstants {
  // Full-range (improper) integrals, approximated over the sampled tails.
  double A_val = 0.0;
  double C_val = 0.0;
  double S_val = 0.0;
  // Truncations over [-L-, L+].
  double A_L = 0.0;
  double C_L = 0.0;
  double S_L = 0.0;
  double P_L = 0.0;
  double P_L_plus = 0.0;
  double L_plus = 0.0;
  double L_minus = 0.0;
  double omega = 0.0;
  double rho = 0.0;             // effective rho (sign-fixed so rho * A_L > 0)
  double phase_shift = 0.0;     // omega L- + c0 applied to normalize harmonic 1
  std::vector<ProfileHarmonic> harmonics;  // n >= 2 entries of phi_L
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
};

/// Integrals at the orbit's own section radius. Throws DivergentError when
/// the kernel tail fails an exponential-decay fit.
DerivedConstants melnikov_integrals(const HomoclinicOrbitData& orbit,
                                    const OdeSystem& sys,
                                    const QuadratureOptions& opts = {});

/// Truncated A_L, C_L, S_L, P_L, P_L+ over [-Lm, Lp] only (convergence
/// studies); no tail checks.
DerivedConstants melnikov_integrals_truncated(const HomoclinicOrbitData& orbit,
                                              const OdeSystem& sys, double Lm,
                                              double Lp,
                                              const QuadratureOptions& opts = {});

/// C(w), S(w) over the full sampled range for an arbitrary frequency.
std::pair<double, double> melnikov_cs(const HomoclinicOrbitData& orbit, double w,
                                      const QuadratureOptions& opts = {});

/// int_0^L E(s) ds (cumulative kernel exponent; Cauchy-convergence checks).
double cumulative_E(const HomoclinicOrbitData& orbit, double L);

/// The rho-selection rule: picks rho with (1/(rho A)) sqrt(c1^2+s1^2)
/// sqrt(C^2+S^2) = 6, sign matching A so rho*A > 0.
double select_rho(const OdeSystem& sys, const DerivedConstants& c);

/// Map constants from the integrals, with every (1 + O(epsilon)) factor set
/// to 1: a, b, c, k plus d = omega/beta, gamma = alpha/beta and the reduced
/// forcing profile. Throws HypothesisViolatedError on (H2)(i)/(ii) failure.
/// Emits a warning string (returned via *warning) when the derived c falls
/// outside (2, 10).
MapParams derive_map_params(const OdeSystem& sys, const DerivedConstants& c,
                            std::string* warning = nullptr);

/// b depends on mu; a = d ln(1/mu) + const. Re-derives (a, b) for another mu
/// with the same constants.
MapParams map_params_at_mu(const OdeSystem& sys, const DerivedConstants& c,
                           double mu);

}  // namespace tangle
