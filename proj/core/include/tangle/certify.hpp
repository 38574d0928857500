#pragma once

#include <vector>

#include "tangle/domain.hpp"
#include "tangle/map.hpp"

namespace tangle {

/// Slope thresholds of the horizontal / vertical cone fields.
struct ConeSpec {
  double horizontal_bound = 0.01;  // |slope| < this  => horizontal
  double vertical_bound = 100.0;   // |slope| > this  => vertical

  bool valid() const {
    return horizontal_bound > 0.0 && horizontal_bound < 1.0 && vertical_bound > 1.0;
  }
};

/// Sample counts for the certification sweep.
struct CertifySampling {
  int v_theta = 2000;
  int v_z = 200;
  int vf_samples = 10000;
};

/// Outcome of the sampled Theorem-1 conditions at one parameter value:
/// (fold) F(V_f) lands strictly inside U, (i) DF maps the horizontal cone
/// into itself where images stay in V, (ii) DF^{-1} maps the vertical cone
/// into itself on those images. Margins are minima over all samples;
/// certification is sampling-based, not interval-rigorous.
struct CertificateReport {
  double param_a = 0.0;
  bool fold_in_U = false;
  double fold_margin = 0.0;    // min theta-distance from F(V_f) to V; < 0 = penetration
  bool cone_h_ok = false;
  double cone_h_margin = 0.0;  // horizontal_bound - worst image slope
  bool cone_v_ok = false;
  double cone_v_margin = 0.0;  // worst pre-image slope - vertical_bound
  long cone_samples = 0;       // points that entered the cone checks
  long case_deep = 0;          // cone samples with F < sqrt(k) (proof case 2)
  long fold_samples = 0;
  CertifySampling sampling;

  bool certified() const { return fold_in_U && cone_h_ok && cone_v_ok; }
};

CertificateReport certify_horseshoe(const MapParams& p, const ConeSpec& cones = {},
                                    const CertifySampling& sampling = {},
                                    unsigned threads = 1);

/// One scan step and the merged intervals of equal outcome.
struct ScanStep {
  double a = 0.0;
  bool certified = false;
  double fold_margin = 0.0;
  double cone_h_margin = 0.0;
  double cone_v_margin = 0.0;
};

struct ScanInterval {
  double a_lo = 0.0;
  double a_hi = 0.0;
  bool certified = false;
};

struct ScanResult {
  std::vector<ScanStep> steps;
  std::vector<ScanInterval> intervals;
};

/// Runs certify_horseshoe at `steps` values of a over [a_lo, a_hi] with all
/// other parameters (including b) held fixed, merging consecutive equal
/// outcomes.
ScanResult scan_parameter(const MapParams& base, double a_lo, double a_hi, int steps,
                          const ConeSpec& cones = {}, const CertifySampling& sampling = {},
                          unsigned threads = 1);

}  // namespace tangle
