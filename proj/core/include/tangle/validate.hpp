#pragma once

#include <optional>
#include <vector>

#include "tangle/melnikov.hpp"

namespace tangle {

/// One validation sample: a point on Sigma- evolved around the loop by the
/// forced flow, against the derived map's prediction.
struct ValidationSample {
  double theta0 = 0.0;
  double z0 = 0.0;
  bool predicted_return = false;
  enum class Outcome { kReturn, kEscape, kFailure } outcome = Outcome::kFailure;
  double theta1_direct = 0.0;  // set on return
  double z1_direct = 0.0;
  double theta1_predicted = 0.0;  // set when predicted_return
  double z1_predicted = 0.0;
  double dtheta = 0.0;  // wrapped |direct - predicted|, set when both returned
  double dz = 0.0;
};

struct ValidationReport {
  double mu = 0.0;
  std::vector<ValidationSample> samples;
  long agreements = 0;   // classification matches over decided samples
  long decided = 0;      // samples with a non-failure outcome
  long failures = 0;
  double median_dtheta = 0.0;
  double median_dz = 0.0;

  double agreement_rate() const {
    return decided > 0 ? double(agreements) / double(decided) : 0.0;
  }
};

struct ValidateOptions {
  int theta_samples = 10;
  int z_samples = 5;
  double z_span = 0.9;      // z0 in [-z_span, z_span]
  double integ_tol = 1e-11;
  double max_time = 400.0;
};

/// Integrates the forced system from a lattice on Sigma- (anchored on the
/// unperturbed W^u_loc crossing of y = epsilon), classifies each orbit as
/// return-to-Sigma- or escape, and compares with the derived map. Per-sample
/// integration failures are recorded, not raised.
ValidationReport validate_return_map(const OdeSystem& sys,
                                     const HomoclinicOrbitData& orbit,
                                     const DerivedConstants& consts,
                                     const MapParams& derived,
                                     const ValidateOptions& opts = {},
                                     unsigned threads = 1);

}  // namespace tangle
