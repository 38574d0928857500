#pragma once

#include <complex>
#include <vector>

#include "tangle/map.hpp"

namespace tangle {

enum class StabilityKind { kSink, kSaddle, kSource, kNonHyperbolic };
std::string stability_name(StabilityKind k);

/// A fixed point of the map (or of its period-th iterate), with the number
/// of 2*pi wraps the angular equation absorbed and the multipliers of the
/// (product) Jacobian.
struct FixedPointRecord {
  PhasePoint point;
  int winding_m = 0;
  int period = 1;
  std::complex<double> lambda1;  // |lambda1| >= |lambda2|
  std::complex<double> lambda2;
  StabilityKind kind = StabilityKind::kNonHyperbolic;
  double F_value = 0.0;

  bool is_sink() const { return kind == StabilityKind::kSink; }
  bool is_saddle() const { return kind == StabilityKind::kSaddle; }
};

/// Fixed points for every winding number m in [m_lo, m_hi]: solves
/// c Phi(theta) = F_m - 1 - k z_m with F_m = exp((a - 2 pi m)/d),
/// z_m = b F_m^gamma, then polishes by damped 2D Newton. Empty result valid.
std::vector<FixedPointRecord> find_fixed_points(const MapParams& p, int m_lo, int m_hi);

/// Classify a point that is already fixed to 1e-8; throws NotFixedError
/// otherwise.
FixedPointRecord classify_fixed_point(const MapParams& p, const PhasePoint& q);

/// The deep saddle family q_m: starts at m = ceil(3 d) (weak rule) and walks
/// m upward while F_m stays above the machine floor. Records for both theta
/// roots per m.
std::vector<FixedPointRecord> find_saddle_family(const MapParams& p, int max_members = 8);

/// Smallest integer strictly greater than 3 d (the strict rule used
/// downstream by the tangency pipeline).
int first_saddle_m_strict(const MapParams& p);
/// ceil(3 d) (the weak rule).
int first_saddle_m_weak(const MapParams& p);

/// Periodic orbits of the given period from a seed lattice: damped Newton on
/// F^period - id with the chain-rule Jacobian; orbits deduplicated, each
/// record is the orbit point with lexicographically smallest (theta, z).
std::vector<FixedPointRecord> find_periodic_orbits(const MapParams& p, int period,
                                                   int seeds = 400);

/// Multipliers of the orbit of q under period applications.
std::pair<std::complex<double>, std::complex<double>> orbit_multipliers(
    const MapParams& p, const PhasePoint& q, int period);

}  // namespace tangle
