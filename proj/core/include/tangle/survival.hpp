#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tangle/domain.hpp"
#include "tangle/map.hpp"

namespace tangle {

/// First-escape iterations on a rectangular grid of cell centers.
/// Entry j means F(F^j(p)) <= escape_floor first happens at iterate j
/// (j = 0: the cell itself lies in U); kSurvived means the orbit stayed in V
/// through all n checks.
struct EscapeGrid {
  static constexpr std::int32_t kSurvived = -1;

  int theta_res = 0;
  int z_res = 0;
  Box range{};
  int max_iter = 0;
  std::vector<std::int32_t> escape_iter;  // row-major, z rows, theta columns

  std::int32_t at(int iz, int it) const { return escape_iter[std::size_t(iz) * theta_res + it]; }
  double theta_of(int it) const {
    return range.theta_lo + (range.theta_hi - range.theta_lo) * (it + 0.5) / theta_res;
  }
  double z_of(int iz) const {
    return range.z_lo + (range.z_hi - range.z_lo) * (iz + 0.5) / z_res;
  }
  std::size_t survivor_count() const;
  double survivor_fraction() const;
};

EscapeGrid escape_time_grid(const MapParams& p, int n, int theta_res, int z_res,
                            const Box& range, unsigned threads = 1);
/// Grid over the bounding box of V.
EscapeGrid escape_time_grid(const MapParams& p, int n, int theta_res = 1000,
                            int z_res = 1000, unsigned threads = 1);

/// Forward orbit record. escaped_at (when set) is the index of the first
/// point lying in U; points then has exactly escaped_at + 1 entries.
struct OrbitTrace {
  std::vector<PhasePoint> points;
  std::optional<int> escaped_at;
  std::optional<double> lyapunov;
};

OrbitTrace orbit_trace(const MapParams& p, const PhasePoint& seed, int n);

/// Iterates a uniform seed lattice over V's bounding box; drops seeds that
/// escape within burn_in, then records `keep` further images per survivor.
/// Throws AllEscapedError when nothing survives burn_in.
std::vector<PhasePoint> attractor_sample(const MapParams& p, int burn_in, int keep,
                                         int seeds, unsigned threads = 1,
                                         std::uint64_t jitter_seed = 0);

/// Largest Lyapunov exponent by tangent-vector iteration with per-step
/// renormalization. Throws OrbitEscapedError if the orbit leaves V within
/// n steps, PreconditionError for n < 1.
double lyapunov_exponent(const MapParams& p, const PhasePoint& seed, int n);

struct LyapunovStats {
  double exponent = 0.0;
  double bootstrap_se = 0.0;   // moving-block bootstrap of the step increments
  int steps = 0;
};

LyapunovStats lyapunov_with_stats(const MapParams& p, const PhasePoint& seed, int n,
                                  int block = 100, int resamples = 200,
                                  std::uint64_t rng_seed = 12345);

/// Count of pairwise-distinct points at the given tolerance (both
/// coordinates, theta wrapped). Used to tell a periodic collapse from a
/// genuinely spread sample.
std::size_t distinct_points(const std::vector<PhasePoint>& pts, double tol = 1e-6);

/// Detects the least period of the eventual orbit of `seed`: iterates
/// settle steps, then looks for a revisit within tol. Returns 0 when the
/// orbit escapes or no revisit occurs within max_period.
int detect_period(const MapParams& p, const PhasePoint& seed, int settle = 2000,
                  int max_period = 32, double tol = 1e-9);

/// Classification printed by the CLI and embedded in JSON reports.
enum class Regime { kFullEscape, kSink, kChaotic, kInconclusive };
std::string regime_name(Regime r);

struct RegimeReport {
  Regime regime = Regime::kInconclusive;
  double survivor_fraction = 0.0;
  int sink_period = 0;             // 0 when no periodic collapse detected
  std::optional<double> lyapunov;  // set when a surviving orbit was found
};

/// Desk-scale regime classification: escape grid at n iterations, then
/// recurrence/Lyapunov on a surviving orbit.
RegimeReport classify_regime(const MapParams& p, int n = 100, int res = 200,
                             unsigned threads = 1);

}  // namespace tangle
