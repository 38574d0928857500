#include "tangle/survival.hpp"

#include <algorithm>
#include <cmath>

#include "tangle/errors.hpp"
#include "tangle/parallel.hpp"
#include "tangle/rng.hpp"

namespace tangle {

std::size_t EscapeGrid::survivor_count() const {
  return std::count(escape_iter.begin(), escape_iter.end(), kSurvived);
}

double EscapeGrid::survivor_fraction() const {
  return escape_iter.empty() ? 0.0
                             : double(survivor_count()) / double(escape_iter.size());
}

namespace {

std::int32_t first_escape(const MapParams& p, PhasePoint q, int n) {
  for (int j = 0; j <= n; ++j) {
    if (eval_F(p, q) <= p.escape_floor) return j;
    if (j < n) {
      auto im = apply(p, q);
      if (!im) return j;  // unreachable given the F check, kept for clarity
      q = *im;
    }
  }
  return EscapeGrid::kSurvived;
}

}  // namespace

EscapeGrid escape_time_grid(const MapParams& p, int n, int theta_res, int z_res,
                            const Box& range, unsigned threads) {
  if (n < 1) throw PreconditionError("escape_time_grid: n >= 1 required");
  if (theta_res < 2 || z_res < 2)
    throw PreconditionError("escape_time_grid: resolution >= 2 per axis required");

  EscapeGrid g;
  g.theta_res = theta_res;
  g.z_res = z_res;
  g.range = range;
  g.max_iter = n;
  g.escape_iter.assign(std::size_t(theta_res) * z_res, 0);

  parallel_for(std::size_t(z_res), threads, [&](std::size_t rb, std::size_t re) {
    for (std::size_t iz = rb; iz < re; ++iz) {
      const double z = g.z_of(int(iz));
      for (int it = 0; it < theta_res; ++it) {
        const PhasePoint q(g.theta_of(it), z);
        g.escape_iter[iz * theta_res + it] = first_escape(p, q, n);
      }
    }
  });
  return g;
}

EscapeGrid escape_time_grid(const MapParams& p, int n, int theta_res, int z_res,
                            unsigned threads) {
  return escape_time_grid(p, n, theta_res, z_res, v_bounding_box(p), threads);
}

OrbitTrace orbit_trace(const MapParams& p, const PhasePoint& seed, int n) {
  OrbitTrace t;
  t.points.push_back(seed);
  PhasePoint q = seed;
  for (int j = 0; j < n; ++j) {
    auto im = apply(p, q);
    if (!im) {
      t.escaped_at = j;
      return t;
    }
    q = *im;
    t.points.push_back(q);
  }
  return t;
}

std::vector<PhasePoint> attractor_sample(const MapParams& p, int burn_in, int keep,
                                         int seeds, unsigned threads,
                                         std::uint64_t jitter_seed) {
  if (burn_in < 1 || keep < 1 || seeds < 1)
    throw PreconditionError("attractor_sample: burn_in, keep, seeds >= 1 required");

  const Box box = v_bounding_box(p);
  const int per_axis = std::max(1, int(std::lround(std::sqrt(double(seeds)))));
  const int nth = per_axis, nz = (seeds + per_axis - 1) / per_axis;

  std::vector<PhasePoint> lattice;
  lattice.reserve(std::size_t(nth) * nz);
  Rng rng(jitter_seed == 0 ? 1 : jitter_seed);
  for (int iz = 0; iz < nz; ++iz) {
    for (int it = 0; it < nth; ++it) {
      double th = box.theta_lo + (box.theta_hi - box.theta_lo) * (it + 0.5) / nth;
      double z = box.z_lo + (box.z_hi - box.z_lo) * (iz + 0.5) / nz;
      if (jitter_seed != 0) {
        th += (rng.uniform() - 0.5) * (box.theta_hi - box.theta_lo) / nth;
        z += (rng.uniform() - 0.5) * (box.z_hi - box.z_lo) / nz;
      }
      lattice.emplace_back(th, z);
    }
  }

  std::vector<std::vector<PhasePoint>> kept(lattice.size());
  parallel_for(lattice.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      PhasePoint q = lattice[i];
      bool alive = true;
      for (int j = 0; j < burn_in; ++j) {
        auto im = apply(p, q);
        if (!im) {
          alive = false;
          break;
        }
        q = *im;
      }
      if (!alive) continue;
      auto& out = kept[i];
      out.reserve(keep);
      for (int j = 0; j < keep; ++j) {
        auto im = apply(p, q);
        if (!im) break;
        q = *im;
        out.push_back(q);
      }
    }
  });

  std::vector<PhasePoint> result;
  for (auto& v : kept) result.insert(result.end(), v.begin(), v.end());
  if (result.empty())
    throw AllEscapedError("attractor_sample: no seed survived burn-in");
  return result;
}

double lyapunov_exponent(const MapParams& p, const PhasePoint& seed, int n) {
  return lyapunov_with_stats(p, seed, n, 0, 0).exponent;
}

LyapunovStats lyapunov_with_stats(const MapParams& p, const PhasePoint& seed, int n,
                                  int block, int resamples, std::uint64_t rng_seed) {
  if (n < 1) throw PreconditionError("lyapunov: n >= 1 required");

  std::vector<double> increments;
  increments.reserve(n);
  PhasePoint q = seed;
  Vec2 w{1.0, 0.0};
  for (int j = 0; j < n; ++j) {
    if (eval_F(p, q) <= p.escape_floor)
      throw OrbitEscapedError("lyapunov: orbit left V at step " + std::to_string(j));
    w = jacobian(p, q) * w;
    const double nw = w.norm();
    increments.push_back(std::log(nw));
    w = w / nw;
    auto im = apply(p, q);
    if (!im) throw OrbitEscapedError("lyapunov: orbit left V at step " + std::to_string(j));
    q = *im;
  }

  LyapunovStats s;
  s.steps = n;
  double sum = 0.0;
  for (double v : increments) sum += v;
  s.exponent = sum / n;

  if (block > 0 && resamples > 0 && n > block) {
    // Moving-block bootstrap: exponents are means of correlated increments.
    Rng rng(rng_seed);
    const int nblocks = (n + block - 1) / block;
    std::vector<double> means;
    means.reserve(resamples);
    for (int r = 0; r < resamples; ++r) {
      double acc = 0.0;
      std::size_t cnt = 0;
      for (int bidx = 0; bidx < nblocks; ++bidx) {
        const std::size_t start = rng.integer(std::uint64_t(n - block + 1));
        for (int j = 0; j < block; ++j) acc += increments[start + j];
        cnt += block;
      }
      means.push_back(acc / double(cnt));
    }
    double m = 0.0;
    for (double v : means) m += v;
    m /= means.size();
    double var = 0.0;
    for (double v : means) var += (v - m) * (v - m);
    s.bootstrap_se = std::sqrt(var / (means.size() - 1));
  }
  return s;
}

std::size_t distinct_points(const std::vector<PhasePoint>& pts, double tol) {
  std::vector<PhasePoint> reps;
  for (const auto& q : pts) {
    bool seen = false;
    for (const auto& r : reps) {
      if (std::abs(wrap_to_pi(q.theta - r.theta)) < tol && std::abs(q.z - r.z) < tol) {
        seen = true;
        break;
      }
    }
    if (!seen) reps.push_back(q);
  }
  return reps.size();
}

int detect_period(const MapParams& p, const PhasePoint& seed, int settle,
                  int max_period, double tol) {
  PhasePoint q = seed;
  for (int j = 0; j < settle; ++j) {
    auto im = apply(p, q);
    if (!im) return 0;
    q = *im;
  }
  const PhasePoint base = q;
  for (int per = 1; per <= max_period; ++per) {
    auto im = apply(p, q);
    if (!im) return 0;
    q = *im;
    if (std::abs(wrap_to_pi(q.theta - base.theta)) < tol && std::abs(q.z - base.z) < tol)
      return per;
  }
  return 0;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::kFullEscape: return "full-escape (horseshoe-only candidate)";
    case Regime::kSink: return "periodic sink";
    case Regime::kChaotic: return "chaotic (tangency candidate)";
    default: return "inconclusive";
  }
}

RegimeReport classify_regime(const MapParams& p, int n, int res, unsigned threads) {
  RegimeReport r;
  const EscapeGrid g = escape_time_grid(p, n, res, res, threads);
  r.survivor_fraction = g.survivor_fraction();
  if (g.survivor_count() == 0) {
    r.regime = Regime::kFullEscape;
    return r;
  }

  // First surviving cell seeds the recurrence / Lyapunov probes.
  PhasePoint seed;
  for (int iz = 0; iz < g.z_res && true; ++iz) {
    bool found = false;
    for (int it = 0; it < g.theta_res; ++it)
      if (g.at(iz, it) == EscapeGrid::kSurvived) {
        seed = PhasePoint(g.theta_of(it), g.z_of(iz));
        found = true;
        break;
      }
    if (found) break;
  }

  r.sink_period = detect_period(p, seed);
  if (r.sink_period > 0) {
    r.regime = Regime::kSink;
    return r;
  }
  try {
    r.lyapunov = lyapunov_exponent(p, seed, 20000);
    r.regime = (*r.lyapunov > 0.0) ? Regime::kChaotic : Regime::kInconclusive;
  } catch (const OrbitEscapedError&) {
    r.regime = Regime::kInconclusive;
  }
  return r;
}

}  // namespace tangle
