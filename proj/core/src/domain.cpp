#include "tangle/domain.hpp"

#include <algorithm>
#include <cmath>

#include "tangle/detail/rootfind.hpp"
#include "tangle/errors.hpp"

namespace tangle {

namespace {

// Dense scan resolution; resolves Fourier profiles up to harmonic ~50.
constexpr int kScanSamples = 4096;

}  // namespace

std::vector<ThetaInterval> vertical_strips(const MapParams& p, double z) {
  auto F = [&](double th) { return eval_F(p, th, z); };

  const double h = kTwoPi / kScanSamples;
  std::vector<double> roots;
  double prev_th = -kHalfPi;
  double prev_F = F(prev_th);
  bool any_change = false;
  for (int i = 1; i <= kScanSamples; ++i) {
    const double th = -kHalfPi + i * h;
    const double v = F(th);
    if ((prev_F <= 0.0) != (v <= 0.0)) {
      any_change = true;
      roots.push_back(detail::find_root(F, prev_th, th, 1e-12));
    }
    prev_th = th;
    prev_F = v;
  }
  if (!any_change)
    throw NoBoundaryError("vertical_strips: F(.,z) has no sign change at z");

  // Pair roots into F > 0 intervals; a strip may wrap across the seam at
  // 3pi/2, in which case it is split into its two representatives.
  std::vector<ThetaInterval> strips;
  const std::size_t n = roots.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = roots[i];
    const double hi = (i + 1 < n) ? roots[i + 1] : roots[0] + kTwoPi;
    const double mid = 0.5 * (lo + hi);
    if (F(mid) > 0.0) {
      if (hi <= 3.0 * kHalfPi) {
        strips.push_back({lo, hi});
      } else {
        strips.push_back({lo, 3.0 * kHalfPi});
        if (normalize_theta(hi) > -kHalfPi)
          strips.insert(strips.begin(), {-kHalfPi, normalize_theta(hi)});
      }
    }
  }
  std::sort(strips.begin(), strips.end(),
            [](const ThetaInterval& a, const ThetaInterval& b) { return a.lo < b.lo; });
  return strips;
}

ThetaInterval domain_boundaries(const MapParams& p, double z) {
  const auto strips = vertical_strips(p, z);
  // A strip wrapping the angle cut arrives as two fragments touching the
  // seam; count strips on the circle, not fragments.
  const bool lo_frag = strips.front().lo <= -kHalfPi + 1e-12;
  const bool hi_frag = strips.back().hi >= 3.0 * kHalfPi - 1e-12;
  const std::size_t on_circle = strips.size() - ((lo_frag && hi_frag) ? 1 : 0);
  if (on_circle != 1)
    throw MultipleRootsError("domain_boundaries: V has " + std::to_string(on_circle) +
                             " strips at this z");
  if (lo_frag && hi_frag)
    throw MultipleRootsError(
        "domain_boundaries: the single strip wraps the angle cut");
  return strips.front();
}

double dtheta1_dtheta(const MapParams& p, double theta, double z) {
  const double F = eval_F(p, theta, z);
  return 1.0 - p.d * F_theta(p, theta) / F;
}

double critical_theta(const MapParams& p, double z, const ThetaInterval& strip) {
  auto g = [&](double th) { return dtheta1_dtheta(p, th, z); };

  // Shrink inward until g is finite and has the boundary signs
  // (g -> -inf at theta_l+, +inf at theta_r-).
  const double pad = 1e-9 * std::max(1.0, strip.width());
  double lo = strip.lo + pad, hi = strip.hi - pad;
  while (g(lo) > 0.0 && lo < hi) lo += pad;
  while (g(hi) < 0.0 && hi > lo) hi -= pad;
  if (!(lo < hi))
    throw MultipleRootsError("critical_theta: no sign change of dtheta1/dtheta");

  // Monotonicity check: a single crossing over a dense sample.
  int crossings = 0;
  const int n = 512;
  double prev = g(lo);
  for (int i = 1; i <= n; ++i) {
    const double v = g(lo + (hi - lo) * i / n);
    if ((prev < 0.0) != (v < 0.0)) ++crossings;
    prev = v;
  }
  if (crossings != 1)
    throw MultipleRootsError("critical_theta: dtheta1/dtheta crosses zero " +
                             std::to_string(crossings) + " times in the strip");

  return detail::find_root(g, lo, hi, 1e-12);
}

double critical_theta(const MapParams& p, double z) {
  return critical_theta(p, z, domain_boundaries(p, z));
}

ThetaInterval fold_strip(const MapParams& p, double z, const ThetaInterval& strip) {
  const double tc = critical_theta(p, z, strip);
  auto g = [&](double th) { return dtheta1_dtheta(p, th, z); };

  const double pad = 1e-9 * std::max(1.0, strip.width());
  double lo = strip.lo + pad, hi = strip.hi - pad;
  while (g(lo) > -2.0 && lo < tc) lo += pad;
  while (g(hi) < 2.0 && hi > tc) hi -= pad;

  const double left = detail::find_root([&](double th) { return g(th) + 2.0; }, lo, tc, 1e-10);
  const double right = detail::find_root([&](double th) { return g(th) - 2.0; }, tc, hi, 1e-10);
  return {left, right};
}

ThetaInterval fold_strip(const MapParams& p, double z) {
  return fold_strip(p, z, domain_boundaries(p, z));
}

Box v_bounding_box(const MapParams& p, double z_lo, double z_hi, int z_samples) {
  double tlo = 3.0 * kHalfPi, thi = -kHalfPi;
  bool found = false;
  for (int i = 0; i < z_samples; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / (z_samples - 1);
    try {
      for (const auto& s : vertical_strips(p, z)) {
        tlo = std::min(tlo, s.lo);
        thi = std::max(thi, s.hi);
        found = true;
      }
    } catch (const NoBoundaryError&) {
      if (eval_F(p, 0.0, z) > 0.0) {
        // V is the whole circle at this z.
        tlo = -kHalfPi;
        thi = -kHalfPi + kTwoPi;
        found = true;
      }
    }
  }
  if (!found) throw DegenerateDomainError("v_bounding_box: V is empty");
  return {tlo, thi, z_lo, z_hi};
}

}  // namespace tangle
