#include "tangle/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tangle/errors.hpp"
#include "tangle/parallel.hpp"

namespace tangle {

namespace {

// Signed theta-distance from (theta1, z1) to the set V at height z1:
// positive inside U (clearance to the nearest strip), negative inside V
// (depth behind the nearest strip edge). Angular metric on the circle.
double signed_distance_to_V(const std::vector<ThetaInterval>& strips,
                            const PhasePoint& im) {
  double best = std::numeric_limits<double>::infinity();
  bool inside = false;
  double depth = std::numeric_limits<double>::infinity();
  for (const auto& s : strips) {
    if (s.contains(im.theta)) {
      inside = true;
      depth = std::min({depth, im.theta - s.lo, s.hi - im.theta});
    } else {
      const double d1 = std::abs(wrap_to_pi(im.theta - s.lo));
      const double d2 = std::abs(wrap_to_pi(im.theta - s.hi));
      best = std::min({best, d1, d2});
    }
  }
  return inside ? -depth : best;
}

}  // namespace

CertificateReport certify_horseshoe(const MapParams& p, const ConeSpec& cones,
                                    const CertifySampling& sampling, unsigned threads) {
  if (!cones.valid()) throw PreconditionError("certify_horseshoe: bad cone spec");

  CertificateReport rep;
  rep.param_a = p.a;
  rep.sampling = sampling;

  // Geometry at a z-grid: strips and the fold strip per height. Domain
  // failures here mean there is nothing to certify.
  const int nz = std::max(2, sampling.v_z);
  std::vector<ThetaInterval> strip_of_z(nz);
  std::vector<ThetaInterval> fold_of_z(nz);
  try {
    for (int iz = 0; iz < nz; ++iz) {
      const double z = -1.0 + 2.0 * (iz + 0.5) / nz;
      strip_of_z[iz] = domain_boundaries(p, z);
      fold_of_z[iz] = fold_strip(p, z, strip_of_z[iz]);
    }
  } catch (const AnalysisError& e) {
    throw DegenerateDomainError(std::string("certify_horseshoe: ") + e.what());
  }

  // --- fold condition: F(V_f) strictly inside U ---------------------------
  const int nfz = std::max(2, int(std::lround(std::sqrt(double(sampling.vf_samples) / 10.0))));
  const int nft = std::max(4, sampling.vf_samples / nfz);
  std::vector<double> fold_margins(std::size_t(nfz), std::numeric_limits<double>::infinity());
  long fold_count = 0;
  for (int iz = 0; iz < nfz; ++iz) {
    const double z = -1.0 + 2.0 * (iz + 0.5) / nfz;
    ThetaInterval fold;
    std::vector<ThetaInterval> strips_at_im;
    try {
      fold = fold_strip(p, z);
    } catch (const AnalysisError&) {
      continue;
    }
    double m = std::numeric_limits<double>::infinity();
    for (int it = 0; it < nft; ++it) {
      const double th = fold.lo + fold.width() * (it + 0.5) / nft;
      auto im = apply(p, PhasePoint(th, z));
      ++fold_count;
      if (!im) continue;  // image escaped past F<=0: deep in U, fine
      std::vector<ThetaInterval> strips;
      try {
        strips = vertical_strips(p, im->z);
      } catch (const NoBoundaryError&) {
        // V covers the whole circle at that height: the image is in V.
        m = std::min(m, -kPi);
        continue;
      }
      m = std::min(m, signed_distance_to_V(strips, *im));
    }
    fold_margins[iz] = m;
  }
  rep.fold_samples = fold_count;
  rep.fold_margin = *std::min_element(fold_margins.begin(), fold_margins.end());
  rep.fold_in_U = rep.fold_margin > 0.0 && std::isfinite(rep.fold_margin);

  // --- cone conditions on V \ V_f with image in V -------------------------
  const int nth = std::max(2, sampling.v_theta);
  struct RowResult {
    double h_worst = 0.0;  // max |image slope| of horizontal boundary vectors
    double v_worst = std::numeric_limits<double>::infinity();  // min |preimage slope|
    long count = 0;
    long deep = 0;  // F < sqrt(k): the proof's second case, diagnostic only
  };
  std::vector<RowResult> rows(nz);

  parallel_for(std::size_t(nz), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t iz = b; iz < e; ++iz) {
      const double z = -1.0 + 2.0 * (iz + 0.5) / nz;
      const ThetaInterval& strip = strip_of_z[iz];
      const ThetaInterval& fold = fold_of_z[iz];
      RowResult& rr = rows[iz];
      for (int it = 0; it < nth; ++it) {
        const double th = strip.lo + strip.width() * (it + 0.5) / nth;
        if (fold.contains(th)) continue;
        const PhasePoint q(th, z);
        if (eval_F(p, q) <= p.escape_floor) continue;
        auto im = apply(p, q);
        if (!im) continue;
        if (eval_F(p, *im) <= p.escape_floor) continue;  // image not in V

        const Mat2 J = jacobian(p, q);
        ++rr.count;
        if (eval_F(p, q) < std::sqrt(p.k)) ++rr.deep;
        for (double s0 : {-cones.horizontal_bound, cones.horizontal_bound}) {
          const Vec2 v = J * Vec2{1.0, s0};
          rr.h_worst = std::max(rr.h_worst, std::abs(v.y / v.x));
        }
        const Mat2 Jinv = J.inverse();
        for (double si : {-1.0 / cones.vertical_bound, 1.0 / cones.vertical_bound}) {
          const Vec2 v = Jinv * Vec2{si, 1.0};
          rr.v_worst = std::min(rr.v_worst, std::abs(v.y / v.x));
        }
      }
    }
  });

  double h_worst = 0.0;
  double v_worst = std::numeric_limits<double>::infinity();
  long count = 0;
  long deep = 0;
  for (const auto& rr : rows) {
    h_worst = std::max(h_worst, rr.h_worst);
    v_worst = std::min(v_worst, rr.v_worst);
    count += rr.count;
    deep += rr.deep;
  }
  rep.cone_samples = count;
  rep.case_deep = deep;
  rep.cone_h_margin = cones.horizontal_bound - h_worst;
  rep.cone_v_margin = (count > 0 ? v_worst - cones.vertical_bound
                                 : -std::numeric_limits<double>::infinity());
  rep.cone_h_ok = count > 0 && rep.cone_h_margin > 0.0;
  rep.cone_v_ok = count > 0 && rep.cone_v_margin > 0.0;
  return rep;
}

ScanResult scan_parameter(const MapParams& base, double a_lo, double a_hi, int steps,
                          const ConeSpec& cones, const CertifySampling& sampling,
                          unsigned threads) {
  if (steps < 2) throw PreconditionError("scan_parameter: steps >= 2 required");

  ScanResult out;
  out.steps.resize(steps);
  parallel_for(std::size_t(steps), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      MapParams p = base;
      p.a = a_lo + (a_hi - a_lo) * double(i) / double(steps - 1);
      const CertificateReport rep = certify_horseshoe(p, cones, sampling, 1);
      out.steps[i] = {p.a, rep.certified(), rep.fold_margin, rep.cone_h_margin,
                      rep.cone_v_margin};
    }
  });

  for (const auto& s : out.steps) {
    if (out.intervals.empty() || out.intervals.back().certified != s.certified)
      out.intervals.push_back({s.a, s.a, s.certified});
    else
      out.intervals.back().a_hi = s.a;
  }
  return out;
}

}  // namespace tangle
