#pragma once

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <utility>

namespace tangle::detail {

/// Bracketed root to absolute tolerance; toms748 with a bisection-grade
/// termination criterion. f(lo) and f(hi) must have opposite signs.
template <class F>
double find_root(F&& f, double lo, double hi, double abs_tol = 1e-12) {
  auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(std::forward<F>(f), lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace tangle::detail
