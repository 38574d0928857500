#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tangle::detail {

/// Fritsch-Carlson monotone cubic (PCHIP) interpolant with an exact
/// per-segment antiderivative. Knots must be strictly increasing.
class Pchip {
 public:
  Pchip() = default;

  Pchip(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("Pchip: need >= 2 knots");
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      if (h[i] <= 0.0) throw std::invalid_argument("Pchip: knots not increasing");
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
    } else {
      for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
          d_[i] = 0.0;
        } else {
          const double w1 = 2.0 * h[i] + h[i - 1];
          const double w2 = h[i] + 2.0 * h[i - 1];
          d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
      }
      d_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
      d_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
  }

  double operator()(double x) const {
    const auto [i, t, h] = locate(x);
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
  }

  /// Integral over [x0(), x] (exact for the piecewise cubic).
  double integral(double x) const {
    build_cumulative();
    const auto [i, t, h] = locate(x);
    return cum_[i] + segment_integral(i, t) * h;
  }

  /// Integral over [a, b].
  double integral(double a, double b) const { return integral(b) - integral(a); }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }

 private:
  static double edge_slope(double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  }

  std::tuple<std::size_t, double, double> locate(double x) const {
    const std::size_t n = x_.size();
    std::size_t i;
    if (x <= x_.front()) {
      i = 0;
    } else if (x >= x_.back()) {
      i = n - 2;
    } else {
      i = std::size_t(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    }
    const double h = x_[i + 1] - x_[i];
    return {i, (x - x_[i]) / h, h};
  }

  // Antiderivative of the Hermite basis on [0, t], in units of h.
  double segment_integral(std::size_t i, double t) const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double H00 = t - t3 + 0.5 * t4;
    const double H10 = 0.5 * t2 - (2.0 / 3.0) * t3 + 0.25 * t4;
    const double H01 = t3 - 0.5 * t4;
    const double H11 = 0.25 * t4 - t3 / 3.0;
    const double h = x_[i + 1] - x_[i];
    return H00 * y_[i] + h * H10 * d_[i] + H01 * y_[i + 1] + h * H11 * d_[i + 1];
  }

  void build_cumulative() const {
    if (!cum_.empty()) return;
    cum_.assign(x_.size() - 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      cum_[i] = acc;
      acc += segment_integral(i, 1.0) * (x_[i + 1] - x_[i]);
    }
  }

  std::vector<double> x_, y_, d_;
  mutable std::vector<double> cum_;
};

}  // namespace tangle::detail
