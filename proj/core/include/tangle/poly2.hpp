#pragma once

#include <cmath>
#include <vector>

namespace tangle {

/// Sparse bivariate polynomial sum c * x^i * y^j.
class Poly2 {
 public:
  struct Term {
    int i = 0;
    int j = 0;
    double c = 0.0;
  };

  Poly2() = default;
  explicit Poly2(std::vector<Term> terms) : terms_(std::move(terms)) {}

  void add(int i, int j, double c) {
    if (c != 0.0) terms_.push_back({i, j, c});
  }

  double eval(double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.c * ipow(x, t.i) * ipow(y, t.j);
    return v;
  }

  double dx(double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms_)
      if (t.i > 0) v += t.c * t.i * ipow(x, t.i - 1) * ipow(y, t.j);
    return v;
  }

  double dy(double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms_)
      if (t.j > 0) v += t.c * t.j * ipow(x, t.i) * ipow(y, t.j - 1);
    return v;
  }

  /// True when the value and both first partials vanish at the origin,
  /// i.e. every term has total degree >= 2.
  bool vanishes_to_second_order() const {
    for (const auto& t : terms_)
      if (t.i + t.j < 2) return false;
    return true;
  }

  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  static double ipow(double x, int n) {
    double v = 1.0;
    for (int k = 0; k < n; ++k) v *= x;
    return v;
  }

  std::vector<Term> terms_;
};

}  // namespace tangle
