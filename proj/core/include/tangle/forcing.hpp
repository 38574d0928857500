#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace tangle {

/// Periodic forcing profile Phi(theta) = sum_n (c_n cos(n theta) + s_n sin(n theta)).
///
/// Coefficient vectors are indexed by harmonic, entry 0 is harmonic 1.
/// The default profile is pure sin(theta).
class ForcingProfile {
 public:
  ForcingProfile() : sin_{1.0}, cos_{} {}
  ForcingProfile(std::vector<double> sin_coeffs, std::vector<double> cos_coeffs)
      : sin_(std::move(sin_coeffs)), cos_(std::move(cos_coeffs)) {}

  static ForcingProfile pure_sin() { return ForcingProfile(); }
  static ForcingProfile sin_plus_sin3() { return ForcingProfile({1.0, 0.0, 1.0}, {}); }

  double eval(double theta) const {
    double v = 0.0;
    for (std::size_t i = 0; i < sin_.size(); ++i)
      if (sin_[i] != 0.0) v += sin_[i] * std::sin(double(i + 1) * theta);
    for (std::size_t i = 0; i < cos_.size(); ++i)
      if (cos_[i] != 0.0) v += cos_[i] * std::cos(double(i + 1) * theta);
    return v;
  }

  double deriv(double theta) const {
    double v = 0.0;
    for (std::size_t i = 0; i < sin_.size(); ++i)
      if (sin_[i] != 0.0) v += sin_[i] * double(i + 1) * std::cos(double(i + 1) * theta);
    for (std::size_t i = 0; i < cos_.size(); ++i)
      if (cos_[i] != 0.0) v -= cos_[i] * double(i + 1) * std::sin(double(i + 1) * theta);
    return v;
  }

  double second_deriv(double theta) const {
    double v = 0.0;
    for (std::size_t i = 0; i < sin_.size(); ++i) {
      const double n = double(i + 1);
      if (sin_[i] != 0.0) v -= sin_[i] * n * n * std::sin(n * theta);
    }
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const double n = double(i + 1);
      if (cos_[i] != 0.0) v -= cos_[i] * n * n * std::cos(n * theta);
    }
    return v;
  }

  /// Crude sup bound: sum of |coefficients|.
  double max_abs_bound() const {
    double v = 0.0;
    for (double c : sin_) v += std::abs(c);
    for (double c : cos_) v += std::abs(c);
    return v;
  }

  bool is_pure_sin() const {
    if (sin_.size() != 1 || sin_[0] == 0.0) return false;
    for (double c : cos_)
      if (c != 0.0) return false;
    return true;
  }

  bool empty() const {
    for (double c : sin_)
      if (c != 0.0) return false;
    for (double c : cos_)
      if (c != 0.0) return false;
    return true;
  }

  std::size_t harmonics() const { return std::max(sin_.size(), cos_.size()); }
  double sin_coeff(std::size_t n) const { return n >= 1 && n <= sin_.size() ? sin_[n - 1] : 0.0; }
  double cos_coeff(std::size_t n) const { return n >= 1 && n <= cos_.size() ? cos_[n - 1] : 0.0; }

  const std::vector<double>& sin_coeffs() const { return sin_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }

 private:
  std::vector<double> sin_;
  std::vector<double> cos_;
};

}  // namespace tangle
