#pragma once

#include <cmath>
#include <numbers>

namespace tangle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Angles live on [-pi/2, 3pi/2), matching the interval the vertical strips
// V and U naturally sit in for the sine profile.
inline double normalize_theta(double theta) {
  double t = std::fmod(theta + kHalfPi, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t - kHalfPi;
}

// Signed angular difference in (-pi, pi].
inline double wrap_to_pi(double delta) {
  double t = std::fmod(delta, kTwoPi);
  if (t <= -kPi) t += kTwoPi;
  if (t > kPi) t -= kTwoPi;
  return t;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double wedge(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// Row-major 2x2 matrix; enough linear algebra for Jacobian work.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  Vec2 operator*(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
  }
  Mat2 operator*(const Mat2& m) const {
    return {a11 * m.a11 + a12 * m.a21, a11 * m.a12 + a12 * m.a22,
            a21 * m.a11 + a22 * m.a21, a21 * m.a12 + a22 * m.a22};
  }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
};

// Slope of a tangent vector: z-component over theta-component.
inline double slope(const Vec2& v) { return v.y / v.x; }

}  // namespace tangle
