#pragma once

#include <cmath>

namespace anicurv {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2 operator-() const { return {-x, -y}; }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  Vec2 normalized() const { const double n = norm(); return {x / n, y / n}; }
  // counterclockwise rotation by 90 degrees
  Vec2 perp() const { return {-y, x}; }
  double angle() const { return std::atan2(y, x); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

}  // namespace anicurv
